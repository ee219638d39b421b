#include "filterint/integrand.hpp"

#include <algorithm>
#include <sstream>

namespace filterint {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<Rational> parse_list(const std::string& text) {
    std::vector<Rational> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        out.push_back(Rational::parse(item));
    }
    return out;
}

std::string join(const std::vector<Rational>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out += (i ? "," : "") + values[i].str();
    }
    return out;
}

Rational horner(const std::vector<Rational>& coefficients, const Rational& t) {
    Rational acc;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
        acc = acc * t + *it;
    }
    return acc;
}

std::pair<Rational, Rational> interval_product(const std::pair<Rational, Rational>& x,
                                               const std::pair<Rational, Rational>& y) {
    const Rational p[] = {x.first * y.first, x.first * y.second, x.second * y.first, x.second * y.second};
    return {*std::min_element(std::begin(p), std::end(p)), *std::max_element(std::begin(p), std::end(p))};
}

Envelope polynomial_envelope(const std::vector<Rational>& c, const Interval& cell) {
    const Rational& a = cell.lo();
    const Rational& b = cell.hi();
    if (c.size() <= 2) {
        const Rational fa = horner(c, a);
        const Rational fb = horner(c, b);
        return {min(fa, fb), max(fa, fb), true};
    }
    if (c.size() == 3) {
        Rational lo = min(horner(c, a), horner(c, b));
        Rational hi = max(horner(c, a), horner(c, b));
        const Rational vertex = -c[1] / (Rational(2) * c[2]);
        if (a < vertex && vertex < b) {
            const Rational fv = horner(c, vertex);
            lo = min(lo, fv);
            hi = max(hi, fv);
        }
        return {lo, hi, true};
    }
    // Interval Horner: a sound bracket, not the true range.
    std::pair<Rational, Rational> acc{c.back(), c.back()};
    for (auto it = c.rbegin() + 1; it != c.rend(); ++it) {
        acc = interval_product(acc, {a, b});
        acc.first += *it;
        acc.second += *it;
    }
    return {acc.first, acc.second, false};
}

}  // namespace

Integrand Integrand::constant(Rational c) {
    return Integrand(Constant{std::move(c)});
}

Integrand Integrand::identity() {
    return Integrand(Identity{});
}

Integrand Integrand::polynomial(std::vector<Rational> coefficients) {
    while (!coefficients.empty() && coefficients.back().is_zero()) {
        coefficients.pop_back();
    }
    if (coefficients.empty()) {
        coefficients.emplace_back(0);
    }
    return Integrand(Polynomial{std::move(coefficients)});
}

Integrand Integrand::step(std::vector<Rational> breakpoints, std::vector<Rational> values) {
    if (values.size() != breakpoints.size() + 1) {
        throw std::invalid_argument("step function needs one more value than breakpoints");
    }
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
        if (!(breakpoints[i - 1] < breakpoints[i])) {
            throw std::invalid_argument("step breakpoints must be strictly increasing");
        }
    }
    return Integrand(Step{std::move(breakpoints), std::move(values)});
}

Integrand Integrand::spike(PointSequence points, Rational scale) {
    if (scale.sign() <= 0) {
        throw std::invalid_argument("spike scale must be positive");
    }
    return Integrand(Spike{std::move(points), std::move(scale)});
}

Integrand Integrand::dirichlet() {
    return Integrand(Dirichlet{});
}

Integrand Integrand::combination(std::vector<std::pair<Rational, Integrand>> terms) {
    if (terms.empty()) {
        return constant(Rational(0));
    }
    return Integrand(Combination{std::make_shared<const std::vector<std::pair<Rational, Integrand>>>(std::move(terms))});
}

Integrand Integrand::parse(const std::string& text) {
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string body = colon == std::string::npos ? "" : text.substr(colon + 1);
    try {
        if (head == "identity" && body.empty()) {
            return identity();
        }
        if (head == "dirichlet" && body.empty()) {
            return dirichlet();
        }
        if (head == "constant" && !body.empty()) {
            return constant(Rational::parse(body));
        }
        if (head == "polynomial" && !body.empty()) {
            return polynomial(parse_list(body));
        }
        if (head == "step") {
            const auto semi = body.find(';');
            if (semi != std::string::npos) {
                const std::string cuts = body.substr(0, semi);
                return step(cuts.empty() ? std::vector<Rational>{} : parse_list(cuts),
                            parse_list(body.substr(semi + 1)));
            }
        }
        if (head == "spike" && !body.empty()) {
            const auto semi = body.find(';');
            if (semi == std::string::npos) {
                return spike(PointSequence::parse(body));
            }
            return spike(PointSequence::parse(body.substr(0, semi)), Rational::parse(body.substr(semi + 1)));
        }
    } catch (const RationalError& e) {
        throw std::invalid_argument("malformed integrand \"" + text + "\": " + e.what());
    }
    throw std::invalid_argument("unknown integrand \"" + text + "\"");
}

Rational Integrand::operator()(const Rational& t) const {
    return std::visit(
        overloaded{
            [](const Constant& d) { return d.c; },
            [&](const Identity&) { return t; },
            [&](const Polynomial& d) { return horner(d.coefficients, t); },
            [&](const Step& d) {
                const auto idx = std::upper_bound(d.breakpoints.begin(), d.breakpoints.end(), t) -
                                 d.breakpoints.begin();
                return d.values[static_cast<std::size_t>(idx)];
            },
            [&](const Spike& d) {
                const auto n = d.points.index_of(t);
                return n ? d.scale * Rational(mpq_class(*n)) : Rational(0);
            },
            [](const Dirichlet&) { return Rational(1); },
            [&](const Combination& d) {
                Rational sum;
                for (const auto& [coef, term] : *d.terms) {
                    sum += coef * term(t);
                }
                return sum;
            },
        },
        data_);
}

Envelope Integrand::envelope(const Interval& cell) const {
    return std::visit(
        overloaded{
            [](const Constant& d) { return Envelope{d.c, d.c, true}; },
            [&](const Identity&) { return Envelope{cell.lo(), cell.hi(), true}; },
            [&](const Polynomial& d) { return polynomial_envelope(d.coefficients, cell); },
            [&](const Step& d) {
                const auto first = std::upper_bound(d.breakpoints.begin(), d.breakpoints.end(), cell.lo()) -
                                   d.breakpoints.begin();
                const auto last = std::upper_bound(d.breakpoints.begin(), d.breakpoints.end(), cell.hi()) -
                                  d.breakpoints.begin();
                const auto b = d.values.begin();
                return Envelope{*std::min_element(b + first, b + last + 1), *std::max_element(b + first, b + last + 1),
                                true};
            },
            [&](const Spike& d) {
                // A nondegenerate cell always holds non-points, where f = 0.
                if (d.points.touches_accumulation(cell.lo(), cell.hi())) {
                    return Envelope{Rational(0), std::nullopt, true};
                }
                const auto n = d.points.max_index_in(cell.lo(), cell.hi());
                return Envelope{Rational(0), n ? d.scale * Rational(mpq_class(*n)) : Rational(0), true};
            },
            [](const Dirichlet&) { return Envelope{Rational(0), Rational(1), true}; },
            [&](const Combination& d) {
                Envelope out{Rational(0), Rational(0), true};
                std::size_t varying = 0;
                for (const auto& [coef, term] : *d.terms) {
                    if (coef.is_zero()) {
                        continue;
                    }
                    const Envelope e = term.envelope(cell);
                    if (term.kind() != Kind::constant) {
                        ++varying;
                    }
                    out.exact = out.exact && e.exact;
                    const auto& low_side = coef.sign() > 0 ? e.inf : e.sup;
                    const auto& high_side = coef.sign() > 0 ? e.sup : e.inf;
                    if (out.inf && low_side) {
                        *out.inf += coef * *low_side;
                    } else {
                        out.inf.reset();
                    }
                    if (out.sup && high_side) {
                        *out.sup += coef * *high_side;
                    } else {
                        out.sup.reset();
                    }
                }
                // Extremes of different terms need not coincide.
                out.exact = out.exact && varying <= 1;
                return out;
            },
        },
        data_);
}

bool Integrand::is_bounded() const {
    return std::visit(overloaded{
                          [](const Spike& d) { return !d.points.is_infinite(); },
                          [](const Combination& d) {
                              return std::all_of(d.terms->begin(), d.terms->end(), [](const auto& term) {
                                  return term.first.is_zero() || term.second.is_bounded();
                              });
                          },
                          [](const auto&) { return true; },
                      },
                      data_);
}

Integrand::Kind Integrand::kind() const {
    return static_cast<Kind>(data_.index());
}

std::string Integrand::text() const {
    return std::visit(overloaded{
                          [](const Constant& d) { return "constant:" + d.c.str(); },
                          [](const Identity&) { return std::string("identity"); },
                          [](const Polynomial& d) { return "polynomial:" + join(d.coefficients); },
                          [](const Step& d) { return "step:" + join(d.breakpoints) + ";" + join(d.values); },
                          [](const Spike& d) {
                              return "spike:" + d.points.text() +
                                     (d.scale == Rational(1) ? "" : ";" + d.scale.str());
                          },
                          [](const Dirichlet&) { return std::string("dirichlet"); },
                          [](const Combination& d) {
                              std::string out = "combination:";
                              for (std::size_t i = 0; i < d.terms->size(); ++i) {
                                  const auto& [coef, term] = (*d.terms)[i];
                                  out += (i ? "+" : "") + coef.str() + "*(" + term.text() + ")";
                              }
                              return out;
                          },
                      },
                      data_);
}

const PointSequence* Integrand::spike_points() const {
    const auto* d = std::get_if<Spike>(&data_);
    return d ? &d->points : nullptr;
}

std::optional<Rational> Integrand::spike_scale() const {
    const auto* d = std::get_if<Spike>(&data_);
    return d ? std::optional<Rational>(d->scale) : std::nullopt;
}

}  // namespace filterint
