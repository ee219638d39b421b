#include "filterint/filters.hpp"

#include <algorithm>
#include <sstream>

#include "filterint/metric.hpp"
#include "filterint/parallel.hpp"
#include "filterint/restriction.hpp"

namespace filterint {

// ---------------------------------------------------------------- schedules

DeltaSchedule DeltaSchedule::power(Rational scale, unsigned exponent) {
    if (scale.sign() <= 0 || exponent == 0) {
        throw FilterError("power schedule needs scale > 0 and exponent >= 1");
    }
    std::string text = scale.str() + "/k" + (exponent == 1 ? "" : "^" + std::to_string(exponent));
    return DeltaSchedule(
        [scale, exponent](std::size_t k) {
            return scale / pow(Rational(static_cast<std::int64_t>(k)), exponent);
        },
        std::move(text));
}

DeltaSchedule DeltaSchedule::geometric(Rational scale, Rational base) {
    if (scale.sign() <= 0 || !(Rational(1) < base)) {
        throw FilterError("geometric schedule needs scale > 0 and base > 1");
    }
    std::string text = scale.str() + "/" + base.str() + "^k";
    return DeltaSchedule(
        [scale, base](std::size_t k) { return scale / pow(base, static_cast<unsigned>(k)); }, std::move(text));
}

DeltaSchedule DeltaSchedule::custom(Fn fn, std::string text, std::size_t check_depth) {
    Rational previous = fn(1);
    if (previous.sign() <= 0) {
        throw FilterError("schedule " + text + " is not positive at index 1");
    }
    for (std::size_t k = 2; k <= check_depth; ++k) {
        Rational current = fn(k);
        if (current.sign() <= 0 || !(current < previous)) {
            throw FilterError("schedule " + text + " is not strictly decreasing and positive at index " +
                              std::to_string(k));
        }
        previous = std::move(current);
    }
    return DeltaSchedule(std::move(fn), std::move(text));
}

DeltaSchedule DeltaSchedule::parse(const std::string& text) {
    const auto slash = text.rfind('/');
    if (slash == std::string::npos || slash == 0) {
        throw FilterError("malformed delta schedule \"" + text + "\"");
    }
    Rational scale;
    try {
        scale = Rational::parse(text.substr(0, slash));
    } catch (const RationalError&) {
        throw FilterError("malformed delta schedule \"" + text + "\"");
    }
    const std::string denom = text.substr(slash + 1);
    try {
        if (denom == "k") {
            return power(scale, 1);
        }
        if (denom.rfind("k^", 0) == 0) {
            const Rational e = Rational::parse(denom.substr(2));
            if (!e.is_integer() || e.sign() <= 0) {
                throw FilterError("exponent must be a positive integer in \"" + text + "\"");
            }
            return power(scale, static_cast<unsigned>(e.numerator().get_ui()));
        }
        if (denom.size() > 2 && denom.compare(denom.size() - 2, 2, "^k") == 0) {
            return geometric(scale, Rational::parse(denom.substr(0, denom.size() - 2)));
        }
    } catch (const RationalError&) {
    }
    throw FilterError("malformed delta schedule \"" + text + "\"");
}

Rational DeltaSchedule::operator()(std::size_t index) const {
    if (index == 0) {
        throw FilterError("base indices start at 1");
    }
    return fn_(index);
}

// ------------------------------------------------------------------ points

PointSequence PointSequence::harmonic(Rational scale, Rational offset) {
    if (scale.sign() <= 0) {
        throw FilterError("harmonic point sequence needs a positive scale");
    }
    PointSequence seq;
    seq.scale_ = std::move(scale);
    seq.offset_ = std::move(offset);
    return seq;
}

PointSequence PointSequence::from_points(std::vector<Rational> points) {
    auto lookup = std::make_shared<std::map<Rational, std::size_t>>();
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!lookup->emplace(points[i], i + 1).second) {
            throw FilterError("point " + points[i].str() + " listed twice");
        }
    }
    PointSequence seq;
    seq.explicit_points_ = std::move(points);
    seq.lookup_ = std::move(lookup);
    return seq;
}

PointSequence PointSequence::parse(const std::string& text) {
    try {
        if (text.size() > 2 && text.compare(text.size() - 2, 2, "/n") == 0) {
            const std::string head = text.substr(0, text.size() - 2);
            const auto plus = head.find('+');
            if (plus == std::string::npos) {
                return harmonic(Rational::parse(head));
            }
            return harmonic(Rational::parse(head.substr(plus + 1)), Rational::parse(head.substr(0, plus)));
        }
        std::vector<Rational> points;
        std::stringstream in(text);
        std::string item;
        while (std::getline(in, item, ',')) {
            points.push_back(Rational::parse(item));
        }
        if (points.empty()) {
            throw FilterError("empty point list");
        }
        return from_points(std::move(points));
    } catch (const RationalError& e) {
        throw FilterError("malformed point sequence \"" + text + "\": " + e.what());
    }
}

std::optional<Rational> PointSequence::at(const mpz_class& n) const {
    if (n < 1) {
        return std::nullopt;
    }
    if (explicit_points_) {
        if (n > mpz_class(static_cast<unsigned long>(explicit_points_->size()))) {
            return std::nullopt;
        }
        return (*explicit_points_)[n.get_ui() - 1];
    }
    return offset_ + scale_ / Rational(mpq_class(n));
}

std::optional<mpz_class> PointSequence::index_of(const Rational& t) const {
    if (explicit_points_) {
        const auto it = lookup_->find(t);
        if (it == lookup_->end()) {
            return std::nullopt;
        }
        return mpz_class(static_cast<unsigned long>(it->second));
    }
    if (!(offset_ < t)) {
        return std::nullopt;
    }
    const Rational q = scale_ / (t - offset_);
    if (!q.is_integer()) {
        return std::nullopt;
    }
    return q.numerator();
}

bool PointSequence::strictly_decreasing() const {
    if (!explicit_points_) {
        return true;
    }
    for (std::size_t i = 1; i < explicit_points_->size(); ++i) {
        if (!((*explicit_points_)[i] < (*explicit_points_)[i - 1])) {
            return false;
        }
    }
    return true;
}

bool PointSequence::touches_accumulation(const Rational& lo, const Rational& hi) const {
    return !explicit_points_ && lo <= offset_ && offset_ < hi;
}

std::optional<mpz_class> PointSequence::max_index_in(const Rational& lo, const Rational& hi) const {
    if (explicit_points_) {
        std::optional<mpz_class> best;
        for (std::size_t i = 0; i < explicit_points_->size(); ++i) {
            const auto& p = (*explicit_points_)[i];
            if (lo <= p && p <= hi) {
                best = mpz_class(static_cast<unsigned long>(i + 1));
            }
        }
        return best;
    }
    if (touches_accumulation(lo, hi) || !(offset_ < hi)) {
        return std::nullopt;
    }
    // offset < lo here: points in [lo, hi] have n in [scale/(hi-off), scale/(lo-off)].
    const mpz_class n_max = floor(scale_ / (lo - offset_));
    const mpz_class ceil_min = ceil(scale_ / (hi - offset_));
    const mpz_class n_min = ceil_min < 1 ? mpz_class(1) : ceil_min;
    if (n_max < n_min) {
        return std::nullopt;
    }
    return n_max;
}

std::string PointSequence::text() const {
    if (explicit_points_) {
        std::string out;
        for (std::size_t i = 0; i < explicit_points_->size(); ++i) {
            out += (i ? "," : "") + (*explicit_points_)[i].str();
        }
        return out;
    }
    return (offset_.is_zero() ? "" : offset_.str() + "+") + scale_.str() + "/n";
}

// ------------------------------------------------------------------- bases

std::string to_string(BaseKind kind) {
    switch (kind) {
        case BaseKind::mesh: return "mesh";
        case BaseKind::exactly_tagged: return "exact_tagged";
        case BaseKind::subsegment: return "subsegment";
        case BaseKind::custom: return "custom";
    }
    return "unknown";
}

FilterBase FilterBase::custom(Interval domain, Membership membership, Draw draw, std::string description,
                              bool tag_independent) {
    FilterBase base(BaseKind::custom, std::move(domain), std::move(description));
    base.membership_ = std::move(membership);
    base.draw_ = std::move(draw);
    base.tag_independent_ = tag_independent;
    return base;
}

bool FilterBase::is_member(std::size_t index, const TaggedPartition& tp) const {
    if (index == 0) {
        throw FilterError("base indices start at 1");
    }
    return tp.domain() == domain_ && membership_(index, tp);
}

TaggedPartition FilterBase::draw(std::size_t index, std::size_t ordinal, std::uint64_t seed) const {
    if (index == 0) {
        throw FilterError("base indices start at 1");
    }
    Rng rng(derive_stream(seed, index, ordinal));
    return draw_(index, ordinal, rng);
}

std::vector<TaggedPartition> FilterBase::sample(std::size_t index, std::uint64_t seed, std::size_t count,
                                                std::size_t jobs) const {
    return parallel_map(count, jobs, [&](std::size_t ordinal) { return draw(index, ordinal, seed); });
}

FilterBase FilterBase::with_witness_strategy(WitnessStrategy strategy) const {
    FilterBase copy = *this;
    copy.witness_ = std::move(strategy);
    return copy;
}

namespace {

std::vector<Rational> draw_tags(const std::vector<Rational>& xi, Rng& rng, const SamplerConfig& config,
                                const AvoidSet* avoid) {
    std::vector<Rational> tags;
    tags.reserve(xi.size() - 1);
    for (std::size_t k = 0; k + 1 < xi.size(); ++k) {
        std::size_t attempts = 0;
        while (true) {
            Rational tag = random_tag(xi[k], xi[k + 1], rng, config.denominator_bound);
            const bool duplicate = !tags.empty() && tags.back() == tag;
            if (!duplicate && !(avoid && avoid->contains(tag))) {
                tags.push_back(std::move(tag));
                break;
            }
            if (++attempts > config.tag_retry_cap) {
                throw FilterError("tag sampler exceeded " + std::to_string(config.tag_retry_cap) +
                                  " retries in cell [" + xi[k].str() + ", " + xi[k + 1].str() + "]");
            }
        }
    }
    return tags;
}

void validate_config(const SamplerConfig& config) {
    if (config.denominator_bound < 4 || config.denominator_bound % 4 != 0) {
        throw FilterError("denominator bound must be a positive multiple of 4");
    }
    if (config.tag_retry_cap == 0 || config.max_cells < 2) {
        throw FilterError("retry cap and cell cap must be positive");
    }
}

}  // namespace

FilterBase mesh_base(const Interval& domain, DeltaSchedule delta, SamplerConfig config) {
    validate_config(config);
    FilterBase base(BaseKind::mesh, domain, "mesh(delta=" + delta.text() + ")");
    base.membership_ = [delta](std::size_t k, const TaggedPartition& tp) { return diameter(tp) < delta(k); };
    base.draw_ = [domain, delta, config](std::size_t k, std::size_t, Rng& rng) {
        auto xi = jittered_mesh_breakpoints(domain, delta(k), rng, config.denominator_bound, config.max_cells);
        auto tags = draw_tags(xi, rng, config, nullptr);
        return make_partition(domain, std::move(xi), std::move(tags));
    };
    base.tag_independent_ = true;
    base.delta_ = std::move(delta);
    base.config_ = config;
    return base;
}

FilterBase exactly_tagged_base(const Interval& domain, AvoidSet avoid, DeltaSchedule delta, SamplerConfig config) {
    validate_config(config);
    if (!avoid.strictly_decreasing()) {
        throw FilterError("avoid set " + avoid.text() + " is not strictly decreasing");
    }
    FilterBase base(BaseKind::exactly_tagged, domain,
                    "exact_tagged(avoid=" + avoid.text() + ", delta=" + delta.text() + ")");
    base.membership_ = [delta, avoid](std::size_t k, const TaggedPartition& tp) {
        if (!(diameter(tp) < delta(k))) {
            return false;
        }
        return std::none_of(tp.tags().begin(), tp.tags().end(),
                            [&](const Rational& t) { return avoid.contains(t); });
    };
    base.draw_ = [domain, delta, avoid, config](std::size_t k, std::size_t, Rng& rng) {
        auto xi = jittered_mesh_breakpoints(domain, delta(k), rng, config.denominator_bound, config.max_cells);
        auto tags = draw_tags(xi, rng, config, &avoid);
        return make_partition(domain, std::move(xi), std::move(tags));
    };
    base.delta_ = std::move(delta);
    base.avoid_ = std::move(avoid);
    base.config_ = config;
    return base;
}

FilterBase induced_subsegment_base(const FilterBase& parent, const Interval& sub) {
    if (!parent.domain().contains(sub)) {
        throw FilterError("sub-interval [" + sub.lo().str() + ", " + sub.hi().str() + "] not inside the base domain");
    }
    auto shared_parent = std::make_shared<const FilterBase>(parent);
    FilterBase base(BaseKind::subsegment, sub,
                    "subsegment(" + parent.description() + ", alpha=" + sub.lo().str() + ", beta=" +
                        sub.hi().str() + ")");
    base.parent_ = shared_parent;
    base.avoid_ = parent.avoid();
    base.config_ = parent.config();
    base.tag_independent_ = parent.tag_independent();

    if (parent.delta()) {
        const DeltaSchedule parent_delta = *parent.delta();
        base.delta_ = DeltaSchedule::custom([parent_delta](std::size_t k) { return Rational(2) * parent_delta(k); },
                                            "2*(" + parent_delta.text() + ")");
        const DeltaSchedule allowance = *base.delta_;
        const std::optional<AvoidSet> avoid = parent.avoid();
        base.membership_ = [allowance, avoid](std::size_t k, const TaggedPartition& tp) {
            if (!(diameter(tp) < allowance(k))) {
                return false;
            }
            return !avoid || std::none_of(tp.tags().begin(), tp.tags().end(),
                                          [&](const Rational& t) { return avoid->contains(t); });
        };
    } else if (sub == parent.domain()) {
        base.membership_ = [shared_parent](std::size_t k, const TaggedPartition& tp) {
            return shared_parent->is_member(k, tp);
        };
    } else {
        base.membership_ = [](std::size_t, const TaggedPartition&) { return true; };
    }

    base.draw_ = [parent_draw = parent.draw_, cap = parent.config().restriction_retry_cap, sub](
                     std::size_t k, std::size_t ordinal, Rng& rng) {
        for (std::size_t attempt = 0; attempt <= cap; ++attempt) {
            // Redraws continue the same stream; the first attempt is exactly
            // the parent's sample for this (seed, index, ordinal).
            const TaggedPartition full = parent_draw(k, ordinal, rng);
            try {
                return restrict_to(full, sub).partition;
            } catch (const RestrictionError& e) {
                if (e.kind() != RestrictionErrorKind::no_tag_inside) {
                    throw;
                }
            }
        }
        throw FilterError("no parent sample restricts to [" + sub.lo().str() + ", " + sub.hi().str() + "]");
    };
    return base;
}

// ----------------------------------------------------------------- checks

namespace {

void validate_search(const SearchOptions& options) {
    if (options.depth == 0 || options.samples == 0 || options.window_factor == 0) {
        throw FilterError("search needs depth, samples and window factor >= 1");
    }
}

}  // namespace

SearchVerdict check_subset(const FilterBase& coarser, const FilterBase& finer, const SearchOptions& options) {
    validate_search(options);
    if (coarser.domain() != finer.domain()) {
        throw FilterError("check_subset needs bases over one domain");
    }
    SearchVerdict verdict;
    for (std::size_t k = 1; k <= options.depth; ++k) {
        std::optional<FailedIndex> last_failure;
        bool matched = false;
        for (std::size_t j = 1; j <= options.window_factor * k && !matched; ++j) {
            const auto samples = finer.sample(j, options.seed, options.samples, options.jobs);
            const auto inside = parallel_map(samples.size(), options.jobs,
                                             [&](std::size_t i) { return coarser.is_member(k, samples[i]); });
            const auto miss = std::find(inside.begin(), inside.end(), false);
            if (miss == inside.end()) {
                verdict.index_map.push_back(j);
                matched = true;
            } else {
                const auto at = static_cast<std::size_t>(miss - inside.begin());
                last_failure = FailedIndex{k, samples[at],
                                           "sample " + std::to_string(at) + " of finer B_" + std::to_string(j) +
                                               " is not in coarser B_" + std::to_string(k)};
            }
        }
        if (!matched) {
            verdict.failure = std::move(last_failure);
            return verdict;
        }
    }
    verdict.verified = true;
    return verdict;
}

Projector identity_projector() {
    return [](const TaggedPartition& sample, const FilterBase&, std::size_t) {
        return std::optional<TaggedPartition>(sample);
    };
}

Projector tag_perturbation_projector() {
    return [](const TaggedPartition& sample, const FilterBase& target,
              std::size_t) -> std::optional<TaggedPartition> {
        const auto& avoid = target.avoid();
        if (!avoid) {
            return sample;
        }
        std::vector<Rational> tags = sample.tags();
        for (std::size_t k = 0; k < tags.size(); ++k) {
            if (!avoid->contains(tags[k])) {
                continue;
            }
            const Rational lo = sample.breakpoints()[k];
            const Rational hi = sample.breakpoints()[k + 1];
            Rational step = (hi - lo) / Rational(2);
            bool moved = false;
            for (int r = 0; r < 64 && !moved; ++r, step /= Rational(2)) {
                for (const Rational& candidate : {tags[k] + step, tags[k] - step}) {
                    const bool in_cell = lo <= candidate && candidate <= hi;
                    const bool clashes = (k > 0 && candidate == tags[k - 1]) ||
                                         (k + 1 < tags.size() && candidate == tags[k + 1]);
                    if (in_cell && !clashes && !avoid->contains(candidate)) {
                        tags[k] = candidate;
                        moved = true;
                        break;
                    }
                }
            }
            if (!moved) {
                return std::nullopt;
            }
        }
        return make_partition(sample.domain(), sample.breakpoints(), std::move(tags));
    };
}

DominanceVerdict check_rho_dominance(const FilterBase& dominated, const FilterBase& dominating,
                                     const Rational& epsilon, const Projector& projector,
                                     const SearchOptions& options) {
    if (epsilon.sign() <= 0) {
        throw FilterError("rho-dominance needs epsilon > 0, got " + epsilon.str());
    }
    validate_search(options);
    if (dominated.domain() != dominating.domain()) {
        throw FilterError("check_rho_dominance needs bases over one domain");
    }

    struct Outcome {
        bool ok = false;
        Rational distance;
        std::string detail;
    };

    DominanceVerdict verdict;
    for (std::size_t k = 1; k <= options.depth; ++k) {
        std::optional<FailedIndex> last_failure;
        bool matched = false;
        for (std::size_t j = 1; j <= options.window_factor * k && !matched; ++j) {
            const auto samples = dominating.sample(j, options.seed, options.samples, options.jobs);
            const auto outcomes = parallel_map(samples.size(), options.jobs, [&](std::size_t i) {
                const auto projected = projector(samples[i], dominated, k);
                if (!projected) {
                    return Outcome{false, Rational(0), "projector declined"};
                }
                if (!dominated.is_member(k, *projected)) {
                    return Outcome{false, Rational(0), "projection outside dominated B_" + std::to_string(k)};
                }
                Rational d = rho(*projected, samples[i]).value();
                if (!(d < epsilon)) {
                    return Outcome{false, d, "rho " + d.str() + " >= epsilon " + epsilon.str()};
                }
                return Outcome{true, d, {}};
            });
            const auto miss = std::find_if(outcomes.begin(), outcomes.end(), [](const Outcome& o) { return !o.ok; });
            if (miss == outcomes.end()) {
                verdict.index_map.push_back(j);
                for (const auto& o : outcomes) {
                    verdict.worst_distance = max(verdict.worst_distance, o.distance);
                }
                matched = true;
            } else {
                const auto at = static_cast<std::size_t>(miss - outcomes.begin());
                last_failure = FailedIndex{k, samples[at],
                                           "sample " + std::to_string(at) + " of dominating B_" + std::to_string(j) +
                                               ": " + miss->detail};
            }
        }
        if (!matched) {
            verdict.failure = std::move(last_failure);
            return verdict;
        }
    }
    verdict.verified = true;
    return verdict;
}

}  // namespace filterint
