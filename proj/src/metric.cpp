#include "filterint/metric.hpp"

namespace filterint {

RhoDistance::RhoDistance(Rational value) : value_(std::move(value)) {
    if (value_.sign() < 0) {
        throw std::invalid_argument("negative distance " + value_.str());
    }
}

Rational spectrum_distance(const TagSpectrum& a, const TagSpectrum& b) {
    // Merge walk over the two sorted maps.
    mpq_class sum(0);
    auto ia = a.entries().begin();
    auto ib = b.entries().begin();
    const auto ea = a.entries().end();
    const auto eb = b.entries().end();
    while (ia != ea || ib != eb) {
        if (ib == eb || (ia != ea && ia->first < ib->first)) {
            sum += ia->second.raw();
            ++ia;
        } else if (ia == ea || ib->first < ia->first) {
            sum += ib->second.raw();
            ++ib;
        } else {
            sum += abs(ia->second.raw() - ib->second.raw());
            ++ia;
            ++ib;
        }
    }
    return Rational(sum);
}

RhoDistance rho(const TaggedPartition& a, const TaggedPartition& b) {
    if (a.domain() != b.domain()) {
        throw DomainMismatch("rho between partitions of [" + a.domain().lo().str() + ", " + a.domain().hi().str() +
                             "] and [" + b.domain().lo().str() + ", " + b.domain().hi().str() + "]");
    }
    return RhoDistance(spectrum_distance(tag_spectrum(a), tag_spectrum(b)));
}

std::string to_string(MetricAxiom axiom) {
    switch (axiom) {
        case MetricAxiom::nonnegativity: return "nonnegativity";
        case MetricAxiom::symmetry: return "symmetry";
        case MetricAxiom::identity: return "identity";
        case MetricAxiom::triangle: return "triangle";
    }
    return "unknown";
}

bool AxiomReport::passed(MetricAxiom axiom) const {
    switch (axiom) {
        case MetricAxiom::nonnegativity: return !nonnegativity;
        case MetricAxiom::symmetry: return !symmetry;
        case MetricAxiom::identity: return !identity;
        case MetricAxiom::triangle: return !triangle;
    }
    return false;
}

bool AxiomReport::all_passed() const {
    return !nonnegativity && !symmetry && !identity && !triangle;
}

void AxiomChecker::record(std::optional<AxiomViolation>& slot, MetricAxiom axiom,
                          std::vector<TaggedPartition> witnesses, std::string detail) {
    if (!slot) {
        slot = AxiomViolation{axiom, std::move(witnesses), std::move(detail)};
    }
}

namespace {

// Raw l1 value, so that a negative result can be reported instead of being
// rejected by the RhoDistance constructor.
Rational raw_rho(const TaggedPartition& a, const TaggedPartition& b) {
    if (a.domain() != b.domain()) {
        throw DomainMismatch("metric sample mixes domains");
    }
    return spectrum_distance(tag_spectrum(a), tag_spectrum(b));
}

}  // namespace

void AxiomChecker::add_pair(const TaggedPartition& a, const TaggedPartition& b) {
    ++report_.pairs_checked;
    const Rational ab = raw_rho(a, b);
    const Rational ba = raw_rho(b, a);
    if (ab.sign() < 0) {
        record(report_.nonnegativity, MetricAxiom::nonnegativity, {a, b}, "rho = " + ab.str());
    }
    if (ab != ba) {
        record(report_.symmetry, MetricAxiom::symmetry, {a, b}, ab.str() + " != " + ba.str());
    }
    if (ab.is_zero() != (a == b)) {
        record(report_.identity, MetricAxiom::identity, {a, b},
               "rho = " + ab.str() + (a == b ? " for equal partitions" : " for distinct partitions"));
    }
}

void AxiomChecker::add_triple(const TaggedPartition& a, const TaggedPartition& b, const TaggedPartition& c) {
    ++report_.triples_checked;
    const Rational ac = raw_rho(a, c);
    const Rational ab = raw_rho(a, b);
    const Rational bc = raw_rho(b, c);
    if (ab + bc < ac) {
        record(report_.triangle, MetricAxiom::triangle, {a, b, c},
               ac.str() + " > " + ab.str() + " + " + bc.str());
    }
}

AxiomReport check_metric_axioms(std::span<const TaggedPartition> sample) {
    const std::size_t n = sample.size();
    std::vector<TagSpectrum> spectra;
    spectra.reserve(n);
    for (const auto& tp : sample) {
        if (tp.domain() != sample.front().domain()) {
            throw DomainMismatch("metric sample mixes domains");
        }
        spectra.push_back(tag_spectrum(tp));
    }
    std::vector<Rational> dist(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            dist[i * n + j] = spectrum_distance(spectra[i], spectra[j]);
        }
    }

    AxiomReport report;
    auto keep = [](std::optional<AxiomViolation>& slot, AxiomViolation v) {
        if (!slot) {
            slot = std::move(v);
        }
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            ++report.pairs_checked;
            const Rational& ij = dist[i * n + j];
            if (ij.sign() < 0) {
                keep(report.nonnegativity, {MetricAxiom::nonnegativity, {sample[i], sample[j]}, "rho = " + ij.str()});
            }
            if (ij != dist[j * n + i]) {
                keep(report.symmetry, {MetricAxiom::symmetry, {sample[i], sample[j]},
                                       ij.str() + " != " + dist[j * n + i].str()});
            }
            if (ij.is_zero() != (sample[i] == sample[j])) {
                keep(report.identity, {MetricAxiom::identity, {sample[i], sample[j]}, "rho = " + ij.str()});
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                ++report.triples_checked;
                if (dist[i * n + j] + dist[j * n + k] < dist[i * n + k]) {
                    keep(report.triangle, {MetricAxiom::triangle, {sample[i], sample[j], sample[k]},
                                           dist[i * n + k].str() + " > " + dist[i * n + j].str() + " + " +
                                               dist[j * n + k].str()});
                }
            }
        }
    }
    return report;
}

}  // namespace filterint
