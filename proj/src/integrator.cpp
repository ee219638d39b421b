#include "filterint/integrator.hpp"

#include <algorithm>

#include "filterint/parallel.hpp"

namespace filterint {

std::string to_string(LimitVerdict verdict) {
    switch (verdict) {
        case LimitVerdict::converged: return "converged";
        case LimitVerdict::not_cauchy: return "not_cauchy";
        case LimitVerdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

std::optional<Rational> EnvelopeSums::gap() const {
    if (!lower || !upper) {
        return std::nullopt;
    }
    return *upper - *lower;
}

EnvelopeSums envelope_sums(const Integrand& f, std::span<const Rational> breakpoints) {
    EnvelopeSums sums{Rational(0), Rational(0), true};
    for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
        const Interval cell(breakpoints[k], breakpoints[k + 1]);
        const Envelope e = f.envelope(cell);
        const Rational length = cell.length();
        sums.exact = sums.exact && e.exact;
        if (sums.lower && e.inf) {
            *sums.lower += *e.inf * length;
        } else {
            sums.lower.reset();
        }
        if (sums.upper && e.sup) {
            *sums.upper += *e.sup * length;
        } else {
            sums.upper.reset();
        }
    }
    return sums;
}

EnvelopeSums envelope_sums(const Integrand& f, const TaggedPartition& tp) {
    return envelope_sums(f, std::span<const Rational>(tp.breakpoints()));
}

namespace {

struct SampleOutcome {
    Rational sum;
    bool exact = false;
    std::optional<Rational> lower;
    std::optional<Rational> upper;
};

/// Largest exact envelope gap at one index: empty optional when no sample
/// has exact envelopes, inner empty when some gap is infinite.
using BestGap = std::optional<std::optional<Rational>>;

bool wider(const std::optional<Rational>& a, const std::optional<Rational>& b) {
    if (!a) {
        return b.has_value();
    }
    return b && *b < *a;
}

bool at_least(const std::optional<Rational>& gap, const Rational& bound) {
    return !gap || !(*gap < bound);
}

void validate(const EstimateOptions& options) {
    if (options.depth < 2) {
        throw IntegratorError("limit estimation needs depth >= 2");
    }
    if (options.tolerance.sign() <= 0) {
        throw IntegratorError("tolerance must be positive");
    }
    if (options.samples == 0) {
        throw IntegratorError("need at least one sample per index");
    }
    if (options.window == 0 || options.window > options.depth) {
        throw IntegratorError("window must lie in [1, depth]");
    }
}

}  // namespace

ConvergenceReport estimate_filter_limit(const Integrand& f, const FilterBase& base, const EstimateOptions& options) {
    validate(options);
    ConvergenceReport report;
    report.tolerance = options.tolerance;
    report.window = options.window;
    report.integrand = f.text();
    report.base = base.description();

    bool evidence = base.tag_independent();
    std::optional<Rational> first_gap;
    std::optional<Rational> last_gap;
    std::optional<OscillationWitness> witness;

    for (std::size_t k = 1; k <= options.depth; ++k) {
        const bool want_envelope = evidence;
        const auto outcomes = parallel_map(options.samples, options.jobs, [&](std::size_t ordinal) {
            const TaggedPartition tp = base.draw(k, ordinal, options.seed);
            SampleOutcome out;
            out.sum = riemann_sum(f, tp);
            if (want_envelope) {
                const EnvelopeSums env = envelope_sums(f, tp);
                out.exact = env.exact;
                out.lower = env.lower;
                out.upper = env.upper;
            }
            return out;
        });

        IndexRecord record{k, outcomes.size(), outcomes.front().sum, outcomes.front().sum, Rational(0)};
        Rational total;
        for (const auto& o : outcomes) {
            record.min = min(record.min, o.sum);
            record.max = max(record.max, o.sum);
            total += o.sum;
        }
        record.mean = total / Rational(static_cast<std::int64_t>(outcomes.size()));
        report.records.push_back(std::move(record));

        if (!evidence) {
            continue;
        }
        BestGap best;
        std::size_t best_ordinal = 0;
        for (std::size_t i = 0; i < outcomes.size(); ++i) {
            const auto& o = outcomes[i];
            if (!o.exact || !o.lower) {
                continue;
            }
            std::optional<Rational> gap;
            if (o.upper) {
                gap = *o.upper - *o.lower;
            }
            if (!best || wider(gap, *best)) {
                best = gap;
                best_ordinal = i;
            }
        }
        if (!best || !at_least(*best, options.tolerance)) {
            evidence = false;
            witness.reset();
            continue;
        }
        if (k == 1) {
            first_gap = *best;
        }
        last_gap = *best;
        const auto& hit = outcomes[best_ordinal];
        witness = OscillationWitness{k, best_ordinal, base.draw(k, best_ordinal, options.seed), *hit.lower, hit.upper};
    }
    // The oscillation must persist rather than decay with the mesh: the
    // final index keeps at least half of the first index's largest gap.
    if (evidence) {
        evidence = first_gap ? at_least(last_gap, *first_gap / Rational(2)) : !last_gap;
    }

    const auto window_begin = report.records.end() - static_cast<std::ptrdiff_t>(options.window);
    Rational lo = window_begin->min;
    Rational hi = window_begin->max;
    Rational mean_total;
    for (auto it = window_begin; it != report.records.end(); ++it) {
        lo = min(lo, it->min);
        hi = max(hi, it->max);
        mean_total += it->mean;
    }
    report.window_width = hi - lo;

    if (evidence && witness) {
        report.verdict = LimitVerdict::not_cauchy;
        report.witness = std::move(witness);
    } else if (report.window_width < options.tolerance) {
        report.verdict = LimitVerdict::converged;
        report.estimate = mean_total / Rational(static_cast<std::int64_t>(options.window));
    } else {
        report.verdict = LimitVerdict::inconclusive;
    }
    return report;
}

BoundednessProbe probe_f_boundedness(const Integrand& f, const FilterBase& base, const ProbeOptions& options) {
    if (options.first_index == 0 || options.depth < options.first_index || options.samples == 0 ||
        options.blowup_threshold.sign() <= 0) {
        throw IntegratorError("probe needs 1 <= first_index <= depth, samples and a positive blow-up threshold");
    }
    BoundednessProbe probe;
    for (std::size_t k = options.first_index; k <= options.depth; ++k) {
        const auto sums = parallel_map(options.samples, options.jobs, [&](std::size_t ordinal) {
            return abs(riemann_sum(f, base.draw(k, ordinal, options.seed)));
        });
        Rational worst = *std::max_element(sums.begin(), sums.end());
        probe.max_abs.push_back(worst);
        if (worst < options.blowup_threshold) {
            probe.certificate = BoundednessCertificate{worst + Rational(1), k, options.samples};
            break;
        }
    }
    return probe;
}

bool sample_linearity_holds(const Integrand& f, const Integrand& g, const Rational& alpha, const Rational& beta,
                            const TaggedPartition& tp) {
    const Integrand combined = Integrand::combination({{alpha, f}, {beta, g}});
    return riemann_sum(combined, tp) == alpha * riemann_sum(f, tp) + beta * riemann_sum(g, tp);
}

LinearityReport check_linearity(const Integrand& f, const Integrand& g, const Rational& alpha, const Rational& beta,
                                const FilterBase& base, const EstimateOptions& options) {
    LinearityReport report;
    report.f = estimate_filter_limit(f, base, options);
    report.g = estimate_filter_limit(g, base, options);
    if (report.f.verdict != LimitVerdict::converged || report.g.verdict != LimitVerdict::converged) {
        throw IntegratorError("linearity needs both integrands to converge (f: " + to_string(report.f.verdict) +
                              ", g: " + to_string(report.g.verdict) + ")");
    }
    const Integrand combined = Integrand::combination({{alpha, f}, {beta, g}});
    report.combined = estimate_filter_limit(combined, base, options);
    report.alpha = alpha;
    report.beta = beta;
    report.expected = alpha * *report.f.estimate + beta * *report.g.estimate;
    if (report.combined.estimate) {
        report.deviation = abs(*report.combined.estimate - report.expected);
    }

    for (std::size_t k = options.depth - options.window + 1; k <= options.depth; ++k) {
        const auto ok = parallel_map(options.samples, options.jobs, [&](std::size_t ordinal) {
            return sample_linearity_holds(f, g, alpha, beta, base.draw(k, ordinal, options.seed));
        });
        report.per_sample_exact = report.per_sample_exact && std::all_of(ok.begin(), ok.end(), [](bool b) { return b; });
    }
    report.holds = report.deviation && *report.deviation < Rational(3) * options.tolerance && report.per_sample_exact;
    return report;
}

CoverSum weighted_cover_sum(const TaggedPartition& tp, const PointSequence& points, const mpz_class& cutoff) {
    if (cutoff < 1) {
        throw IntegratorError("cutoff must be >= 1");
    }
    CoverSum out;
    for (std::size_t k = 0; k < tp.cell_count(); ++k) {
        const auto n = points.index_of(tp.tags()[k]);
        if (!n) {
            continue;
        }
        if (*n <= cutoff) {
            out.value += Rational(mpq_class(*n)) * tp.cell_length(k);
        } else {
            out.truncation_exact = false;
        }
    }
    return out;
}

Integrand build_unbounded_witness(const PointSequence& points, const Rational& scale) {
    return Integrand::spike(points, scale);
}

std::optional<std::pair<Rational, Rational>> point_exceeding(const Integrand& spike, const Rational& bound) {
    const PointSequence* points = spike.spike_points();
    if (!points) {
        return std::nullopt;
    }
    const Rational scale = *spike.spike_scale();
    mpz_class n = floor(bound / scale) + 1;
    if (n < 1) {
        n = 1;
    }
    if (!points->is_infinite()) {
        const auto count = mpz_class(static_cast<unsigned long>(points->points()->size()));
        if (n > count) {
            return std::nullopt;
        }
    }
    const Rational t = *points->at(n);
    return std::make_pair(t, spike(t));
}

PointSequence dominating_points(const Integrand& spike, const Rational& bound) {
    const PointSequence* points = spike.spike_points();
    if (!points) {
        throw IntegratorError("dominating points need a spike integrand");
    }
    mpz_class q = ceil(bound / *spike.spike_scale());
    if (q < 1) {
        q = 1;
    }
    if (points->is_infinite()) {
        return PointSequence::harmonic(points->scale() / Rational(mpq_class(q)), points->offset());
    }
    std::vector<Rational> picked;
    for (mpz_class n = 1;; ++n) {
        auto t = points->at(q * n);
        if (!t) {
            break;
        }
        picked.push_back(std::move(*t));
    }
    return PointSequence::from_points(std::move(picked));
}

}  // namespace filterint
