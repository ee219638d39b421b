#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "filterint/filters.hpp"
#include "filterint/integrand.hpp"
#include "filterint/partition.hpp"

namespace filterint {

class IntegratorError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct EstimateOptions {
    std::size_t depth = 12;
    std::size_t samples = 50;
    Rational tolerance{1, 1000};
    std::uint64_t seed = 1;
    /// Trailing indices whose samples form the Cauchy window.
    std::size_t window = 3;
    std::size_t jobs = 1;
};

struct IndexRecord {
    std::size_t index = 0;
    std::size_t samples = 0;
    Rational min;
    Rational max;
    Rational mean;

    [[nodiscard]] Rational width() const { return max - min; }
};

enum class LimitVerdict { converged, not_cauchy, inconclusive };

std::string to_string(LimitVerdict verdict);

/// Lower and upper envelope sums for one sampled partition: S over every tag
/// choice on these breakpoints lies between them, and gets arbitrarily close
/// to both.
struct OscillationWitness {
    std::size_t index = 0;
    std::size_t ordinal = 0;
    TaggedPartition partition;
    Rational lower;
    /// Empty when the upper sum is infinite.
    std::optional<Rational> upper;
};

struct ConvergenceReport {
    std::vector<IndexRecord> records;
    LimitVerdict verdict = LimitVerdict::inconclusive;
    /// Mean over the trailing window, present when converged.
    std::optional<Rational> estimate;
    /// max - min over all samples of the trailing window.
    Rational window_width;
    Rational tolerance;
    std::size_t window = 0;
    std::optional<OscillationWitness> witness;
    std::string integrand;
    std::string base;
};

struct EnvelopeSums {
    /// Empty sides are infinite.
    std::optional<Rational> lower;
    std::optional<Rational> upper;
    bool exact = true;

    /// upper - lower, empty when infinite.
    [[nodiscard]] std::optional<Rational> gap() const;
};

/// Inf and sup of S(f, Π, T) over every tag choice T on fixed breakpoints.
EnvelopeSums envelope_sums(const Integrand& f, std::span<const Rational> breakpoints);
EnvelopeSums envelope_sums(const Integrand& f, const TaggedPartition& tp);

/// Samples S on B_1..B_depth. NotCauchy needs a base whose membership
/// ignores tags and exact envelope evidence of a persistent oscillation: at
/// every index some sample's envelope gap is >= tolerance, and the largest gap
/// at the final index is at least half the largest at index 1. Converged
/// needs the trailing window narrower than the tolerance; anything else is
/// Inconclusive.
ConvergenceReport estimate_filter_limit(const Integrand& f, const FilterBase& base, const EstimateOptions& options);

struct BoundednessCertificate {
    Rational bound;
    std::size_t index = 0;
    std::size_t samples = 0;
};

struct ProbeOptions {
    /// Indices first_index..depth are searched.
    std::size_t first_index = 1;
    std::size_t depth = 12;
    std::size_t samples = 50;
    std::uint64_t seed = 1;
    /// An index whose sampled max|S| reaches this is treated as blown up.
    Rational blowup_threshold{1000000};
    std::size_t jobs = 1;
};

struct BoundednessProbe {
    std::optional<BoundednessCertificate> certificate;
    /// Sampled max|S| per searched index.
    std::vector<Rational> max_abs;
};

/// Smallest searched index k whose sampled max|S| is below the blow-up threshold,
/// with C = max|S| + 1. No certificate when every index blows up.
BoundednessProbe probe_f_boundedness(const Integrand& f, const FilterBase& base, const ProbeOptions& options);

struct LinearityReport {
    ConvergenceReport f;
    ConvergenceReport g;
    ConvergenceReport combined;
    Rational alpha;
    Rational beta;
    /// alpha * I(f) + beta * I(g).
    Rational expected;
    /// |I(alpha f + beta g) - expected|; empty when the combined run did not converge.
    std::optional<Rational> deviation;
    /// Per-sample S(af+bg) == a S(f) + b S(g), checked on every sample.
    bool per_sample_exact = true;
    bool holds = false;
};

/// Throws IntegratorError when f or g does not converge.
LinearityReport check_linearity(const Integrand& f, const Integrand& g, const Rational& alpha, const Rational& beta,
                                const FilterBase& base, const EstimateOptions& options);

/// S(af + bg, tp) == a S(f, tp) + b S(g, tp), exactly.
bool sample_linearity_holds(const Integrand& f, const Integrand& g, const Rational& alpha, const Rational& beta,
                            const TaggedPartition& tp);

struct CoverSum {
    Rational value;
    /// No tag is a point t_n with n beyond the cutoff.
    bool truncation_exact = true;
};

/// Σ_{n <= cutoff} n * ℓ(tp, t_n).
CoverSum weighted_cover_sum(const TaggedPartition& tp, const PointSequence& points, const mpz_class& cutoff);

/// f(t_n) = scale * n, f = 0 off the points.
Integrand build_unbounded_witness(const PointSequence& points, const Rational& scale = Rational(1));

/// A point t where f(t) > bound, for spike integrands over infinite point
/// sequences; shows the witness is unbounded.
std::optional<std::pair<Rational, Rational>> point_exceeding(const Integrand& spike, const Rational& bound);

/// Points a_n with f(a_n) >= bound * n, drawn from a spike's own points:
/// a_n = t_{q n} with q = ceil(bound / scale).
PointSequence dominating_points(const Integrand& spike, const Rational& bound);

}  // namespace filterint
