#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "filterint/filters.hpp"
#include "filterint/integrand.hpp"
#include "filterint/integrator.hpp"
#include "filterint/partition.hpp"
#include "filterint/restriction.hpp"

namespace filterint {

class ComplementError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Uniform outer pieces with mesh below delta_index and midpoint tags, nudged
/// off the base's avoid set. Shipped for mesh and exactly-tagged bases.
OuterParts uniform_outer_parts(const FilterBase& base, std::size_t index, const Interval& sub);

/// The base's own strategy if attached, else the built-in one for mesh and
/// exactly-tagged bases, else empty.
std::optional<WitnessStrategy> witness_strategy_for(const FilterBase& base);

struct ComplementProof {
    std::size_t index = 0;
    Rational restricted_diameter;
    Rational full_diameter;
    bool member = false;
};

struct Complement {
    OuterParts outer;
    TaggedPartition full;
    ComplementProof proof;
};

/// Completes `restricted` (a partition of a sub-interval of base.domain())
/// to a member of B_index. Throws ComplementError when the base has no
/// strategy, when restricted already breaks the mesh bound of B_index, or
/// when the completion is not a member.
Complement complement_witness(const FilterBase& base, std::size_t index, const TaggedPartition& restricted);

/// Same, with outer parts fixed by the caller.
Complement complement_with(const FilterBase& base, std::size_t index, const OuterParts& outer,
                           const TaggedPartition& restricted);

struct ComplementedOptions {
    std::size_t pairs = 200;
    std::uint64_t seed = 1;
    /// Inner indices j = index .. index + window - 1 are tried; 0 means
    /// 4 * index. window = 1 is the literal definition (pairs drawn from
    /// restrictions of B_index itself).
    std::size_t window = 0;
    std::size_t jobs = 1;
};

struct ComplementedVerdict {
    bool verified = false;
    std::size_t index = 0;
    /// The inner index whose restricted pairs all completed into B_index.
    std::optional<std::size_t> inner_index;
    std::size_t pairs_checked = 0;
    std::optional<OuterParts> outer;
    std::optional<std::pair<TaggedPartition, TaggedPartition>> failing_pair;
    std::string detail;
};

/// Sampled check that restricted pairs complete into B_index through ONE
/// shared pair of outer parts. Unknown never refutes.
ComplementedVerdict check_complemented(const FilterBase& base, const Interval& sub, std::size_t index,
                                       const ComplementedOptions& options);

/// Restricted pair `pair` (ordinals 2*pair and 2*pair + 1) of B_inner.
std::pair<TaggedPartition, TaggedPartition> restricted_pair(const FilterBase& induced, std::size_t inner,
                                                            std::size_t pair, std::uint64_t seed);

struct SubsegmentOptions {
    EstimateOptions estimate;
    /// Pairs checked at every index of the trailing window.
    std::size_t pairs = 200;
    std::size_t complement_window = 0;
};

struct CancellationRecord {
    std::size_t index = 0;
    std::size_t inner_index = 0;
    std::size_t pairs = 0;
    std::size_t exact = 0;
};

struct SubsegmentReport {
    ConvergenceReport full;
    ConvergenceReport restricted;
    std::vector<ComplementedVerdict> complemented;
    std::vector<CancellationRecord> cancellation;
    bool holds = false;
};

/// Preconditions: f converges over `base` and the base is complemented at
/// every index of the trailing window, otherwise ComplementError. Then
/// estimates f over the induced base and checks
/// S(full_1) - S(full_2) == S(restricted_1) - S(restricted_2) exactly on the
/// complemented pairs.
SubsegmentReport check_subsegment_integration(const Integrand& f, const FilterBase& base, const Interval& sub,
                                              const SubsegmentOptions& options);

}  // namespace filterint
