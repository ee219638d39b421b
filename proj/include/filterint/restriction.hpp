#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "filterint/partition.hpp"

namespace filterint {

/// Which of the four constructions produced a restriction.
///   1: both interior extreme breakpoints dropped
///   2: only the largest interior breakpoint dropped
///   3: only the smallest interior breakpoint dropped
///   4: neither dropped (includes a single cell straddling the whole sub-interval)
struct RestrictionTrace {
    int case_id = 4;
    /// min T∩(a,b) > min Π∩(a,b); empty when either set is empty.
    std::optional<bool> left_tag_past_min_breakpoint;
    /// max T∩(a,b) < max Π∩(a,b); empty when either set is empty.
    std::optional<bool> right_tag_before_max_breakpoint;
    std::vector<Rational> dropped_outside_breakpoints;
    std::vector<Rational> dropped_interior_extremes;
    std::vector<Rational> dropped_tags;
    std::vector<Rational> added_endpoints;
};

enum class RestrictionErrorKind { sub_not_inside, no_tag_inside, invalid_output };

class RestrictionError : public std::runtime_error {
public:
    RestrictionError(RestrictionErrorKind kind, const std::string& what,
                     std::optional<RestrictionTrace> trace = std::nullopt)
        : std::runtime_error(what), kind_(kind), trace_(std::move(trace)) {}
    [[nodiscard]] RestrictionErrorKind kind() const { return kind_; }
    [[nodiscard]] const std::optional<RestrictionTrace>& trace() const { return trace_; }

private:
    RestrictionErrorKind kind_;
    std::optional<RestrictionTrace> trace_;
};

struct Restriction {
    TaggedPartition partition;
    RestrictionTrace trace;
};

/// Restricts tp to sub. Cells overlapping sub keep their tag when it lies in
/// sub; a straddling cell whose tag falls outside is merged with its inner
/// neighbour by dropping the shared breakpoint. sub must lie inside
/// tp.domain() (equality allowed, which is the identity).
Restriction restrict_to(const TaggedPartition& tp, const Interval& sub);

}  // namespace filterint
