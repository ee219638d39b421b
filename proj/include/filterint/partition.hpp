#pragma once

#include <cstddef>
#include <initializer_list>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "filterint/rational.hpp"

namespace filterint {

enum class PartitionErrorKind {
    empty_input,
    length_mismatch,
    non_monotone,
    endpoint_mismatch,
    tag_outside_cell,
    duplicate_tag,
    invalid_interval,
    non_abutting,
};

std::string to_string(PartitionErrorKind kind);

class PartitionError : public std::runtime_error {
public:
    PartitionError(PartitionErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    [[nodiscard]] PartitionErrorKind kind() const { return kind_; }

private:
    PartitionErrorKind kind_;
};

/// Closed interval [lo, hi] with lo < hi.
class Interval {
public:
    Interval(Rational lo, Rational hi);

    [[nodiscard]] const Rational& lo() const { return lo_; }
    [[nodiscard]] const Rational& hi() const { return hi_; }
    [[nodiscard]] Rational length() const { return hi_ - lo_; }
    [[nodiscard]] bool contains(const Rational& t) const { return lo_ <= t && t <= hi_; }
    [[nodiscard]] bool contains(const Interval& other) const {
        return lo_ <= other.lo_ && other.hi_ <= hi_;
    }

    friend bool operator==(const Interval&, const Interval&) = default;

private:
    Rational lo_;
    Rational hi_;
};

/// Sparse map tag -> length of the cell carrying that tag. Absent tags have
/// length zero.
class TagSpectrum {
public:
    using Map = std::map<Rational, Rational>;

    TagSpectrum() = default;
    explicit TagSpectrum(Map entries) : entries_(std::move(entries)) {}

    [[nodiscard]] const Map& entries() const { return entries_; }
    [[nodiscard]] Rational length_at(const Rational& tag) const;
    [[nodiscard]] Rational total() const;
    [[nodiscard]] std::size_t size() const { return entries_.size(); }

    friend bool operator==(const TagSpectrum&, const TagSpectrum&) = default;

private:
    Map entries_;
};

/// Validated tagged partition: strictly increasing breakpoints spanning the
/// domain, one tag per cell inside that cell, tags pairwise distinct.
class TaggedPartition {
public:
    [[nodiscard]] const Interval& domain() const { return domain_; }
    [[nodiscard]] const std::vector<Rational>& breakpoints() const { return breakpoints_; }
    [[nodiscard]] const std::vector<Rational>& tags() const { return tags_; }
    [[nodiscard]] std::size_t cell_count() const { return tags_.size(); }
    [[nodiscard]] Rational cell_length(std::size_t k) const {
        return breakpoints_[k + 1] - breakpoints_[k];
    }
    [[nodiscard]] Interval cell(std::size_t k) const {
        return Interval(breakpoints_[k], breakpoints_[k + 1]);
    }

    friend bool operator==(const TaggedPartition&, const TaggedPartition&) = default;

private:
    friend TaggedPartition make_partition(Interval, std::vector<Rational>, std::vector<Rational>);

    TaggedPartition(Interval domain, std::vector<Rational> breakpoints, std::vector<Rational> tags)
        : domain_(std::move(domain)), breakpoints_(std::move(breakpoints)), tags_(std::move(tags)) {}

    Interval domain_;
    std::vector<Rational> breakpoints_;
    std::vector<Rational> tags_;
};

/// Throws PartitionError with a kind naming the violated condition.
TaggedPartition make_partition(Interval domain, std::vector<Rational> breakpoints,
                               std::vector<Rational> tags);

/// One cell per interval of a uniform grid, tagged at the cell midpoints.
TaggedPartition uniform_partition(const Interval& domain, std::size_t cells);

/// Maximum cell length.
Rational diameter(const TaggedPartition& tp);

TagSpectrum tag_spectrum(const TaggedPartition& tp);

/// S(f, tp) = sum of f(t_k) * len_k, exactly.
template <class F>
Rational riemann_sum(const F& f, const TaggedPartition& tp) {
    mpq_class sum(0);
    const auto& xi = tp.breakpoints();
    const auto& tags = tp.tags();
    for (std::size_t k = 0; k < tags.size(); ++k) {
        const Rational value = f(tags[k]);
        sum += value.raw() * (xi[k + 1].raw() - xi[k].raw());
    }
    return Rational(sum);
}

/// Joins pieces over abutting domains, left to right.
TaggedPartition concat(std::span<const TaggedPartition> pieces);
TaggedPartition concat(const TaggedPartition& left, const TaggedPartition& mid,
                       const TaggedPartition& right);

}  // namespace filterint
