#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "filterint/partition.hpp"

namespace filterint {

class DomainMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Nonnegative distance between two tagged partitions of one domain.
class RhoDistance {
public:
    explicit RhoDistance(Rational value);
    [[nodiscard]] const Rational& value() const { return value_; }

    friend bool operator==(const RhoDistance&, const RhoDistance&) = default;
    friend auto operator<=>(const RhoDistance& a, const RhoDistance& b) { return a.value_ <=> b.value_; }

private:
    Rational value_;
};

/// l1 distance between the tag spectra. Throws DomainMismatch when the
/// partitions live on different intervals.
RhoDistance rho(const TaggedPartition& a, const TaggedPartition& b);

/// l1 distance between two spectra.
Rational spectrum_distance(const TagSpectrum& a, const TagSpectrum& b);

enum class MetricAxiom { nonnegativity, symmetry, identity, triangle };

std::string to_string(MetricAxiom axiom);

struct AxiomViolation {
    MetricAxiom axiom;
    std::vector<TaggedPartition> witnesses;
    std::string detail;
};

struct AxiomReport {
    std::size_t pairs_checked = 0;
    std::size_t triples_checked = 0;
    std::optional<AxiomViolation> nonnegativity;
    std::optional<AxiomViolation> symmetry;
    std::optional<AxiomViolation> identity;
    std::optional<AxiomViolation> triangle;

    [[nodiscard]] bool passed(MetricAxiom axiom) const;
    [[nodiscard]] bool all_passed() const;
};

/// Accumulates axiom checks over explicitly chosen pairs and triples. Only
/// the first counterexample per axiom is kept.
class AxiomChecker {
public:
    void add_pair(const TaggedPartition& a, const TaggedPartition& b);
    void add_triple(const TaggedPartition& a, const TaggedPartition& b, const TaggedPartition& c);
    [[nodiscard]] const AxiomReport& report() const { return report_; }

private:
    void record(std::optional<AxiomViolation>& slot, MetricAxiom axiom, std::vector<TaggedPartition> witnesses,
                std::string detail);
    AxiomReport report_;
};

/// Every ordered pair and triple of the sample, using a precomputed distance
/// matrix. All partitions must share a domain.
AxiomReport check_metric_axioms(std::span<const TaggedPartition> sample);

}  // namespace filterint
