#include "filterint/partition.hpp"

#include <algorithm>

namespace filterint {

std::string to_string(PartitionErrorKind kind) {
    switch (kind) {
        case PartitionErrorKind::empty_input: return "empty_input";
        case PartitionErrorKind::length_mismatch: return "length_mismatch";
        case PartitionErrorKind::non_monotone: return "non_monotone";
        case PartitionErrorKind::endpoint_mismatch: return "endpoint_mismatch";
        case PartitionErrorKind::tag_outside_cell: return "tag_outside_cell";
        case PartitionErrorKind::duplicate_tag: return "duplicate_tag";
        case PartitionErrorKind::invalid_interval: return "invalid_interval";
        case PartitionErrorKind::non_abutting: return "non_abutting";
    }
    return "unknown";
}

Interval::Interval(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (!(lo_ < hi_)) {
        throw PartitionError(PartitionErrorKind::invalid_interval,
                             "interval requires lo < hi, got [" + lo_.str() + ", " + hi_.str() + "]");
    }
}

Rational TagSpectrum::length_at(const Rational& tag) const {
    const auto it = entries_.find(tag);
    return it == entries_.end() ? Rational(0) : it->second;
}

Rational TagSpectrum::total() const {
    Rational sum;
    for (const auto& [tag, length] : entries_) {
        sum += length;
    }
    return sum;
}

TaggedPartition make_partition(Interval domain, std::vector<Rational> breakpoints,
                               std::vector<Rational> tags) {
    if (breakpoints.empty() || tags.empty()) {
        throw PartitionError(PartitionErrorKind::empty_input, "breakpoints and tags must be nonempty");
    }
    if (breakpoints.size() != tags.size() + 1) {
        throw PartitionError(PartitionErrorKind::length_mismatch,
                             "expected " + std::to_string(tags.size() + 1) + " breakpoints for " +
                                 std::to_string(tags.size()) + " tags, got " +
                                 std::to_string(breakpoints.size()));
    }
    if (breakpoints.front() != domain.lo() || breakpoints.back() != domain.hi()) {
        throw PartitionError(PartitionErrorKind::endpoint_mismatch,
                             "breakpoints must start at " + domain.lo().str() + " and end at " +
                                 domain.hi().str());
    }
    for (std::size_t k = 1; k < breakpoints.size(); ++k) {
        if (!(breakpoints[k - 1] < breakpoints[k])) {
            throw PartitionError(PartitionErrorKind::non_monotone,
                                 "breakpoints not strictly increasing at position " + std::to_string(k) +
                                     " (" + breakpoints[k - 1].str() + " >= " + breakpoints[k].str() + ")");
        }
    }
    for (std::size_t k = 0; k < tags.size(); ++k) {
        if (tags[k] < breakpoints[k] || breakpoints[k + 1] < tags[k]) {
            throw PartitionError(PartitionErrorKind::tag_outside_cell,
                                 "tag " + tags[k].str() + " outside cell [" + breakpoints[k].str() + ", " +
                                     breakpoints[k + 1].str() + "]");
        }
        // Tags are ordered cell by cell, so a repeat can only be a shared breakpoint.
        if (k > 0 && tags[k] == tags[k - 1]) {
            throw PartitionError(PartitionErrorKind::duplicate_tag,
                                 "tag " + tags[k].str() + " used by two cells");
        }
    }
    return TaggedPartition(std::move(domain), std::move(breakpoints), std::move(tags));
}

TaggedPartition uniform_partition(const Interval& domain, std::size_t cells) {
    if (cells == 0) {
        throw PartitionError(PartitionErrorKind::empty_input, "uniform partition needs at least one cell");
    }
    const Rational step = domain.length() / Rational(static_cast<std::int64_t>(cells));
    std::vector<Rational> xi;
    std::vector<Rational> tags;
    xi.reserve(cells + 1);
    tags.reserve(cells);
    for (std::size_t k = 0; k <= cells; ++k) {
        xi.push_back(k == cells ? domain.hi() : domain.lo() + step * Rational(static_cast<std::int64_t>(k)));
    }
    for (std::size_t k = 0; k < cells; ++k) {
        tags.push_back((xi[k] + xi[k + 1]) / Rational(2));
    }
    return make_partition(domain, std::move(xi), std::move(tags));
}

Rational diameter(const TaggedPartition& tp) {
    Rational best = tp.cell_length(0);
    for (std::size_t k = 1; k < tp.cell_count(); ++k) {
        best = max(best, tp.cell_length(k));
    }
    return best;
}

TagSpectrum tag_spectrum(const TaggedPartition& tp) {
    TagSpectrum::Map entries;
    for (std::size_t k = 0; k < tp.cell_count(); ++k) {
        entries.emplace(tp.tags()[k], tp.cell_length(k));
    }
    return TagSpectrum(std::move(entries));
}

TaggedPartition concat(std::span<const TaggedPartition> pieces) {
    if (pieces.empty()) {
        throw PartitionError(PartitionErrorKind::empty_input, "concat needs at least one piece");
    }
    std::vector<Rational> xi{pieces.front().domain().lo()};
    std::vector<Rational> tags;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const auto& piece = pieces[i];
        if (i > 0 && pieces[i - 1].domain().hi() != piece.domain().lo()) {
            throw PartitionError(PartitionErrorKind::non_abutting,
                                 "piece ending at " + pieces[i - 1].domain().hi().str() +
                                     " does not abut piece starting at " + piece.domain().lo().str());
        }
        xi.insert(xi.end(), piece.breakpoints().begin() + 1, piece.breakpoints().end());
        tags.insert(tags.end(), piece.tags().begin(), piece.tags().end());
    }
    Interval domain(pieces.front().domain().lo(), pieces.back().domain().hi());
    return make_partition(std::move(domain), std::move(xi), std::move(tags));
}

TaggedPartition concat(const TaggedPartition& left, const TaggedPartition& mid,
                       const TaggedPartition& right) {
    const std::vector<TaggedPartition> pieces{left, mid, right};
    return concat(std::span<const TaggedPartition>(pieces));
}

}  // namespace filterint
