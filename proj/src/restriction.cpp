#include "filterint/restriction.hpp"

namespace filterint {

namespace {

std::string interval_text(const Interval& iv) {
    return "[" + iv.lo().str() + ", " + iv.hi().str() + "]";
}

}  // namespace

Restriction restrict_to(const TaggedPartition& tp, const Interval& sub) {
    if (!tp.domain().contains(sub)) {
        throw RestrictionError(RestrictionErrorKind::sub_not_inside,
                               "sub-interval " + interval_text(sub) + " not inside " + interval_text(tp.domain()));
    }
    const Rational& alpha = sub.lo();
    const Rational& beta = sub.hi();
    const auto& xi = tp.breakpoints();
    const auto& tags = tp.tags();
    const std::size_t n = tp.cell_count();

    RestrictionTrace trace;
    for (const auto& point : xi) {
        if (point < alpha || beta < point) {
            trace.dropped_outside_breakpoints.push_back(point);
        }
    }

    // Cells [xi_k, xi_{k+1}] meeting (alpha, beta) form the run first..last.
    std::size_t first = 0;
    while (!(alpha < xi[first + 1])) {
        ++first;
    }
    std::size_t last = n - 1;
    while (!(xi[last] < beta)) {
        --last;
    }

    auto inside = [&](const Rational& t) { return alpha <= t && t <= beta; };
    for (std::size_t k = 0; k < n; ++k) {
        if (k < first || k > last || !inside(tags[k])) {
            trace.dropped_tags.push_back(tags[k]);
        }
    }

    // Interior breakpoints xi_{first+1} .. xi_{last}, all strictly inside.
    std::vector<Rational> interior(xi.begin() + static_cast<std::ptrdiff_t>(first) + 1,
                                   xi.begin() + static_cast<std::ptrdiff_t>(last) + 1);

    std::optional<Rational> open_min;
    std::optional<Rational> open_max;
    for (const auto& t : tags) {
        if (alpha < t && t < beta) {
            if (!open_min) {
                open_min = t;
            }
            open_max = t;
        }
    }
    if (open_min && !interior.empty()) {
        trace.left_tag_past_min_breakpoint = interior.front() < *open_min;
        trace.right_tag_before_max_breakpoint = *open_max < interior.back();
    }

    if (xi[first] != alpha) {
        trace.added_endpoints.push_back(alpha);
    }
    if (xi[last + 1] != beta) {
        trace.added_endpoints.push_back(beta);
    }

    std::vector<Rational> kept_tags;
    for (std::size_t k = first; k <= last; ++k) {
        if (inside(tags[k])) {
            kept_tags.push_back(tags[k]);
        }
    }
    if (kept_tags.empty()) {
        throw RestrictionError(RestrictionErrorKind::no_tag_inside,
                               "no tag of a cell meeting " + interval_text(sub) + " lies inside it", trace);
    }

    const bool drop_min = !interior.empty() && !inside(tags[first]);
    const bool drop_max = !interior.empty() && !inside(tags[last]);
    if (drop_min && drop_max) {
        trace.case_id = 1;
    } else if (drop_max) {
        trace.case_id = 2;
    } else if (drop_min) {
        trace.case_id = 3;
    } else {
        trace.case_id = 4;
    }

    std::vector<Rational> out_xi{alpha};
    for (std::size_t i = 0; i < interior.size(); ++i) {
        const bool removed = (drop_min && i == 0) || (drop_max && i + 1 == interior.size());
        if (removed) {
            trace.dropped_interior_extremes.push_back(interior[i]);
        } else {
            out_xi.push_back(interior[i]);
        }
    }
    out_xi.push_back(beta);

    try {
        return Restriction{make_partition(sub, std::move(out_xi), std::move(kept_tags)), std::move(trace)};
    } catch (const PartitionError& e) {
        throw RestrictionError(RestrictionErrorKind::invalid_output,
                               std::string("restriction is not a tagged partition: ") + e.what(), trace);
    }
}

}  // namespace filterint
