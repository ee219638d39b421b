#include "filterint/subsegment.hpp"

#include <algorithm>

#include "filterint/parallel.hpp"

namespace filterint {

namespace {

std::optional<TaggedPartition> uniform_piece(const Rational& lo, const Rational& hi, const Rational& delta,
                                             const std::optional<AvoidSet>& avoid) {
    if (!(lo < hi)) {
        return std::nullopt;
    }
    const Rational len = hi - lo;
    const mpz_class n = floor(len / delta) + 1;
    const Rational width = len / Rational(mpq_class(n));
    std::vector<Rational> xi;
    std::vector<Rational> tags;
    for (mpz_class i = 0; i <= n; ++i) {
        xi.push_back(lo + width * Rational(mpq_class(i)));
    }
    for (std::size_t k = 0; k + 1 < xi.size(); ++k) {
        Rational tag = (xi[k] + xi[k + 1]) / Rational(2);
        Rational step = width / Rational(4);
        int r = 0;
        while (avoid && avoid->contains(tag)) {
            tag = (xi[k] + xi[k + 1]) / Rational(2) + step;
            step /= Rational(2);
            if (++r > 64) {
                throw ComplementError("cannot place an outer tag off the avoid set in [" + xi[k].str() + ", " +
                                      xi[k + 1].str() + "]");
            }
        }
        tags.push_back(std::move(tag));
    }
    return make_partition(Interval(lo, hi), std::move(xi), std::move(tags));
}

}  // namespace

OuterParts uniform_outer_parts(const FilterBase& base, std::size_t index, const Interval& sub) {
    if (!base.delta()) {
        throw ComplementError("uniform outer parts need a base with a mesh schedule");
    }
    const Rational delta = (*base.delta())(index);
    return OuterParts{uniform_piece(base.domain().lo(), sub.lo(), delta, base.avoid()),
                      uniform_piece(sub.hi(), base.domain().hi(), delta, base.avoid())};
}

std::optional<WitnessStrategy> witness_strategy_for(const FilterBase& base) {
    if (base.witness_strategy()) {
        return base.witness_strategy();
    }
    if (base.kind() == BaseKind::mesh || base.kind() == BaseKind::exactly_tagged) {
        return WitnessStrategy(uniform_outer_parts);
    }
    return std::nullopt;
}

Complement complement_with(const FilterBase& base, std::size_t index, const OuterParts& outer,
                           const TaggedPartition& restricted) {
    ComplementProof proof;
    proof.index = index;
    proof.restricted_diameter = diameter(restricted);
    if (base.delta() && !(proof.restricted_diameter < (*base.delta())(index))) {
        throw ComplementError("restricted partition has diameter " + proof.restricted_diameter.str() +
                              ", not below delta_" + std::to_string(index) + " = " +
                              (*base.delta())(index).str() + "; no completion can be a member");
    }
    std::vector<TaggedPartition> pieces;
    if (outer.left) {
        pieces.push_back(*outer.left);
    }
    pieces.push_back(restricted);
    if (outer.right) {
        pieces.push_back(*outer.right);
    }
    TaggedPartition full = concat(pieces);
    proof.full_diameter = diameter(full);
    proof.member = base.is_member(index, full);
    if (!proof.member) {
        throw ComplementError("completion is not a member of B_" + std::to_string(index));
    }
    return Complement{outer, std::move(full), std::move(proof)};
}

Complement complement_witness(const FilterBase& base, std::size_t index, const TaggedPartition& restricted) {
    const auto strategy = witness_strategy_for(base);
    if (!strategy) {
        throw ComplementError("no witness strategy for base " + base.description());
    }
    return complement_with(base, index, (*strategy)(base, index, restricted.domain()), restricted);
}

std::pair<TaggedPartition, TaggedPartition> restricted_pair(const FilterBase& induced, std::size_t inner,
                                                            std::size_t pair, std::uint64_t seed) {
    return {induced.draw(inner, 2 * pair, seed), induced.draw(inner, 2 * pair + 1, seed)};
}

ComplementedVerdict check_complemented(const FilterBase& base, const Interval& sub, std::size_t index,
                                       const ComplementedOptions& options) {
    ComplementedVerdict verdict;
    verdict.index = index;
    if (index == 0 || options.pairs == 0) {
        verdict.detail = "index and pair count must be positive";
        return verdict;
    }
    if (sub == base.domain()) {
        verdict.verified = true;
        verdict.inner_index = index;
        verdict.outer = OuterParts{};
        verdict.detail = "sub-interval is the whole domain; outer parts are empty";
        return verdict;
    }
    const auto strategy = witness_strategy_for(base);
    if (!strategy) {
        verdict.detail = "no witness strategy for base " + base.description();
        return verdict;
    }
    OuterParts outer;
    try {
        outer = (*strategy)(base, index, sub);
    } catch (const std::exception& e) {
        verdict.detail = std::string("witness strategy failed: ") + e.what();
        return verdict;
    }
    const FilterBase induced = induced_subsegment_base(base, sub);
    const std::size_t window = options.window == 0 ? 4 * index : options.window;

    // Pairs are checked in ordered chunks so a failing inner index stops
    // early; the first failing pair is the same for every job count.
    const std::size_t chunk = std::max<std::size_t>(options.jobs, 1) * 8;
    for (std::size_t j = index; j < index + window; ++j) {
        std::optional<std::size_t> failed_at;
        std::string failure;
        for (std::size_t begin = 0; begin < options.pairs && !failed_at; begin += chunk) {
            const std::size_t count = std::min(chunk, options.pairs - begin);
            const auto failures = parallel_map(count, options.jobs, [&](std::size_t i) -> std::string {
                const auto [first, second] = restricted_pair(induced, j, begin + i, options.seed);
                for (const TaggedPartition* r : {&first, &second}) {
                    try {
                        complement_with(base, index, outer, *r);
                    } catch (const std::exception& e) {
                        return e.what();
                    }
                }
                return {};
            });
            const auto miss =
                std::find_if(failures.begin(), failures.end(), [](const auto& s) { return !s.empty(); });
            if (miss != failures.end()) {
                failed_at = begin + static_cast<std::size_t>(miss - failures.begin());
                failure = *miss;
            }
        }
        if (!failed_at) {
            verdict.verified = true;
            verdict.inner_index = j;
            verdict.pairs_checked = options.pairs;
            verdict.outer = std::move(outer);
            verdict.detail = "all pairs from restrictions of B_" + std::to_string(j) + " complete into B_" +
                             std::to_string(index);
            return verdict;
        }
        if (j + 1 == index + window) {
            verdict.failing_pair = restricted_pair(induced, j, *failed_at, options.seed);
            verdict.pairs_checked = *failed_at + 1;
            verdict.detail =
                "pair " + std::to_string(*failed_at) + " at inner index " + std::to_string(j) + ": " + failure;
        }
    }
    verdict.outer = std::move(outer);
    return verdict;
}

SubsegmentReport check_subsegment_integration(const Integrand& f, const FilterBase& base, const Interval& sub,
                                              const SubsegmentOptions& options) {
    SubsegmentReport report;
    report.full = estimate_filter_limit(f, base, options.estimate);
    if (report.full.verdict != LimitVerdict::converged) {
        throw ComplementError("f does not converge over the full base (" + to_string(report.full.verdict) + ")");
    }
    const auto& est = options.estimate;
    const ComplementedOptions copt{options.pairs, est.seed, options.complement_window, est.jobs};
    for (std::size_t k = est.depth - est.window + 1; k <= est.depth; ++k) {
        report.complemented.push_back(check_complemented(base, sub, k, copt));
        if (!report.complemented.back().verified) {
            throw ComplementError("base is not complemented at index " + std::to_string(k) + ": " +
                                  report.complemented.back().detail);
        }
    }

    const FilterBase induced = induced_subsegment_base(base, sub);
    report.restricted = estimate_filter_limit(f, induced, est);

    bool all_exact = true;
    for (const auto& verdict : report.complemented) {
        const std::size_t inner = *verdict.inner_index;
        const auto exact = parallel_map(options.pairs, est.jobs, [&](std::size_t i) {
            const auto [first, second] = restricted_pair(induced, inner, i, est.seed);
            const Complement c1 = complement_with(base, verdict.index, *verdict.outer, first);
            const Complement c2 = complement_with(base, verdict.index, *verdict.outer, second);
            return riemann_sum(f, c1.full) - riemann_sum(f, c2.full) == riemann_sum(f, first) - riemann_sum(f, second);
        });
        const auto hits = static_cast<std::size_t>(std::count(exact.begin(), exact.end(), true));
        report.cancellation.push_back(CancellationRecord{verdict.index, inner, options.pairs, hits});
        all_exact = all_exact && hits == options.pairs;
    }
    report.holds = report.restricted.verdict == LimitVerdict::converged && all_exact;
    return report;
}

}  // namespace filterint
