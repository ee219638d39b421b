#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "filterint/partition.hpp"
#include "filterint/random.hpp"

namespace filterint {

class FilterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Positive, strictly decreasing mesh bounds delta_1 > delta_2 > ... -> 0.
class DeltaSchedule {
public:
    using Fn = std::function<Rational(std::size_t)>;

    /// scale / index^exponent, exponent >= 1.
    static DeltaSchedule power(Rational scale, unsigned exponent);
    /// scale / base^index, base > 1.
    static DeltaSchedule geometric(Rational scale, Rational base);
    /// Arbitrary schedule; positivity and strict decrease are verified on
    /// indices 1..check_depth, otherwise FilterError.
    static DeltaSchedule custom(Fn fn, std::string text, std::size_t check_depth = 64);
    /// "1/k", "c/k", "c/k^e", "1/2^k", "c/b^k".
    static DeltaSchedule parse(const std::string& text);

    [[nodiscard]] Rational operator()(std::size_t index) const;
    [[nodiscard]] const std::string& text() const { return text_; }

private:
    DeltaSchedule(Fn fn, std::string text) : fn_(std::move(fn)), text_(std::move(text)) {}
    Fn fn_;
    std::string text_;
};

/// Pairwise distinct points t_1, t_2, ...: either offset + scale/n for all
/// n >= 1, or an explicit finite list.
class PointSequence {
public:
    static PointSequence harmonic(Rational scale = Rational(1), Rational offset = Rational(0));
    /// Throws FilterError on duplicate points.
    static PointSequence from_points(std::vector<Rational> points);
    /// "1/n", "c/n", "a+c/n" or a comma separated list "p1,p2,...".
    static PointSequence parse(const std::string& text);

    /// t_n for n >= 1; empty past the end of a finite list.
    [[nodiscard]] std::optional<Rational> at(const mpz_class& n) const;
    /// The n with t_n == t, if any. Exact.
    [[nodiscard]] std::optional<mpz_class> index_of(const Rational& t) const;
    [[nodiscard]] bool contains(const Rational& t) const { return index_of(t).has_value(); }
    [[nodiscard]] bool is_infinite() const { return !explicit_points_; }
    [[nodiscard]] bool strictly_decreasing() const;
    /// Largest n with t_n in [lo, hi] and the point itself; for harmonic
    /// sequences this is empty when the interval reaches the accumulation point
    /// (the range of indices is then unbounded), see touches_accumulation().
    [[nodiscard]] std::optional<mpz_class> max_index_in(const Rational& lo, const Rational& hi) const;
    /// True when [lo, hi] holds infinitely many points.
    [[nodiscard]] bool touches_accumulation(const Rational& lo, const Rational& hi) const;

    [[nodiscard]] const Rational& scale() const { return scale_; }
    [[nodiscard]] const Rational& offset() const { return offset_; }
    [[nodiscard]] const std::vector<Rational>* points() const {
        return explicit_points_ ? &*explicit_points_ : nullptr;
    }
    [[nodiscard]] std::string text() const;

private:
    PointSequence() = default;
    Rational scale_{1};
    Rational offset_{0};
    std::optional<std::vector<Rational>> explicit_points_;
    std::shared_ptr<const std::map<Rational, std::size_t>> lookup_;
};

using AvoidSet = PointSequence;

struct SamplerConfig {
    /// Lattice refinement for breakpoints and tags; a multiple of 4.
    std::int64_t denominator_bound = 64;
    /// Redraws allowed per tag before an avoid-set sampler gives up.
    std::size_t tag_retry_cap = 1000;
    /// Largest cell count a sampler may produce.
    std::size_t max_cells = std::size_t{1} << 17;
    /// Redraws of a parent sample whose restriction is empty.
    std::size_t restriction_retry_cap = 1000;
};

class FilterBase;

/// Outer pieces over [lo, alpha] and [beta, hi]; either may be absent when
/// the sub-interval reaches the domain end.
struct OuterParts {
    std::optional<TaggedPartition> left;
    std::optional<TaggedPartition> right;
};

using WitnessStrategy = std::function<OuterParts(const FilterBase&, std::size_t index, const Interval& sub)>;

enum class BaseKind { mesh, exactly_tagged, subsegment, custom };

std::string to_string(BaseKind kind);

/// Countable decreasing base B_1 ⊇ B_2 ⊇ ... of subsets of tagged-partition
/// space, represented by an exact membership predicate and a seeded sampler.
class FilterBase {
public:
    using Membership = std::function<bool(std::size_t index, const TaggedPartition&)>;
    using Draw = std::function<TaggedPartition(std::size_t index, std::size_t ordinal, Rng& rng)>;

    /// Bases of any other shape: an adversarial sampler, a hand-built
    /// membership. tag_independent promises membership ignores tags.
    static FilterBase custom(Interval domain, Membership membership, Draw draw, std::string description,
                             bool tag_independent = false);

    [[nodiscard]] BaseKind kind() const { return kind_; }
    [[nodiscard]] const Interval& domain() const { return domain_; }
    [[nodiscard]] const std::string& description() const { return description_; }

    /// Exact. index >= 1; partitions of another domain are never members.
    [[nodiscard]] bool is_member(std::size_t index, const TaggedPartition& tp) const;
    /// Sample `ordinal` of B_index under `seed`; independent of other ordinals.
    [[nodiscard]] TaggedPartition draw(std::size_t index, std::size_t ordinal, std::uint64_t seed) const;
    /// Ordinals 0..count-1, in order, on up to `jobs` threads.
    [[nodiscard]] std::vector<TaggedPartition> sample(std::size_t index, std::uint64_t seed, std::size_t count,
                                                      std::size_t jobs = 1) const;

    /// Membership depends only on breakpoints; any retagging of a member is a member.
    [[nodiscard]] bool tag_independent() const { return tag_independent_; }
    [[nodiscard]] const std::optional<DeltaSchedule>& delta() const { return delta_; }
    [[nodiscard]] const std::optional<AvoidSet>& avoid() const { return avoid_; }
    [[nodiscard]] const std::shared_ptr<const FilterBase>& parent() const { return parent_; }
    [[nodiscard]] const SamplerConfig& config() const { return config_; }
    [[nodiscard]] const std::optional<WitnessStrategy>& witness_strategy() const { return witness_; }

    /// Attaches a completion strategy used by the complemented check.
    [[nodiscard]] FilterBase with_witness_strategy(WitnessStrategy strategy) const;

private:
    friend FilterBase mesh_base(const Interval&, DeltaSchedule, SamplerConfig);
    friend FilterBase exactly_tagged_base(const Interval&, AvoidSet, DeltaSchedule, SamplerConfig);
    friend FilterBase induced_subsegment_base(const FilterBase&, const Interval&);

    FilterBase(BaseKind kind, Interval domain, std::string description)
        : kind_(kind), domain_(std::move(domain)), description_(std::move(description)) {}

    BaseKind kind_;
    Interval domain_;
    std::string description_;
    Membership membership_;
    Draw draw_;
    bool tag_independent_ = false;
    std::optional<DeltaSchedule> delta_;
    std::optional<AvoidSet> avoid_;
    std::shared_ptr<const FilterBase> parent_;
    std::optional<WitnessStrategy> witness_;
    SamplerConfig config_;
};

/// B_k = { tp : diameter(tp) < delta_k }.
FilterBase mesh_base(const Interval& domain, DeltaSchedule delta, SamplerConfig config = {});

/// B_k = { tp : diameter(tp) < delta_k and no tag in `avoid` }.
FilterBase exactly_tagged_base(const Interval& domain, AvoidSet avoid, DeltaSchedule delta,
                               SamplerConfig config = {});

/// Restrictions of the parent's members to `sub`. Samples are restrictions of
/// parent samples. Membership is an over-approximation of "restriction of a
/// member of B_k": for mesh-type parents, diameter < 2*delta_k (boundary
/// cells may merge two parent cells) plus the parent's avoid set; for custom
/// parents it is "parent membership of the identity extension", i.e. only
/// sub == domain is decided and other sub-intervals accept everything.
FilterBase induced_subsegment_base(const FilterBase& base, const Interval& sub);

struct SearchOptions {
    std::size_t depth = 5;
    std::size_t samples = 100;
    std::uint64_t seed = 1;
    /// Candidate indices j searched per k are 1..window_factor*k.
    std::size_t window_factor = 4;
    std::size_t jobs = 1;
};

struct FailedIndex {
    std::size_t index = 0;
    /// A sample of the last searched finer set that did not fit.
    std::optional<TaggedPartition> counterexample;
    std::string detail;
};

/// Verified carries the matched j for each k = 1..depth; otherwise the first
/// k without a match. Unknown never refutes the relation.
struct SearchVerdict {
    bool verified = false;
    std::vector<std::size_t> index_map;
    std::optional<FailedIndex> failure;
};

/// Sampled certificate that every B_k of `coarser` contains some B_j of
/// `finer`.
SearchVerdict check_subset(const FilterBase& coarser, const FilterBase& finer, const SearchOptions& options);

/// Maps a sample of the dominating base to a claimed-close member of
/// B_index of the dominated base; empty when it cannot.
using Projector = std::function<std::optional<TaggedPartition>(const TaggedPartition& sample,
                                                              const FilterBase& target, std::size_t index)>;

Projector identity_projector();
/// Moves every tag that lies in the target's avoid set to a nearby point of
/// the same cell outside it. rho to the input is twice the total length of
/// the moved cells. Identity when the target has no avoid set.
Projector tag_perturbation_projector();

struct DominanceVerdict {
    bool verified = false;
    std::vector<std::size_t> index_map;
    /// Largest rho observed among accepted projections.
    Rational worst_distance;
    std::optional<FailedIndex> failure;
};

/// Sampled certificate of rho-dominance: for each k some j was found with
/// every sampled member of dominating B_j projecting into dominated B_k
/// within rho < epsilon. Throws FilterError unless epsilon > 0.
DominanceVerdict check_rho_dominance(const FilterBase& dominated, const FilterBase& dominating,
                                     const Rational& epsilon, const Projector& projector,
                                     const SearchOptions& options);

}  // namespace filterint
