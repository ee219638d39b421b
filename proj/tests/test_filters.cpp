#include <gtest/gtest.h>

#include "filterint/filters.hpp"
#include "filterint/metric.hpp"
#include "support/oracles.hpp"

using namespace filterint;

namespace {

const Interval kUnit(Rational(0), Rational(1));

FilterBase mesh(const std::string& delta) {
    return mesh_base(kUnit, DeltaSchedule::parse(delta));
}

FilterBase exact(const std::string& delta) {
    return exactly_tagged_base(kUnit, PointSequence::harmonic(), DeltaSchedule::parse(delta));
}

SearchOptions search(std::size_t depth, std::size_t samples) {
    SearchOptions s;
    s.depth = depth;
    s.samples = samples;
    return s;
}

}  // namespace

TEST(DeltaSchedule, ParsesTheSupportedShapes) {
    EXPECT_EQ(DeltaSchedule::parse("1/k")(4), Rational(1, 4));
    EXPECT_EQ(DeltaSchedule::parse("3/k")(6), Rational(1, 2));
    EXPECT_EQ(DeltaSchedule::parse("1/k^2")(3), Rational(1, 9));
    EXPECT_EQ(DeltaSchedule::parse("1/2^k")(10), Rational(1, 1024));
    EXPECT_EQ(DeltaSchedule::parse("1/3/2^k")(1), Rational(1, 6));
    EXPECT_EQ(DeltaSchedule::parse("1/2^k").text(), "1/2^k");
    for (const char* bad : {"", "k", "1/j", "1/k^0", "1/1^k", "0/k", "-1/k"}) {
        EXPECT_THROW(DeltaSchedule::parse(bad), FilterError) << bad;
    }
    EXPECT_THROW((void)DeltaSchedule::parse("1/k")(0), FilterError);
}

TEST(DeltaSchedule, CustomScheduleMustDecrease) {
    EXPECT_THROW(DeltaSchedule::custom([](std::size_t) { return Rational(1, 2); }, "flat"), FilterError);
    EXPECT_THROW(DeltaSchedule::custom([](std::size_t k) { return Rational(1) - Rational(1, k + 1); }, "up"),
                 FilterError);
    EXPECT_NO_THROW(DeltaSchedule::custom([](std::size_t k) { return Rational(1, k * k); }, "1/k^2"));
}

TEST(PointSequence, HarmonicMembershipIsExact) {
    const auto h = PointSequence::harmonic();
    EXPECT_EQ(h.index_of(Rational(1, 5)), mpz_class(5));
    EXPECT_FALSE(h.contains(Rational(2, 5)));
    EXPECT_FALSE(h.contains(Rational(0)));
    EXPECT_FALSE(h.contains(Rational(-1, 3)));
    EXPECT_TRUE(h.contains(Rational(1)));
    EXPECT_TRUE(h.strictly_decreasing());
    EXPECT_TRUE(h.touches_accumulation(0, Rational(1, 100)));
    EXPECT_FALSE(h.touches_accumulation(Rational(1, 100), 1));
    EXPECT_EQ(h.max_index_in(Rational(1, 10), Rational(1, 3)), mpz_class(10));
    EXPECT_FALSE(h.max_index_in(Rational(3, 5), Rational(4, 5)).has_value());

    const auto shifted = PointSequence::parse("1/2+1/4/n");
    EXPECT_EQ(shifted.at(2), Rational(5, 8));
    EXPECT_EQ(shifted.index_of(Rational(5, 8)), mpz_class(2));
}

TEST(PointSequence, ExplicitListsRejectDuplicates) {
    EXPECT_THROW(PointSequence::from_points({Rational(1, 2), Rational(1, 2)}), FilterError);
    const auto list = PointSequence::parse("1/2,1/3,1/7");
    EXPECT_EQ(list.index_of(Rational(1, 7)), mpz_class(3));
    EXPECT_FALSE(list.at(4).has_value());
    EXPECT_FALSE(PointSequence::parse("1/3,1/2").strictly_decreasing());
}

TEST(MeshBase, MembershipExamples) {
    const auto base = mesh("1/k");
    const auto four = uniform_partition(kUnit, 4);
    EXPECT_TRUE(base.is_member(3, four));
    EXPECT_FALSE(base.is_member(4, four));
    EXPECT_FALSE(base.is_member(1, uniform_partition(kUnit, 1)));
    EXPECT_THROW((void)base.is_member(0, four), FilterError);
    EXPECT_FALSE(base.is_member(1, uniform_partition(Interval(0, 2), 8)));
}

TEST(MeshBase, SamplesAreMembersAndDeterministic) {
    const auto base = mesh("1/k");
    const auto samples = base.sample(5, 1, 100);
    ASSERT_EQ(samples.size(), 100U);
    for (const auto& tp : samples) {
        EXPECT_LT(diameter(tp), Rational(1, 5));
    }
    EXPECT_EQ(samples, base.sample(5, 1, 100, 4));
    EXPECT_EQ(samples[17], base.draw(5, 17, 1));
    EXPECT_NE(samples[17], base.draw(5, 17, 2));
}

TEST(MeshBase, DeepIndicesStayFeasible) {
    const auto base = mesh("1/2^k");
    const auto tp = base.draw(12, 0, 9);
    EXPECT_LT(diameter(tp), Rational(1, 4096));
    EXPECT_TRUE(base.is_member(12, tp));
}

TEST(Bases, DecreasingLawOnSampledMembers) {
    for (const auto& base : {mesh("1/k"), exact("1/k"), mesh("1/2^k")}) {
        for (std::size_t k = 2; k <= 6; ++k) {
            for (const auto& tp : base.sample(k, 4, 30)) {
                ASSERT_TRUE(base.is_member(k, tp)) << base.description();
                for (std::size_t j = 1; j < k; ++j) {
                    EXPECT_TRUE(base.is_member(j, tp)) << base.description() << " k=" << k << " j=" << j;
                }
            }
        }
    }
}

TEST(ExactlyTaggedBase, MembershipExamples) {
    const auto base = exact("1/k");
    const auto third = make_partition(kUnit, {0, Rational(1, 2), 1}, {Rational(1, 3), Rational(3, 4)});
    for (std::size_t k = 1; k <= 5; ++k) {
        EXPECT_FALSE(base.is_member(k, third));
    }
    const auto nudged =
        make_partition(kUnit, {0, Rational(1, 2), 1}, {Rational(1, 5) + Rational(1, 1000), Rational(3, 5)});
    EXPECT_TRUE(base.is_member(1, nudged));
    EXPECT_FALSE(base.is_member(2, nudged));
}

TEST(ExactlyTaggedBase, SampledTagsAvoidUnitFractions) {
    const auto base = exact("1/k");
    for (std::size_t k = 1; k <= 20; ++k) {
        for (const auto& tp : base.sample(k, 1, 40)) {
            for (const auto& t : tp.tags()) {
                ASSERT_FALSE(oracle::is_unit_fraction(t)) << t;
            }
        }
    }
}

TEST(ExactlyTaggedBase, AvoidSetMustDecrease) {
    EXPECT_THROW(exactly_tagged_base(kUnit, PointSequence::parse("1/3,1/2"), DeltaSchedule::parse("1/k")),
                 FilterError);
}

void expect_map_within_identity(const SearchVerdict& verdict, std::size_t depth) {
    ASSERT_EQ(verdict.index_map.size(), depth);
    for (std::size_t k = 1; k <= depth; ++k) {
        EXPECT_GE(verdict.index_map[k - 1], 1U);
        EXPECT_LE(verdict.index_map[k - 1], k);
    }
}

TEST(CheckSubset, MeshAgainstItselfNeedsNoDeeperIndex) {
    const auto verdict = check_subset(mesh("1/k"), mesh("1/k"), search(4, 20));
    EXPECT_TRUE(verdict.verified);
    expect_map_within_identity(verdict, 4);
}

TEST(CheckSubset, ExactlyTaggedSitsInsideMesh) {
    const auto verdict = check_subset(mesh("1/k"), exact("1/k"), search(5, 50));
    EXPECT_TRUE(verdict.verified);
    expect_map_within_identity(verdict, 5);
}

TEST(CheckSubset, MeshIsNotInsideExactlyTagged) {
    const auto verdict = check_subset(exact("1/k"), mesh("1/k"), search(1, 100));
    ASSERT_FALSE(verdict.verified);
    ASSERT_TRUE(verdict.failure && verdict.failure->counterexample);
    const auto& tags = verdict.failure->counterexample->tags();
    EXPECT_TRUE(std::any_of(tags.begin(), tags.end(), oracle::is_unit_fraction));
}

TEST(Dominance, EveryBaseDominatesItselfAtDistanceZero) {
    for (const auto& base : {mesh("1/k"), exact("1/k")}) {
        const auto verdict = check_rho_dominance(base, base, Rational(1, 1000), identity_projector(), search(4, 20));
        EXPECT_TRUE(verdict.verified) << base.description();
        EXPECT_EQ(verdict.worst_distance, Rational(0));
    }
}

TEST(Dominance, SubsetImpliesDominance) {
    const auto subset = check_subset(mesh("1/k"), exact("1/k"), search(4, 30));
    ASSERT_TRUE(subset.verified);
    const auto verdict = check_rho_dominance(mesh("1/k"), exact("1/k"), Rational(1, 10000), identity_projector(),
                                             search(4, 30));
    EXPECT_TRUE(verdict.verified);
}

TEST(Dominance, PerturbationProjectorOntoMeshIsTheIdentity) {
    const auto verdict = check_rho_dominance(mesh("1/k"), exact("1/k"), Rational(1, 100),
                                             tag_perturbation_projector(), search(5, 30));
    EXPECT_TRUE(verdict.verified);
    EXPECT_EQ(verdict.worst_distance, Rational(0));
}

TEST(Dominance, PerturbationMovesOffendingTagsAtCostTwiceTheCellLength) {
    const auto target = exact("1/k");
    const auto sample = make_partition(kUnit, {0, Rational(1, 2), 1}, {Rational(1, 3), Rational(3, 4)});
    const auto moved = tag_perturbation_projector()(sample, target, 1);
    ASSERT_TRUE(moved);
    EXPECT_TRUE(target.is_member(1, *moved));
    EXPECT_EQ(rho(sample, *moved).value(), Rational(1));
}

TEST(Dominance, MeshDominatesExactlyTaggedWithAGenerousEpsilon) {
    const auto verdict =
        check_rho_dominance(exact("1/k"), mesh("1/k"), Rational(1, 2), tag_perturbation_projector(), search(3, 30));
    EXPECT_TRUE(verdict.verified);
}

TEST(Dominance, EpsilonMustBePositive) {
    EXPECT_THROW(check_rho_dominance(mesh("1/k"), mesh("1/k"), Rational(0), identity_projector(), search(1, 1)),
                 FilterError);
    EXPECT_THROW(
        check_rho_dominance(mesh("1/k"), mesh("1/k"), Rational(-1, 2), identity_projector(), search(1, 1)),
        FilterError);
}

TEST(InducedBase, RestrictedSamplesFitTheWidenedMesh) {
    const auto parent = mesh("1/k");
    const Interval sub(Rational(1, 4), Rational(3, 4));
    const auto induced = induced_subsegment_base(parent, sub);
    EXPECT_EQ(induced.domain(), sub);
    for (std::size_t k = 1; k <= 6; ++k) {
        for (const auto& tp : induced.sample(k, 3, 100)) {
            EXPECT_LT(diameter(tp), Rational(2) * Rational(1, static_cast<std::int64_t>(k)));
            EXPECT_TRUE(induced.is_member(k, tp));
            for (const auto& t : tp.tags()) {
                EXPECT_TRUE(sub.contains(t));
            }
        }
    }
}

TEST(InducedBase, WholeDomainReproducesParentSamples) {
    for (const auto& parent : {mesh("1/k"), exact("1/k")}) {
        const auto induced = induced_subsegment_base(parent, kUnit);
        EXPECT_EQ(induced.sample(4, 8, 25), parent.sample(4, 8, 25)) << parent.description();
    }
}

TEST(InducedBase, SubIntervalMustLieInside) {
    EXPECT_THROW(induced_subsegment_base(mesh("1/k"), Interval(Rational(1, 2), 2)), FilterError);
}
