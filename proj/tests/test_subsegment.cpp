#include <gtest/gtest.h>

#include "filterint/subsegment.hpp"
#include "support/oracles.hpp"

using namespace filterint;

namespace {

const Interval kUnit(Rational(0), Rational(1));
const Interval kMiddle(Rational(1, 4), Rational(3, 4));

FilterBase mesh(const std::string& delta) {
    return mesh_base(kUnit, DeltaSchedule::parse(delta));
}

// Members: diameter < 1/2^k with an even cell count. Samples are mesh draws
// with the first cell split when the count is odd. The attached strategy
// always returns even uniform outer parts, so odd restrictions never complete.
FilterBase parity_base() {
    const FilterBase inner = mesh("1/2^k");
    auto membership = [](std::size_t k, const TaggedPartition& tp) {
        return diameter(tp) < Rational(1) / pow(Rational(2), static_cast<unsigned>(k)) && tp.cell_count() % 2 == 0;
    };
    auto draw = [inner](std::size_t k, std::size_t ordinal, Rng& rng) {
        TaggedPartition tp = inner.draw(k, ordinal, rng.next());
        if (tp.cell_count() % 2 == 0) {
            return tp;
        }
        std::vector<Rational> xi = tp.breakpoints();
        std::vector<Rational> tags = tp.tags();
        const Rational len = xi[1] - xi[0];
        xi.insert(xi.begin() + 1, xi[0] + len / 2);
        tags[0] = xi[0] + len / 4;
        tags.insert(tags.begin() + 1, xi[1] + len / 4);
        return make_partition(kUnit, std::move(xi), std::move(tags));
    };
    auto strategy = [](const FilterBase&, std::size_t k, const Interval& sub) {
        const auto cells = std::size_t{1} << (k + 1);
        return OuterParts{uniform_partition(Interval(Rational(0), sub.lo()), cells),
                          uniform_partition(Interval(sub.hi(), Rational(1)), cells)};
    };
    return FilterBase::custom(kUnit, membership, draw, "parity").with_witness_strategy(strategy);
}

SubsegmentOptions subsegment_options(std::size_t depth, std::size_t samples, Rational tolerance, std::size_t pairs) {
    SubsegmentOptions o;
    o.estimate.depth = depth;
    o.estimate.samples = samples;
    o.estimate.tolerance = tolerance;
    o.pairs = pairs;
    return o;
}

}  // namespace

TEST(ComplementWitness, MeshCompletesAFineRestrictedPart) {
    const auto base = mesh("1/k");
    const auto restricted = uniform_partition(kMiddle, 4);
    const auto c = complement_witness(base, 4, restricted);
    EXPECT_TRUE(c.proof.member);
    EXPECT_TRUE(base.is_member(4, c.full));
    EXPECT_EQ(c.proof.full_diameter, Rational(1, 8));
    ASSERT_TRUE(c.outer.left && c.outer.right);
    EXPECT_EQ(diameter(*c.outer.left), Rational(1, 8));
    EXPECT_EQ(diameter(*c.outer.right), Rational(1, 8));
    EXPECT_EQ(c.full.cell_count(), 8U);
}

TEST(ComplementWitness, CoarseRestrictedPartIsImpossible) {
    EXPECT_THROW(complement_witness(mesh("1/k"), 4, uniform_partition(kMiddle, 1)), ComplementError);
}

TEST(ComplementWitness, ExactlyTaggedOuterTagsAreNudgedOffTheAvoidSet) {
    const auto base = exactly_tagged_base(kUnit, PointSequence::harmonic(), DeltaSchedule::parse("1/2^k"));
    const Interval right_half(Rational(1, 2), Rational(1));
    const auto c = complement_witness(base, 1, uniform_partition(right_half, 2));
    ASSERT_TRUE(c.outer.left);
    EXPECT_FALSE(c.outer.right);
    EXPECT_EQ(c.outer.left->tags(), (std::vector<Rational>{Rational(3, 16), Rational(3, 8)}));
    EXPECT_TRUE(base.is_member(1, c.full));
    for (const auto& t : c.full.tags()) {
        EXPECT_FALSE(oracle::is_unit_fraction(t));
    }
}

TEST(ComplementWitness, CustomBaseWithoutStrategyIsAnError) {
    const auto bare = FilterBase::custom(
        kUnit, [](std::size_t, const TaggedPartition&) { return true; },
        [](std::size_t, std::size_t, Rng&) { return uniform_partition(kUnit, 2); }, "bare");
    EXPECT_FALSE(witness_strategy_for(bare));
    EXPECT_THROW(complement_witness(bare, 1, uniform_partition(kMiddle, 2)), ComplementError);
}

TEST(Complemented, MeshIsVerifiedThroughOneSharedOuterPair) {
    ComplementedOptions o;
    o.pairs = 60;
    for (std::size_t k : {1U, 3U, 5U}) {
        const auto v = check_complemented(mesh("1/2^k"), kMiddle, k, o);
        EXPECT_TRUE(v.verified) << v.detail;
        EXPECT_EQ(v.pairs_checked, 60U);
        ASSERT_TRUE(v.inner_index);
        EXPECT_GE(*v.inner_index, k);
        ASSERT_TRUE(v.outer);
        const auto induced = induced_subsegment_base(mesh("1/2^k"), kMiddle);
        for (std::size_t p = 0; p < 5; ++p) {
            const auto [a, b] = restricted_pair(induced, *v.inner_index, p, o.seed);
            EXPECT_TRUE(complement_with(mesh("1/2^k"), k, *v.outer, a).proof.member);
            EXPECT_TRUE(complement_with(mesh("1/2^k"), k, *v.outer, b).proof.member);
        }
    }
}

TEST(Complemented, WholeDomainIsVacuous) {
    const auto v = check_complemented(mesh("1/k"), kUnit, 3, {});
    EXPECT_TRUE(v.verified);
}

TEST(Complemented, LiteralWindowFailsForMesh) {
    ComplementedOptions o;
    o.pairs = 100;
    o.window = 1;
    const auto v = check_complemented(mesh("1/2^k"), kMiddle, 3, o);
    EXPECT_FALSE(v.verified);
    EXPECT_TRUE(v.failing_pair);
}

TEST(Complemented, ParityBaseIsUnknown) {
    ComplementedOptions o;
    o.pairs = 40;
    o.window = 3;
    const auto v = check_complemented(parity_base(), kMiddle, 2, o);
    EXPECT_FALSE(v.verified);
    ASSERT_TRUE(v.failing_pair);
    // Both outer parts have an even cell count, so an odd restriction cannot complete.
    const auto odd = [](const TaggedPartition& tp) { return tp.cell_count() % 2 == 1; };
    EXPECT_TRUE(odd(v.failing_pair->first) || odd(v.failing_pair->second));
}

TEST(Complemented, IdenticalAcrossJobCounts) {
    ComplementedOptions o;
    o.pairs = 40;
    o.window = 1;
    const auto one = check_complemented(mesh("1/2^k"), kMiddle, 3, o);
    o.jobs = 3;
    const auto three = check_complemented(mesh("1/2^k"), kMiddle, 3, o);
    EXPECT_EQ(one.verified, three.verified);
    EXPECT_EQ(one.pairs_checked, three.pairs_checked);
    EXPECT_EQ(one.failing_pair, three.failing_pair);
}

TEST(SubsegmentIntegration, IdentityOnTheMiddleHalf) {
    const auto report = check_subsegment_integration(Integrand::identity(), mesh("1/2^k"), kMiddle,
                                                     subsegment_options(9, 20, Rational(1, 500), 20));
    EXPECT_TRUE(report.holds);
    ASSERT_EQ(report.restricted.verdict, LimitVerdict::converged);
    const Rational expected = oracle::polynomial_integral({0, 1}, kMiddle.lo(), kMiddle.hi());
    EXPECT_EQ(expected, Rational(1, 4));
    EXPECT_LT(abs(*report.restricted.estimate - expected), Rational(1, 500));
    for (const auto& c : report.cancellation) {
        EXPECT_EQ(c.exact, c.pairs);
        EXPECT_EQ(c.pairs, 20U);
    }
}

TEST(SubsegmentIntegration, ConstantIsExact) {
    const Interval sub(Rational(1, 3), Rational(5, 6));
    const auto report = check_subsegment_integration(Integrand::constant(Rational(3, 2)), mesh("1/k"), sub,
                                                     subsegment_options(5, 10, Rational(1, 1000), 10));
    EXPECT_TRUE(report.holds);
    ASSERT_TRUE(report.restricted.estimate);
    EXPECT_EQ(*report.restricted.estimate, Rational(3, 2) * sub.length());
}

TEST(SubsegmentIntegration, NeedsAConvergentFullEstimate) {
    EXPECT_THROW(check_subsegment_integration(Integrand::dirichlet(), mesh("1/2^k"), kMiddle,
                                              subsegment_options(5, 10, Rational(1, 100), 10)),
                 ComplementError);
}

TEST(SubsegmentIntegration, CancellationHoldsOnSharedOuterParts) {
    const auto base = mesh("1/2^k");
    const auto induced = induced_subsegment_base(base, kMiddle);
    const auto f = Integrand::polynomial({1, -2, 3});
    const auto outer = uniform_outer_parts(base, 4, kMiddle);
    for (std::size_t p = 0; p < 30; ++p) {
        const auto [a, b] = restricted_pair(induced, 6, p, 5);
        const auto full_a = complement_with(base, 4, outer, a).full;
        const auto full_b = complement_with(base, 4, outer, b).full;
        EXPECT_EQ(riemann_sum(f, full_a) - riemann_sum(f, full_b), riemann_sum(f, a) - riemann_sum(f, b));
    }
}
