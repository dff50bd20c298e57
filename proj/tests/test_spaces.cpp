#include <doctest.h>

#include <cmath>

#include "codiff/spaces.hpp"

using namespace codiff;

TEST_CASE("norms") {
    CHECK(norm(PrimalVector(SpaceSpec::l1(3), {2, 1, 0})) == doctest::Approx(3));
    CHECK(norm(PrimalVector(SpaceSpec::lp(2, 2), {3, 4})) == doctest::Approx(5));
    const auto c = SpaceSpec::c01(101);
    CHECK(norm(PrimalVector::sample(c, [](double t) { return t * t; })) == 1.0);
}

TEST_CASE("dual norms") {
    CHECK(dual_norm(DualVector(SpaceSpec::l1(3), {1, -3, 2})) == 3.0);
    CHECK(dual_norm(DualVector(SpaceSpec::lp(2, 2), {3, 4})) == doctest::Approx(5));
    const auto c = SpaceSpec::c01(101);
    CHECK(dual_norm(DualVector::atomic(c, {{0, 1}, {0.5, -2}, {1, 1}})) == 4.0);
    // q = 3/2 for p = 3
    const double expected = std::pow(1.0 + std::pow(2.0, 1.5), 2.0 / 3.0);
    CHECK(dual_norm(DualVector(SpaceSpec::lp(3, 2), {1, 2})) == doctest::Approx(expected));
}

TEST_CASE("pairing") {
    const auto s = SpaceSpec::lp(2, 3);
    CHECK(pairing(DualVector(s, {1, 0, 2}), PrimalVector(s, {3, 1, 1})) == 5.0);
    const auto c = SpaceSpec::c01(101);
    const auto sq = PrimalVector::sample(c, [](double t) { return t * t; });
    const auto id = PrimalVector::sample(c, [](double t) { return t; });
    CHECK(pairing(DualVector::dirac(c, 1.0), sq) == 1.0);
    const auto gamma = DualVector::atomic(c, {{0, 1}, {0.5, -2}, {1, 1}});
    CHECK(std::abs(pairing(gamma, id)) <= 1e-15);
    CHECK(pairing(gamma, sq) == doctest::Approx(0.5));
}

TEST_CASE("atoms snap to grid nodes") {
    const auto c = SpaceSpec::c01(11);
    const auto mu = DualVector::atomic(c, {{0.31, 1.0}, {0.9, 2.0}});
    REQUIRE(mu.atoms().size() == 2);
    CHECK(mu.atoms()[0].location == doctest::Approx(0.3));
    CHECK(mu.snap_distance() == doctest::Approx(0.01));
    CHECK_THROWS(DualVector::atomic(c, {{0.31, 1.0}, {0.29, 2.0}}));
    // Sums merge atoms at the same node.
    const auto sum = DualVector::dirac(c, 0.3) + DualVector::dirac(c, 0.3, 2.0);
    REQUIRE(sum.atoms().size() == 1);
    CHECK(sum.atoms()[0].weight == 3.0);
}

TEST_CASE("duality map satisfies both identities") {
    CHECK(duality_map(PrimalVector(SpaceSpec::lp(2, 2), {1, 2})) == DualVector(SpaceSpec::lp(2, 2), {1, 2}));
    const auto s3 = SpaceSpec::lp(3, 2);
    const auto j10 = duality_map(PrimalVector(s3, {1, 0}));
    CHECK(j10[0] == doctest::Approx(1));
    CHECK(j10[1] == 0.0);
    const auto j11 = duality_map(PrimalVector(s3, {1, 1}));
    CHECK(j11[0] == doctest::Approx(std::pow(2.0, -1.0 / 3)));
    CHECK(j11[1] == doctest::Approx(std::pow(2.0, -1.0 / 3)));

    for (double p : {1.5, 2.0, 3.0, 7.0}) {
        const auto s = SpaceSpec::lp(p, 4);
        const PrimalVector v(s, {0.3, -1.2, 0.0, 2.5});
        const auto j = duality_map(v);
        CHECK(pairing(j, v) == doctest::Approx(norm(v) * norm(v)));
        CHECK(dual_norm(j) == doctest::Approx(norm(v)));
        const auto back = duality_map_inverse(j);
        CHECK(distance(back, v) < 1e-12);
    }
}

TEST_CASE("l1 duality selection") {
    const auto s = SpaceSpec::l1(3);
    const auto a = duality_map_l1_selection(PrimalVector(s, {2, 1, 0}));
    CHECK(a.value == DualVector(s, {3, 3, 0}));
    CHECK_FALSE(a.degenerate);
    CHECK(pairing(a.value, PrimalVector(s, {2, 1, 0})) == 9.0);
    const auto b = duality_map_l1_selection(PrimalVector(SpaceSpec::l1(2), {-1, 0}));
    CHECK(b.value == DualVector(SpaceSpec::l1(2), {-1, 0}));
    const auto z = duality_map_l1_selection(PrimalVector::zero(s));
    CHECK(z.value.is_zero());
    CHECK(z.degenerate);
}

TEST_CASE("inverse duality map") {
    CHECK(duality_map_inverse(DualVector(SpaceSpec::lp(2, 2), {0, 1})) == PrimalVector(SpaceSpec::lp(2, 2), {0, 1}));
    const auto v = duality_map_inverse(DualVector(SpaceSpec::lp(3, 2), {1, 0}));
    CHECK(v[0] == doctest::Approx(1));
    CHECK(duality_map_inverse(DualVector::zero(SpaceSpec::lp(3, 2))).is_zero());
}

TEST_CASE("space mismatch is rejected") {
    CHECK_THROWS_AS(pairing(DualVector::zero(SpaceSpec::lp(2, 2)), PrimalVector::zero(SpaceSpec::lp(3, 2))),
                    SpaceMismatch);
    CHECK_THROWS(PrimalVector(SpaceSpec::lp(2, 3), {1, 2}));
}
