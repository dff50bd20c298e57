#include <doctest.h>

#include <cmath>
#include <random>

#include "codiff/projections.hpp"

using namespace codiff;

TEST_CASE("ball projection") {
    const auto s = SpaceSpec::lp(2, 2);
    CHECK(project_ball_lp(PrimalVector(s, {0.1, 0.2}), 1) == PrimalVector(s, {0.1, 0.2}));
    const auto y = project_ball_lp(PrimalVector(s, {3, 4}), 1);
    CHECK(y[0] == doctest::Approx(0.6));
    CHECK(y[1] == doctest::Approx(0.8));
    const PrimalVector b(SpaceSpec::lp(3, 2), {1, 0});
    CHECK(project_ball_lp(b, 1) == b);
}

TEST_CASE("ball projection agrees with brute force") {
    std::mt19937_64 gen(5);
    std::normal_distribution<double> g;
    for (double p : {1.5, 2.0, 3.0}) {
        for (std::size_t dim : {2u, 3u}) {
            const auto s = SpaceSpec::lp(p, dim);
            const ConvexSetDescriptor ball(Ball{1.0}, s);
            for (int k = 0; k < 2; ++k) {
                std::vector<double> v(dim);
                for (double& c : v) c = 2.0 * g(gen);
                const PrimalVector x(s, v);
                const auto closed = project_ball_lp(x, 1.0);
                const auto brute = brute_force_project(x, ball);
                const double dc = distance(x, closed), db = distance(x, brute);
                CHECK(dc <= db + 1e-12);
                CHECK(db - dc <= 1e-4);
                // In a Hilbert space ||y - P(x)||^2 <= ||x - y||^2 - ||x - P(x)||^2 for y in the set.
                if (p == 2.0) {
                    CHECK(distance(closed, brute) * distance(closed, brute) <= db * db - dc * dc + 1e-12);
                }
            }
        }
    }
}

TEST_CASE("positive cone projection") {
    const auto s = SpaceSpec::lp(3, 3);
    CHECK(project_positive_cone(PrimalVector(s, {1, -2, 3})) == PrimalVector(s, {1, 0, 3}));
    CHECK(project_positive_cone(PrimalVector(s, {-1, 0, -3})).is_zero());
    const auto b = brute_force_project(PrimalVector(SpaceSpec::lp(2, 2), {1, -2}),
                                       ConvexSetDescriptor(PositiveCone{}, SpaceSpec::lp(2, 2)));
    CHECK(b[0] == doctest::Approx(1).epsilon(1e-6));
    CHECK(std::abs(b[1]) < 1e-6);
}

TEST_CASE("l1 ball selection") {
    const auto s = SpaceSpec::l1(3);
    const auto sel = project_ball_l1_selection(PrimalVector(s, {2, 1, 0}), 1);
    CHECK(sel.value[0] == doctest::Approx(2.0 / 3));
    CHECK(sel.value[1] == doctest::Approx(1.0 / 3));
    CHECK(sel.value[2] == 0.0);
    CHECK(sel.is_selection);
    const PrimalVector inside(s, {0.2, -0.3, 0.1});
    CHECK(project_ball_l1_selection(inside, 1).value == inside);
    CHECK_FALSE(project_ball_l1_selection(inside, 1).is_selection);
    // Any nearest point is at distance ||x||_1 - r; brute force finds that distance.
    const PrimalVector x(s, {2, 1, 0});
    const auto b = brute_force_project(x, ConvexSetDescriptor(L1Ball{1.0}, s));
    CHECK(distance(x, b) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(distance(x, sel.value) == doctest::Approx(2.0));
}

TEST_CASE("brute force leaves members in place") {
    const auto s = SpaceSpec::lp(2, 2);
    const PrimalVector x(s, {0.3, 0.4});
    CHECK(distance(brute_force_project(x, ConvexSetDescriptor(Ball{1.0}, s)), x) < 1e-9);
    CHECK_THROWS_AS(brute_force_project(PrimalVector::zero(SpaceSpec::lp(2, 8)),
                                        ConvexSetDescriptor(Ball{1.0}, SpaceSpec::lp(2, 8))),
                    DimensionTooLarge);
}

TEST_CASE("polynomial projection") {
    const auto c = SpaceSpec::c01(513);
    const auto sq = PrimalVector::sample(c, [](double t) { return t * t; });
    const auto r = project_poly(sq, 1);
    CHECK(r.error == doctest::Approx(0.125).epsilon(1e-9));
    CHECK(r.polynomial.coefficient(0) == doctest::Approx(-0.125).epsilon(1e-9));
    CHECK(r.polynomial.coefficient(1) == doctest::Approx(1.0).epsilon(1e-9));
    const auto brute = brute_force_poly(sq, 1);
    CHECK(brute.error == doctest::Approx(0.125).epsilon(1e-3));
    CHECK(brute.polynomial.coefficient(0) == doctest::Approx(-0.125).epsilon(1e-2));

    const auto shifted = project_poly(sq + PrimalVector::sample(c, [](double) { return 3.0; }), 1);
    CHECK(shifted.polynomial.coefficient(0) == doctest::Approx(2.875).epsilon(1e-9));
}

TEST_CASE("invalid descriptors are rejected") {
    CHECK_THROWS(ConvexSetDescriptor(Ball{-1.0}, SpaceSpec::lp(2, 2)));
    CHECK_THROWS(ConvexSetDescriptor(PolySubspace{1}, SpaceSpec::lp(2, 2)));
}
