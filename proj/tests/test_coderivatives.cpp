#include <doctest.h>

#include "codiff/coderivatives.hpp"
#include "codiff/limsup_oracle.hpp"

using namespace codiff;

TEST_CASE("affine coderivatives") {
    const auto s = SpaceSpec::lp(2, 2);
    const DualVector w(s, {1, 2});
    const auto id = coderiv_affine(Affine{PrimalVector(s, {4, 5}), 1.0}, w);
    CHECK(id.membership(w) == Verdict::member);
    CHECK(coderiv_affine(Affine{PrimalVector::zero(s), 0.0}, w).membership(DualVector::zero(s)) == Verdict::member);
    const DualVector e1(s, {1, 0});
    const auto two = coderiv_affine(Affine{PrimalVector::zero(s), 2.0}, e1);
    CHECK(two.membership(DualVector(s, {2, 0})) == Verdict::member);
    CHECK(two.membership(e1) == Verdict::non_member);

    // The oracle agrees on both.
    const MapDescriptor map(Affine{PrimalVector::zero(s), 2.0}, s);
    const auto base = graph_point(map, PrimalVector(s, {0.5, -1}));
    CHECK(membership_test(map, base, DualVector(s, {2, 0}), e1, {}).verdict == Verdict::member);
    CHECK(membership_test(map, base, e1, e1, {}, {PrimalVector(s, {-1, 0})}).verdict == Verdict::non_member);
}

TEST_CASE("ball coderivative") {
    const auto s = SpaceSpec::lp(2, 2);
    const DualVector w(s, {5, -1});
    CHECK(coderiv_ball_lp(PrimalVector(s, {0.1, 0.2}), 1, w).membership(w) == Verdict::member);

    const PrimalVector x(s, {2, 0});
    const auto perp = coderiv_ball_lp(x, 1, DualVector(s, {0, 1}));
    CHECK(perp.membership(DualVector(s, {0, 0.5})) == Verdict::member);
    CHECK(coderiv_ball_lp(x, 1, DualVector(s, {2, 0})).membership(DualVector::zero(s)) == Verdict::member);
    CHECK_THROWS_AS(coderiv_ball_lp(PrimalVector(s, {0.6, 0.8}), 1, w), UncoveredCase);

    const MapDescriptor map(BallProj{1}, s);
    const auto base = graph_point(map, x);
    CHECK(membership_test(map, base, DualVector(s, {0, 0.5}), DualVector(s, {0, 1}), {}).verdict ==
          Verdict::member);
}

TEST_CASE("ball coderivative in l_3 matches finite differences of the projection") {
    // <x*, h> = <y*, DP(x) h> for the adjoint; check on coordinate directions.
    const auto s = SpaceSpec::lp(3, 3);
    const PrimalVector x(s, {1.5, -0.7, 0.4});
    const DualVector ys(s, {0.3, 1.1, -0.6});
    const auto set = coderiv_ball_lp(x, 1, ys);
    const DualVector xs = std::get<Singleton>(set.shape()).w;
    const MapDescriptor map(BallProj{1}, s);
    const double h = 1e-6;
    for (std::size_t i = 0; i < 3; ++i) {
        const auto e = PrimalVector::basis(s, i, h);
        const auto d = (1.0 / (2 * h)) * (map.evaluate(x + e) - map.evaluate(x - e));
        CHECK(pairing(ys, d) == doctest::Approx(xs[i]).epsilon(1e-6));
    }
}

TEST_CASE("l2 cone coderivative") {
    const auto s = SpaceSpec::lp(2, 4);
    const PrimalVector xbar(s, {1, 2, 0, 0});
    const auto m = IndexSet::from_one_based({1, 2}, 4);
    CHECK(coderiv_cone_l2(xbar, m, DualVector::zero(s)).membership(DualVector::zero(s)) == Verdict::member);

    const DualVector y(s, {5, -1, 1, 0});
    const auto set = coderiv_cone_l2(xbar, m, y);
    CHECK(set.membership(y) == Verdict::member);
    CHECK(set.membership(DualVector(s, {5, -1, 0.5, 0})) == Verdict::member);
    CHECK(set.membership(DualVector(s, {5, -1, 1.5, 0})) == Verdict::non_member);

    // The boundary point y = (5,-1,1,0) admits more than y itself: z = (5,-1,0.5,0) is
    // confirmed by the oracle.
    const MapDescriptor map(ConeProj{}, s);
    const auto base = graph_point(map, xbar);
    CHECK(membership_test(map, base, DualVector(s, {5, -1, 0.5, 0}), y, {}).verdict == Verdict::member);

    const DualVector outside(s, {5, -1, -1, 0});
    const auto oo = coderiv_cone_l2(xbar, m, outside);
    CHECK_FALSE(oo.resolved());
    CHECK(oo.membership(outside) == Verdict::non_member);
}

TEST_CASE("lp cone theta* rule") {
    const auto s = SpaceSpec::lp(3, 3);
    CHECK(coderiv_cone_lp_theta_membership(PrimalVector(s, {-1, 0, -2}), DualVector(s, {0.5, 1, 0})));
    const PrimalVector f(s, {1, 0, 2});
    CHECK_FALSE(coderiv_cone_lp_theta_membership(f, duality_map(f)));
    CHECK(coderiv_cone_lp_theta_membership(f, DualVector::zero(s)));
}

TEST_CASE("lp cone theta* rule: negative phi where f < 0") {
    // P_K vanishes near f, so the quotient is identically zero whatever the sign of phi.
    const auto s = SpaceSpec::lp(3, 1);
    const PrimalVector f(s, {-1});
    const DualVector phi(s, {-1});
    CHECK(coderiv_cone_lp_theta_membership(f, phi));
    const MapDescriptor map(ConeProj{}, s);
    CHECK(membership_test(map, graph_point(map, f), DualVector::zero(s), phi, {},
                          {PrimalVector(s, {1}), PrimalVector(s, {-1})})
              .verdict == Verdict::member);
}

TEST_CASE("lp cone at the origin") {
    const auto s = SpaceSpec::lp(3, 2);
    const DualVector psi(s, {1, 2});
    const auto set = coderiv_cone_lp_at_origin(psi);
    CHECK(set.membership(DualVector(s, {0.5, 2})) == Verdict::member);
    CHECK(set.membership(DualVector(s, {1.5, 0})) == Verdict::non_member);
    CHECK(coderiv_cone_lp_at_origin(DualVector::zero(s)).membership(DualVector::zero(s)) == Verdict::member);
    CHECK_THROWS(coderiv_cone_lp_at_origin(DualVector(s, {-1, 0})));
}

TEST_CASE("l1 ball coderivative") {
    const auto s = SpaceSpec::l1(3);
    const DualVector phi(s, {1, -1, 0});
    CHECK(coderiv_l1ball(PrimalVector(s, {0.2, 0.1, 0}), 1, phi).membership(phi) == Verdict::member);
    const PrimalVector x(s, {2, 1, 0.5});
    CHECK(coderiv_l1ball(x, 1, DualVector::zero(s)).membership(DualVector::zero(s)) == Verdict::member);
    const auto empty = coderiv_l1ball(x, 1, duality_map_l1_selection(x).value);
    CHECK(std::holds_alternative<EmptySet>(empty.shape()));
    CHECK(empty.membership(DualVector::zero(s)) == Verdict::non_member);
    CHECK_THROWS_AS(coderiv_l1ball(PrimalVector(s, {0.5, 0.5, 0}), 1, phi), UncoveredCase);
}

TEST_CASE("index sets") {
    const auto m = IndexSet::from_one_based({2, 1}, 4);
    CHECK(m.members() == std::vector<std::size_t>{0, 1});
    CHECK(m.complement().one_based() == std::vector<std::size_t>{3, 4});
    CHECK_THROWS(IndexSet::from_one_based({5}, 4));
    const auto s = SpaceSpec::lp(2, 4);
    CHECK(in_z_m(PrimalVector(s, {1, 2, 0, 0}), m));
    CHECK_FALSE(in_z_m(PrimalVector(s, {1, 0, 0, 0}), m));
    CHECK_FALSE(in_z_m(PrimalVector(s, {1, 2, 0.1, 0}), m));
}
