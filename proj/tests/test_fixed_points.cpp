#include <doctest.h>

#include <cmath>

#include "codiff/fixed_points.hpp"
#include "codiff/projections.hpp"

using namespace codiff;

TEST_CASE("theta* is always a fixed point") {
    const auto s = SpaceSpec::lp(3, 3);
    const auto c = SpaceSpec::c01(129);
    const std::vector<std::pair<MapDescriptor, PrimalVector>> cases{
        {MapDescriptor(Affine{PrimalVector(s, {1, 0, 0}), 2.0}, s), PrimalVector(s, {0.5, 1, 2})},
        {MapDescriptor(BallProj{1}, s), PrimalVector(s, {3, 1, 0})},
        {MapDescriptor(ConeProj{}, s), PrimalVector(s, {-1, 0, 2})},
        {MapDescriptor(L1BallProj{1}, SpaceSpec::l1(3)), PrimalVector(SpaceSpec::l1(3), {2, 0, 1})},
        {MapDescriptor(PolyProj{1}, c), PrimalVector::sample(c, [](double t) { return std::exp(t); })},
    };
    for (const auto& [map, x] : cases) {
        const auto v = is_fixed_point({map, graph_point(map, x), DualVector::zero(map.space())});
        CHECK(v.verdict == Verdict::member);
        CHECK(v.oracle == Verdict::member);
        CHECK(v.oracle_result.estimate.max_abs_numerator == 0.0);
    }
}

TEST_CASE("ball: interior everything, exterior nothing but theta*") {
    const auto s = SpaceSpec::lp(2, 4);
    const MapDescriptor ball(BallProj{1}, s);
    const DualVector y(s, {0.3, -1, 0.2, 0.5});
    const auto in = is_fixed_point({ball, graph_point(ball, PrimalVector(s, {0.1, 0.2, 0, -0.3})), y});
    CHECK(in.verdict == Verdict::member);
    CHECK_FALSE(in.disagreement);
    const auto out = is_fixed_point({ball, graph_point(ball, PrimalVector(s, {2, 0, 1, 0})), y});
    CHECK(out.verdict == Verdict::non_member);
    CHECK(out.oracle == Verdict::non_member);
}

TEST_CASE("ball exterior: only theta* solves the fixed-point equation") {
    // y* = (r/||x||)(y* - <y*,x> x/||x||^2) in l_2 forces y* = 0 when ||x|| > r;
    // the matrix I - (r/||x||)(I - x x^T/||x||^2) is invertible.
    const auto s = SpaceSpec::lp(2, 2);
    const PrimalVector x(s, {3, 4});
    const DualVector y(s, {1, 1});
    const auto img = std::get<Singleton>(coderiv_ball_lp(x, 1, y).shape()).w;
    CHECK(dual_distance(img, y) > 0.5);
}

TEST_CASE("characterization of the l2 cone") {
    const auto s = SpaceSpec::lp(2, 4);
    const MapDescriptor cone(ConeProj{}, s);
    const auto base = graph_point(cone, PrimalVector(s, {1, 2, 0, 0}));
    const auto ch = characterize(cone, base);
    REQUIRE(std::holds_alternative<PositiveConeDual>(ch.shape));
    CHECK(std::get<PositiveConeDual>(ch.shape).constrained.one_based() == std::vector<std::size_t>{3, 4});
    CHECK(ch.membership(DualVector(s, {7, -3, 1, 0})) == Verdict::member);
    CHECK(ch.membership(DualVector(s, {7, -3, -1, 0})) == Verdict::non_member);
    CHECK(is_fixed_point({cone, base, DualVector(s, {7, -3, 1, 0})}).verdict == Verdict::member);
    CHECK(is_fixed_point({cone, base, DualVector(s, {7, -3, -1, 0})}).verdict == Verdict::non_member);
}

TEST_CASE("characterization of the other families") {
    const auto s = SpaceSpec::lp(2, 2);
    const MapDescriptor tr(Affine{PrimalVector(s, {1, 0}), 1.0}, s);
    CHECK(std::holds_alternative<WholeDual>(characterize(tr, graph_point(tr, PrimalVector(s, {0, 0}))).shape));
    const MapDescriptor aff(Affine{PrimalVector(s, {1, 0}), 2.0}, s);
    CHECK(std::holds_alternative<OriginOnly>(characterize(aff, graph_point(aff, PrimalVector(s, {0, 0}))).shape));
    const auto l1 = SpaceSpec::l1(3);
    const MapDescriptor lb(L1BallProj{1}, l1);
    const auto ch = characterize(lb, graph_point(lb, PrimalVector(l1, {2, 0, 0})));
    CHECK(std::holds_alternative<OriginOnly>(ch.shape));
    CHECK(ch.one_sided);
    const auto c = SpaceSpec::c01(65);
    const MapDescriptor pp(PolyProj{1}, c);
    CHECK(std::holds_alternative<OracleOnly>(
        characterize(pp, graph_point(pp, PrimalVector::sample(c, [](double t) { return t * t; }))).shape));
}

TEST_CASE("lp cone: J(f) and psi at the origin") {
    const auto s = SpaceSpec::lp(3, 4);
    const MapDescriptor cone(ConeProj{}, s);
    const PrimalVector f(s, {1, 0, 2, 0.5});
    CHECK(is_fixed_point({cone, graph_point(cone, f), duality_map(f)}).verdict == Verdict::member);
    const auto origin = graph_point(cone, PrimalVector::zero(s));
    CHECK(is_fixed_point({cone, origin, DualVector(s, {0, 1, 2, 0.3})}).verdict == Verdict::member);
}

TEST_CASE("strict audit accepts correct registry answers") {
    const auto s = SpaceSpec::lp(2, 2);
    const MapDescriptor ball(BallProj{1}, s);
    CHECK_NOTHROW(is_fixed_point({ball, graph_point(ball, PrimalVector(s, {3, 0})), DualVector(s, {0, 1})}));
}

TEST_CASE("convexity and closedness") {
    const auto s = SpaceSpec::lp(2, 4);
    const MapDescriptor cone(ConeProj{}, s);
    const auto base = graph_point(cone, PrimalVector(s, {1, 2, 0, 0}));
    const std::vector<DualVector> members{DualVector::zero(s), DualVector(s, {3, -1, 0, 2}),
                                          DualVector(s, {-2, 4, 1, 0})};
    FixedPointOptions o;
    o.audit = AuditMode::record;
    const auto rep = convexity_closedness_probe(cone, base, members, 10, 1, o);
    CHECK(rep.violations == 0);
    CHECK(rep.inconclusive == 0);
    CHECK(rep.checks > 10);
}

TEST_CASE("annihilating measure") {
    const auto c = SpaceSpec::c01(513);
    for (int n = 0; n <= 3; ++n) {
        const auto mu = annihilating_measure(c, n);
        CHECK(mu.atoms().size() == static_cast<std::size_t>(n + 2));
        CHECK(dual_norm(mu) == doctest::Approx(1));
        CHECK(annihilation_residual(mu, n) <= 1e-12);
        CHECK(mu.atoms()[0].weight > 0);
    }
    const auto gamma = DualVector::atomic(c, {{0, 1}, {0.5, -2}, {1, 1}});
    CHECK(annihilation_residual(gamma, 1) <= 1e-15);
    CHECK(annihilation_residual(gamma, 2) > 0.1);
}

TEST_CASE("polynomial projection: scaled direction and fixed points") {
    const auto c = SpaceSpec::c01(513);
    const auto f = PrimalVector::sample(c, [](double t) { return t * t; });
    const auto mu = DualVector::dirac(c, 1.0);
    const auto gamma = DualVector::atomic(c, {{0, 1}, {0.5, -2}, {1, 1}});
    FixedPointOptions o;
    o.audit = AuditMode::record;
    const auto rep = scaled_direction_experiment(f, 1, mu, gamma, o);
    // |<mu,f>| / (||f|| + ||p||) = 1 / (1 + 7/8)
    CHECK(rep.expected_limit == doctest::Approx(8.0 / 15));
    CHECK(rep.ray_limit == doctest::Approx(8.0 / 15).epsilon(0.02));
    CHECK(rep.verdict_i == Verdict::non_member);

    const auto rep2 = scaled_direction_experiment(f, 1, gamma, gamma, o);
    CHECK(rep2.pairing_mu_f == doctest::Approx(0.5));
    CHECK(rep2.part_ii_applies);
    CHECK(rep2.verdict_ii == Verdict::non_member);

    CHECK_THROWS(scaled_direction_experiment(f, 1, DualVector::atomic(c, {{0, 1}}), gamma, o));
    const auto zero = poly_fixed_point_quotient(f, 1, DualVector::zero(c), {});
    CHECK(zero.verdict == Verdict::member);
    CHECK(zero.extrapolated == 0.0);
}
