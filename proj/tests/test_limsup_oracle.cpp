#include <doctest.h>

#include <cmath>

#include "codiff/limsup_oracle.hpp"

using namespace codiff;

TEST_CASE("quotient of the identity vanishes") {
    const auto s = SpaceSpec::lp(3, 2);
    const MapDescriptor id(Affine{PrimalVector::zero(s), 1.0}, s);
    const auto base = graph_point(id, PrimalVector(s, {1, 2}));
    const DualVector c(s, {1, 2});
    const PrimalVector u(s, {1.1, 1.7});
    CHECK(quotient(base, u, u, c, c) == 0.0);
    CHECK_THROWS_AS(quotient(base, base.x, base.y, c, c), ZeroDenominator);
}

TEST_CASE("quotient by hand") {
    // (<x*,u-x> - <y*,v-y>) / (||u-x|| + ||v-y||) with l_2 norms.
    const auto s = SpaceSpec::lp(2, 2);
    const GraphPoint base{PrimalVector(s, {0, 0}), PrimalVector(s, {0, 0})};
    const PrimalVector u(s, {3, 4}), v(s, {0, 1});
    const DualVector xs(s, {1, 1}), ys(s, {2, 0});
    CHECK(quotient(base, u, v, xs, ys) == doctest::Approx(7.0 / 6.0));
}

TEST_CASE("three forms of the numerator agree") {
    const auto s = SpaceSpec::lp(3, 3);
    const MapDescriptor ball(BallProj{1}, s);
    const auto base = graph_point(ball, PrimalVector(s, {2, -1, 0.5}));
    const DualVector c(s, {0.3, -0.7, 1.2});
    for (int k = 0; k < 20; ++k) {
        const auto u = base.x + std::pow(0.5, k) * random_direction(s, 9, k);
        const auto f = numerator_forms(base, u, ball.evaluate(u), c);
        CHECK(f.spread() <= 1e-12);
    }
}

TEST_CASE("random directions are unit, reproducible and nested") {
    for (const auto& s : {SpaceSpec::lp(3, 4), SpaceSpec::l1(4), SpaceSpec::c01(65)}) {
        for (std::uint64_t i = 0; i < 10; ++i) {
            const auto d = random_direction(s, 3, i);
            CHECK(norm(d) == doctest::Approx(1));
            CHECK(d == random_direction(s, 3, i));
        }
        CHECK_FALSE(random_direction(s, 3, 0) == random_direction(s, 4, 0));
    }
}

TEST_CASE("estimate: identity map with x* = y*") {
    const auto s = SpaceSpec::lp(2, 2);
    const MapDescriptor id(Affine{PrimalVector(s, {1, 1}), 1.0}, s);
    const auto base = graph_point(id, PrimalVector(s, {0.3, 0.1}));
    const DualVector c(s, {1, 2});
    const auto e = estimate_limsup(id, base, c, c, {});
    CHECK(e.verdict == Verdict::member);
    CHECK(std::abs(e.extrapolated) <= 1e-6);
    CHECK(e.forms_checked);
}

TEST_CASE("estimate is deterministic and refining only adds samples") {
    const auto s = SpaceSpec::lp(3, 3);
    const MapDescriptor ball(BallProj{1}, s);
    const auto base = graph_point(ball, PrimalVector(s, {2, 0.5, -1}));
    const DualVector xs(s, {0.2, 0.1, 0.4}), ys(s, {1, 0, 0});
    SamplingSchedule a;
    a.dirs_per_level = 32;
    const auto e1 = estimate_limsup(ball, base, xs, ys, a);
    const auto e2 = estimate_limsup(ball, base, xs, ys, a);
    CHECK(e1.per_level_sup == e2.per_level_sup);
    CHECK(trace_csv(e1) == trace_csv(e2));
    SamplingSchedule b = a;
    b.dirs_per_level = 64;
    const auto e3 = estimate_limsup(ball, base, xs, ys, b);
    for (std::size_t k = 0; k < e1.per_level_sup.size(); ++k) CHECK(e3.per_level_sup[k] >= e1.per_level_sup[k]);
}

TEST_CASE("translation ray limit is half the dual distance") {
    const auto s = SpaceSpec::lp(3, 2);
    const MapDescriptor tr(Affine{PrimalVector(s, {1, -1}), 1.0}, s);
    const auto base = graph_point(tr, PrimalVector(s, {0.2, 0.4}));
    const DualVector xs(s, {1, 0.5}), ys(s, {-0.5, 1});
    const auto dir = duality_map_inverse(xs - ys);
    CHECK(directed_ray_limit(tr, base, xs, ys, dir).limit == doctest::Approx(dual_distance(xs, ys) / 2).epsilon(1e-6));
    CHECK(membership_test(tr, base, xs, ys, {}, {dir}).verdict == Verdict::non_member);
}

TEST_CASE("ball exterior closed form is accepted") {
    const auto s = SpaceSpec::lp(2, 2);
    const MapDescriptor ball(BallProj{1}, s);
    const auto base = graph_point(ball, PrimalVector(s, {2, 0}));
    const auto e = estimate_limsup(ball, base, DualVector(s, {0, 0.5}), DualVector(s, {0, 1}), {});
    CHECK(e.verdict == Verdict::member);
    const auto bad = membership_test(ball, base, DualVector(s, {0, 0.6}), DualVector(s, {0, 1}), {},
                                     {PrimalVector(s, {0, 1}), PrimalVector(s, {0, -1})});
    CHECK(bad.verdict == Verdict::non_member);
}

TEST_CASE("l1 ball exterior: exact directed limits") {
    // x = (2,0,...), r = 1. Along e_1 the selection stays at (1,0,...), so the
    // quotient is t/t = 1. Along e_2 the selection moves by (-t/(2+t), t/(2+t)).
    const auto s = SpaceSpec::l1(8);
    const PrimalVector x = PrimalVector::basis(s, 0, 2.0);
    const MapDescriptor map(L1BallProj{1}, s);
    const auto base = graph_point(map, x);
    const auto e1 = DualVector::basis(s, 0), e2 = DualVector::basis(s, 1);
    CHECK(directed_ray_limit(map, base, e1, e1, PrimalVector::basis(s, 0)).limit == doctest::Approx(1.0));
    CHECK(directed_ray_limit(map, base, -e1, -e1, PrimalVector::basis(s, 0, -1)).limit == doctest::Approx(1.0));
    // (t - t/2) / (t + 2 t/2) = 1/4
    CHECK(directed_ray_limit(map, base, e2, e2, PrimalVector::basis(s, 1)).limit == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("l1 split-denominator limits: closed form versus the ray") {
    const auto s = SpaceSpec::l1(8);
    const PrimalVector x = PrimalVector::basis(s, 0, 2.0);
    CHECK(l1_case_limit(x, 1, DualVector::basis(s, 1), 1) == doctest::Approx(0.25));
    CHECK(l1_case_limit(x, 1, DualVector::basis(s, 0), 0) == doctest::Approx(0.5));
    CHECK(l1_case_limit(x, 1, DualVector::basis(s, 0, -1), 0) == doctest::Approx(0.5));
    CHECK(l1_majorant_ray_limit(x, 1, DualVector::basis(s, 0), 0).limit == doctest::Approx(0.5).epsilon(1e-6));

    const auto s4 = SpaceSpec::l1(4);
    const std::vector<std::vector<double>> xs{{2, 1, 0, 0}, {-3, 0.5, 0, 1}, {1.5, -1, 0.5, 0}};
    for (const auto& xv : xs) {
        const PrimalVector xx(s4, xv);
        for (std::size_t n = 0; n < 4; ++n) {
            DualVector phi = DualVector::basis(s4, n, 1.0);
            if (xv[n] != 0.0 && xv[n] < 0) phi = -phi;
            const double closed = l1_case_limit(xx, 0.8, phi, n);
            const double ray = l1_majorant_ray_limit(xx, 0.8, phi, n).limit;
            CHECK(ray == doctest::Approx(closed).epsilon(1e-6));
        }
    }
}

TEST_CASE("trace csv") {
    const auto s = SpaceSpec::lp(2, 2);
    const MapDescriptor id(Affine{PrimalVector::zero(s), 1.0}, s);
    SamplingSchedule sch;
    sch.levels = 4;
    sch.dirs_per_level = 16;
    const auto e = estimate_limsup(id, graph_point(id, PrimalVector(s, {1, 0})), DualVector(s, {1, 0}),
                                   DualVector(s, {1, 0}), sch);
    const auto csv = trace_csv(e);
    CHECK(csv.rfind("level,radius,direction,quotient\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 4 * 16);
}

TEST_CASE("schedule validation") {
    SamplingSchedule s;
    s.levels = 0;
    CHECK_THROWS(s.validate());
    SamplingSchedule t;
    t.r0 = -1;
    CHECK_THROWS(t.validate());
}
