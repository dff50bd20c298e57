#include <doctest.h>

#include <cmath>
#include <random>

#include "codiff/chebyshev.hpp"

using namespace codiff;

namespace {

// Leibniz expansion over permutations, independent of elimination.
double leibniz_det(const std::vector<std::vector<double>>& a) {
    const std::size_t m = a.size();
    std::vector<std::size_t> perm(m);
    for (std::size_t i = 0; i < m; ++i) perm[i] = i;
    long double total = 0;
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = i + 1; j < m; ++j) inversions += perm[i] > perm[j];
        }
        long double term = inversions % 2 ? -1.0L : 1.0L;
        for (std::size_t i = 0; i < m; ++i) term *= a[i][perm[i]];
        total += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(total);
}

}  // namespace

TEST_CASE("A_n values") {
    CHECK(an_determinant(0.5, 2) == doctest::Approx(-0.09375).epsilon(1e-14));
    CHECK(an_recursive(0.5, 2) == doctest::Approx(-0.09375).epsilon(1e-14));
    CHECK(an_determinant(0.5, 1) == doctest::Approx(-0.5));
    for (double t : {0.1, 0.37, 0.8}) {
        CHECK(an_determinant(t, 2) == doctest::Approx(std::pow(t, 5) - 2 * std::pow(t, 4) + 2 * t * t - t));
    }
    CHECK(std::abs(an_determinant(1e-6, 3)) < 1e-6);
    CHECK(std::abs(an_determinant(1 - 1e-6, 3)) < 1e-6);
}

TEST_CASE("A_n against the Leibniz expansion") {
    for (int n = 1; n <= 4; ++n) {
        for (double t : {0.2, 0.5, 0.7}) {
            std::vector<std::vector<double>> a(n + 1, std::vector<double>(n + 1));
            for (int i = 0; i <= n; ++i) {
                for (int j = 0; j <= n; ++j) a[i][j] = std::pow(t, i * j);
            }
            const double ref = leibniz_det(a);
            CHECK(an_determinant(t, n) == doctest::Approx(ref).epsilon(1e-9));
            CHECK(an_recursive(t, n) == doctest::Approx(ref).epsilon(1e-9));
        }
    }
}

TEST_CASE("coefficients from values at 1, 1/2, ...") {
    const std::vector<double> b1{2.0, 1.5};
    const auto p = coeffs_from_values(b1);
    CHECK(p.coefficient(0) == doctest::Approx(1));
    CHECK(p.coefficient(1) == doctest::Approx(1));
    const std::vector<double> b2{1.0, 0.25, 0.0625};
    const auto q = coeffs_from_values(b2);
    CHECK(std::abs(q.coefficient(0)) < 1e-14);
    CHECK(std::abs(q.coefficient(1)) < 1e-14);
    CHECK(q.coefficient(2) == doctest::Approx(1));
}

TEST_CASE("coefficient bounds") {
    CHECK(coefficient_bound(1, 1) == doctest::Approx(2));
    CHECK(coefficient_bound(1, 2) == doctest::Approx(64.0 / 3));
    CHECK(derivative_coefficient_bound(1, 1) == doctest::Approx(2));
    CHECK(derivative_coefficient_bound(1, 2) == doctest::Approx(256.0 / 3));
    // Shifted Chebyshev T_2(2t - 1) = 8t^2 - 8t + 1 has sup norm 1 and stays inside.
    const Polynomial t2({1, -8, 8});
    CHECK(t2.sup_norm() == doctest::Approx(1));
    CHECK(t2.max_abs_coefficient() <= coefficient_bound(1, 2));
    CHECK(t2.derivative().sup_norm() <= derivative_coefficient_bound(1, 2));
}

TEST_CASE("remez on t^2 and |t - 1/2|") {
    const auto c = SpaceSpec::c01(513);
    const auto r = remez(PrimalVector::sample(c, [](double t) { return t * t; }), 1);
    CHECK(r.error == doctest::Approx(0.125).epsilon(1e-9));
    REQUIRE(r.reference.size() == 3);
    CHECK(r.reference[0] == doctest::Approx(0));
    CHECK(r.reference[1] == doctest::Approx(0.5));
    CHECK(r.reference[2] == doctest::Approx(1));
    CHECK(r.residual_signs[0] == -r.residual_signs[1]);
    CHECK(r.residual_signs[1] == -r.residual_signs[2]);

    const auto a = PrimalVector::sample(c, [](double t) { return std::abs(t - 0.5); });
    const auto r0 = remez(a, 0);
    CHECK(r0.error == doctest::Approx(0.25));
    CHECK(r0.polynomial.coefficient(0) == doctest::Approx(0.25));
}

TEST_CASE("remez reproduces polynomials") {
    const auto c = SpaceSpec::c01(257);
    const Polynomial p({0.3, -1.0, 2.0, 0.5});
    const auto r = remez(p.sample(c), 3);
    CHECK(r.error <= 1e-12);
    CHECK(distance(r.polynomial.sample(c), p.sample(c)) <= 1e-12);
}

TEST_CASE("remez error matches an exhaustive constant search") {
    // n = 0: best constant is (max + min)/2 on the grid.
    const auto c = SpaceSpec::c01(101);
    const auto f = PrimalVector::sample(c, [](double t) { return std::sin(5 * t) + t; });
    double lo = 1e300, hi = -1e300;
    for (double v : f.values()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(remez(f, 0).error == doctest::Approx((hi - lo) / 2).epsilon(1e-12));
}

TEST_CASE("continuity report") {
    const auto c = SpaceSpec::c01(257);
    const auto f = PrimalVector::sample(c, [](double t) { return t * t; });
    const auto g = PrimalVector::sample(c, [](double t) { return 0.01 * std::sin(3 * t); });
    const auto rep = continuity_experiment(f, g, 1, 16);
    REQUIRE(rep.deviations.size() == 16);
    CHECK(rep.deviations.back() < rep.deviations.front());
    CHECK(rep.tail_monotone);

    const auto zero = continuity_experiment(f, PrimalVector::zero(c), 1, 8);
    for (double d : zero.deviations) CHECK(d == 0.0);

    // g in P_n: P(f + g/m) = P(f) + g/m, so deviations are ||g||/m.
    const auto q = Polynomial({0.5, -1.0}).sample(c);
    const auto shift = continuity_experiment(f, q, 1, 8);
    for (std::size_t m = 1; m <= 8; ++m) {
        CHECK(shift.deviations[m - 1] == doctest::Approx(norm(q) / m).epsilon(1e-8));
    }
}
