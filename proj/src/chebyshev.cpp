#include "codiff/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "codiff/dense.hpp"

namespace codiff {

namespace {

using dense::Real;

Real horner(const std::vector<Real>& c, Real t) {
    Real acc = 0.0L;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * t + c[k];
    return acc;
}

// Chebyshev points of the second kind on [0,1], snapped to distinct grid nodes.
std::vector<std::size_t> initial_reference(const SpaceSpec& space, int n) {
    const std::size_t m = static_cast<std::size_t>(n) + 2;
    std::vector<std::size_t> ref(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double s = 0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(j) / (m - 1)));
        ref[j] = space.nearest_node(s);
    }
    if (std::adjacent_find(ref.begin(), ref.end(), std::greater_equal<>()) != ref.end()) {
        const std::size_t last = space.grid_size() - 1;
        for (std::size_t j = 0; j < m; ++j) ref[j] = (j * last) / (m - 1);
    }
    return ref;
}

struct LevelledSolution {
    std::vector<Real> coeffs;
    Real levelled;
};

// sum_k c_k t_j^k + (-1)^j E = f(t_j) on the reference.
LevelledSolution solve_levelled(const PrimalVector& f, const std::vector<std::size_t>& ref, int n) {
    const std::size_t m = ref.size();
    dense::Matrix a(m, m);
    std::vector<Real> b(m);
    for (std::size_t j = 0; j < m; ++j) {
        const Real t = f.space().node(ref[j]);
        Real pw = 1.0L;
        for (int k = 0; k <= n; ++k) {
            a(j, static_cast<std::size_t>(k)) = pw;
            pw *= t;
        }
        a(j, m - 1) = (j % 2 == 0) ? 1.0L : -1.0L;
        b[j] = f[ref[j]];
    }
    auto x = dense::solve(std::move(a), std::move(b));
    const Real e = x.back();
    x.pop_back();
    return {std::move(x), e};
}

// One extremum per maximal same-sign run of the residual, then trimmed to
// n+2 alternating points that keep the global maximum.
std::vector<std::size_t> multi_exchange(const std::vector<Real>& r, std::size_t target) {
    std::vector<std::size_t> ext;
    int run_sign = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const int s = r[i] > 0 ? 1 : (r[i] < 0 ? -1 : 0);
        if (s == 0 && run_sign == 0) continue;
        if (s != 0 && s != run_sign) {
            ext.push_back(i);
            run_sign = s;
        } else if (std::fabs(r[i]) > std::fabs(r[ext.back()])) {
            ext.back() = i;
        }
    }
    const auto mag = [&](std::size_t k) { return std::fabs(r[ext[k]]); };
    while (ext.size() > target) {
        if (ext.size() == target + 1) {
            if (mag(0) < mag(ext.size() - 1)) ext.erase(ext.begin());
            else ext.pop_back();
            continue;
        }
        std::size_t k = 0;
        for (std::size_t i = 1; i < ext.size(); ++i) {
            if (mag(i) < mag(k)) k = i;
        }
        if (k == 0 || k + 1 == ext.size()) {
            ext.erase(ext.begin() + static_cast<std::ptrdiff_t>(k));
        } else {
            const std::size_t nb = mag(k - 1) < mag(k + 1) ? k - 1 : k + 1;
            const std::size_t lo = std::min(k, nb);
            ext.erase(ext.begin() + static_cast<std::ptrdiff_t>(lo),
                      ext.begin() + static_cast<std::ptrdiff_t>(lo) + 2);
        }
    }
    return ext;
}

// Single-point exchange: swap the global argmax into the reference keeping sign alternation.
std::vector<std::size_t> single_exchange(std::vector<std::size_t> ref, const std::vector<Real>& r,
                                         std::size_t argmax) {
    const auto sgn = [&](std::size_t i) { return r[i] >= 0 ? 1 : -1; };
    if (std::find(ref.begin(), ref.end(), argmax) != ref.end()) return ref;
    const auto pos = std::lower_bound(ref.begin(), ref.end(), argmax) - ref.begin();
    const auto m = static_cast<std::ptrdiff_t>(ref.size());
    if (pos == 0) {
        if (sgn(ref[0]) == sgn(argmax)) ref[0] = argmax;
        else { ref.insert(ref.begin(), argmax); ref.pop_back(); }
    } else if (pos == m) {
        if (sgn(ref[m - 1]) == sgn(argmax)) ref[m - 1] = argmax;
        else { ref.push_back(argmax); ref.erase(ref.begin()); }
    } else {
        if (sgn(ref[pos - 1]) == sgn(argmax)) ref[pos - 1] = argmax;
        else ref[pos] = argmax;
    }
    return ref;
}

}  // namespace

RemezResult remez(const PrimalVector& f, int n, const RemezOptions& options) {
    const SpaceSpec& space = f.space();
    if (space.kind() != SpaceKind::C01) throw std::invalid_argument("remez: C[0,1] space required");
    if (n < 0) throw std::invalid_argument("remez: negative degree");
    if (static_cast<std::size_t>(n) + 2 > space.grid_size()) {
        throw std::invalid_argument("remez: degree too large for the grid");
    }

    const std::size_t grid = space.grid_size();
    const double scale = 1.0 + norm(f);
    std::vector<std::size_t> ref = initial_reference(space, n);
    std::vector<RemezIterate> trace;
    std::vector<Real> residual(grid);

    for (int it = 1; it <= options.max_iterations; ++it) {
        const LevelledSolution sol = solve_levelled(f, ref, n);
        Real max_res = 0.0L;
        std::size_t argmax = 0;
        for (std::size_t i = 0; i < grid; ++i) {
            residual[i] = static_cast<Real>(f[i]) - horner(sol.coeffs, space.node(i));
            if (std::fabs(residual[i]) > max_res) {
                max_res = std::fabs(residual[i]);
                argmax = i;
            }
        }
        const double levelled = static_cast<double>(std::fabs(sol.levelled));
        trace.push_back({it, levelled, static_cast<double>(max_res)});

        std::vector<double> coeffs(sol.coeffs.begin(), sol.coeffs.end());
        const bool degenerate = max_res <= 1e-13L * scale;
        const bool converged = degenerate || static_cast<double>(max_res) - levelled <=
                                                 options.tol * static_cast<double>(max_res);
        std::vector<std::size_t> next;
        if (!converged) {
            next = multi_exchange(residual, ref.size());
            if (next.size() < ref.size()) next = single_exchange(ref, residual, argmax);
        }
        if (converged || next == ref) {
            if (!converged && static_cast<double>(max_res) - levelled > 1e-9 * scale) {
                throw RemezError("remez: exchange stalled before levelling", trace);
            }
            RemezResult out;
            out.polynomial = Polynomial(std::move(coeffs));
            out.degenerate = degenerate;
            out.iterations = it;
            out.trace = std::move(trace);
            out.reference_nodes = ref;
            for (std::size_t j = 0; j < ref.size(); ++j) {
                out.reference.push_back(space.node(ref[j]));
                if (degenerate) {
                    out.residual_signs.push_back(j % 2 == 0 ? 1 : -1);
                } else {
                    const double rj = f[ref[j]] - out.polynomial(space.node(ref[j]));
                    out.residual_signs.push_back(rj >= 0.0 ? 1 : -1);
                }
            }
            double err = 0.0;
            for (std::size_t i = 0; i < grid; ++i) {
                err = std::max(err, std::abs(f[i] - out.polynomial(space.node(i))));
            }
            out.error = degenerate ? 0.0 : err;
            return out;
        }
        ref = std::move(next);
    }
    throw RemezError("remez: no convergence within " + std::to_string(options.max_iterations) +
                         " iterations",
                     trace);
}

// ---------------------------------------------------------------------------

double an_determinant(double t, int n) {
    if (n < 1 || n > 8) throw std::invalid_argument("an_determinant: 1 <= n <= 8 required");
    // Rows t^(i j) nearly coincide as t -> 1; quad precision keeps n <= 5 at 1e-9.
    using Quad = __float128;
    const int m = n + 1;
    std::vector<std::vector<Quad>> a(m, std::vector<Quad>(m));
    for (int i = 0; i < m; ++i) {
        const Quad ti = [&] {
            Quad x = 1;
            for (int k = 0; k < i; ++k) x *= static_cast<Quad>(t);
            return x;
        }();
        Quad pw = 1;
        for (int j = 0; j < m; ++j) {
            a[i][j] = pw;
            pw *= ti;
        }
    }
    const auto qabs = [](Quad x) { return x < 0 ? -x : x; };
    Quad det = 1;
    for (int k = 0; k < m; ++k) {
        int piv = k;
        for (int i = k + 1; i < m; ++i) {
            if (qabs(a[i][k]) > qabs(a[piv][k])) piv = i;
        }
        if (a[piv][k] == 0) return 0.0;
        if (piv != k) {
            std::swap(a[piv], a[k]);
            det = -det;
        }
        det *= a[k][k];
        for (int i = k + 1; i < m; ++i) {
            const Quad f = a[i][k] / a[k][k];
            for (int j = k; j < m; ++j) a[i][j] -= f * a[k][j];
        }
    }
    return static_cast<double>(det);
}

double an_recursive(double t, int n) {
    if (n < 0) throw std::invalid_argument("an_recursive: n >= 0 required");
    Real value = 1.0L;
    const Real tt = t;
    for (int k = 1; k <= n; ++k) {
        Real factor = 1.0L;
        Real pw = 1.0L;
        for (int j = 1; j <= k; ++j) {
            pw *= tt;
            factor *= pw - 1.0L;
        }
        // t * t^2 * ... * t^(k-1)
        factor *= std::pow(tt, static_cast<Real>(k * (k - 1) / 2));
        value *= factor;
    }
    return static_cast<double>(value);
}

DeterminantReport compare_determinants(int n, std::span<const double> grid) {
    DeterminantReport rep;
    rep.n = n;
    rep.grid.assign(grid.begin(), grid.end());
    for (double t : grid) {
        const double d = an_determinant(t, n);
        const double r = an_recursive(t, n);
        rep.direct_values.push_back(d);
        rep.recursive_values.push_back(r);
        const double denom = std::max(std::abs(d), std::abs(r));
        const double rel = denom == 0.0 ? 0.0 : std::abs(d - r) / denom;
        rep.max_rel_diff = std::max(rep.max_rel_diff, rel);
    }
    return rep;
}

Polynomial coeffs_from_values(std::span<const double> values) {
    if (values.empty() || values.size() > 9) {
        throw std::invalid_argument("coeffs_from_values: between 1 and 9 values required");
    }
    const std::size_t m = values.size();
    dense::Matrix a(m, m);
    std::vector<Real> b(values.begin(), values.end());
    for (std::size_t i = 0; i < m; ++i) {
        const Real node = std::ldexp(1.0L, -static_cast<int>(i));
        Real pw = 1.0L;
        for (std::size_t j = 0; j < m; ++j) {
            a(i, j) = pw;
            pw *= node;
        }
    }
    const auto x = dense::solve(std::move(a), std::move(b));
    return Polynomial(std::vector<double>(x.begin(), x.end()));
}

namespace {
double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}
}  // namespace

double coefficient_bound(double b, int n) {
    if (!(b > 0.0)) throw std::invalid_argument("coefficient_bound: b > 0 required");
    return factorial(n) * b / std::abs(an_determinant(0.5, n));
}

double derivative_coefficient_bound(double b, int n) {
    if (!(b > 0.0)) throw std::invalid_argument("derivative_coefficient_bound: b > 0 required");
    return factorial(n) * n * n * b / std::abs(an_determinant(0.5, n));
}

// ---------------------------------------------------------------------------

ContinuityReport continuity_experiment(const PrimalVector& f, const PrimalVector& g, int n,
                                       int perturbations, const RemezOptions& options) {
    require_same_space(f.space(), g.space(), "continuity_experiment");
    if (perturbations < 4) throw std::invalid_argument("continuity_experiment: at least 4 perturbations");
    const SpaceSpec& space = f.space();
    const PrimalVector base = remez(f, n, options).polynomial.sample(space);

    ContinuityReport rep;
    for (int m = 1; m <= perturbations; ++m) {
        const PrimalVector fm = f + (1.0 / m) * g;
        const PrimalVector pm = remez(fm, n, options).polynomial.sample(space);
        rep.deviations.push_back(distance(pm, base));
    }

    double num = 0.0, den = 0.0;
    for (int m = 1; m <= perturbations; ++m) {
        num += rep.deviations[m - 1] / m;
        den += 1.0 / (static_cast<double>(m) * m);
    }
    rep.fitted_constant = num / den;

    const int tail_start = perturbations - perturbations / 4;  // 0-based index of last quarter
    rep.tail_bounded = true;
    rep.tail_monotone = true;
    for (int i = tail_start; i < perturbations; ++i) {
        const double m = i + 1;
        if (rep.deviations[i] > rep.tail_bound_factor * rep.fitted_constant / m + 1e-15) {
            rep.tail_bounded = false;
        }
        if (i > tail_start && rep.deviations[i] > rep.deviations[i - 1] + 1e-12) rep.tail_monotone = false;
    }
    rep.final_value = rep.deviations.back();
    rep.final_threshold = 1e-3 * (1.0 + norm(g));
    rep.passed = rep.tail_bounded && rep.tail_monotone && rep.final_value <= rep.final_threshold;
    return rep;
}

}  // namespace codiff
