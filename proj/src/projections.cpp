#include "codiff/projections.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

namespace codiff {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

ConvexSetDescriptor::ConvexSetDescriptor(Shape shape, SpaceSpec space)
    : shape_(shape), space_(space) {
    std::visit(overloaded{
                   [&](const Ball& b) {
                       if (space_.kind() != SpaceKind::Lp) throw SpaceMismatch("Ball requires an Lp space");
                       if (!(b.r > 0.0)) throw std::invalid_argument("Ball: r > 0 required");
                   },
                   [&](const PositiveCone&) {
                       if (space_.kind() == SpaceKind::C01) {
                           throw SpaceMismatch("PositiveCone requires an Lp or L1 space");
                       }
                   },
                   [&](const L1Ball& b) {
                       if (space_.kind() != SpaceKind::L1) throw SpaceMismatch("L1Ball requires an L1 space");
                       if (!(b.r > 0.0)) throw std::invalid_argument("L1Ball: r > 0 required");
                   },
                   [&](const PolySubspace& s) {
                       if (space_.kind() != SpaceKind::C01) {
                           throw SpaceMismatch("PolySubspace requires a C[0,1] space");
                       }
                       if (s.n < 0) throw std::invalid_argument("PolySubspace: n >= 0 required");
                   },
               },
               shape_);
}

std::string ConvexSetDescriptor::describe() const {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const Ball& b) { os << "ball(r=" << b.r << ")"; },
                   [&](const PositiveCone&) { os << "positive_cone"; },
                   [&](const L1Ball& b) { os << "l1_ball(r=" << b.r << ")"; },
                   [&](const PolySubspace& s) { os << "poly_subspace(n=" << s.n << ")"; },
               },
               shape_);
    os << " in " << space_.describe();
    return os.str();
}

bool ConvexSetDescriptor::contains(const PrimalVector& x, double tol) const {
    require_same_space(space_, x.space(), "ConvexSetDescriptor::contains");
    return std::visit(overloaded{
                          [&](const Ball& b) { return norm(x) <= b.r + tol; },
                          [&](const PositiveCone&) {
                              return std::all_of(x.values().begin(), x.values().end(),
                                                 [&](double v) { return v >= -tol; });
                          },
                          [&](const L1Ball& b) { return norm(x) <= b.r + tol; },
                          [&](const PolySubspace& s) {
                              const auto res = remez(x, s.n);
                              return res.error <= tol * (1.0 + norm(x));
                          },
                      },
                      shape_);
}

PrimalVector ConvexSetDescriptor::project(const PrimalVector& x) const {
    require_same_space(space_, x.space(), "ConvexSetDescriptor::project");
    return std::visit(overloaded{
                          [&](const Ball& b) { return project_ball_lp(x, b.r); },
                          [&](const PositiveCone&) { return project_positive_cone(x); },
                          [&](const L1Ball& b) { return project_ball_l1_selection(x, b.r).value; },
                          [&](const PolySubspace& s) {
                              return project_poly(x, s.n).polynomial.sample(space_);
                          },
                      },
                      shape_);
}

PrimalVector project_ball_lp(const PrimalVector& x, double r) {
    if (x.space().kind() != SpaceKind::Lp) throw SpaceMismatch("project_ball_lp: Lp space required");
    if (!(r > 0.0)) throw std::invalid_argument("project_ball_lp: r > 0 required");
    const double nx = norm(x);
    if (nx <= r) return x;
    return (r / nx) * x;
}

PrimalVector project_positive_cone(const PrimalVector& x) {
    if (x.space().kind() == SpaceKind::C01) {
        throw SpaceMismatch("project_positive_cone: Lp or L1 space required");
    }
    std::vector<double> v(x.values().begin(), x.values().end());
    for (double& c : v) c = std::max(c, 0.0);
    return PrimalVector(x.space(), std::move(v));
}

L1ProjectionSelection project_ball_l1_selection(const PrimalVector& x, double r) {
    if (x.space().kind() != SpaceKind::L1) throw SpaceMismatch("project_ball_l1_selection: L1 space required");
    if (!(r > 0.0)) throw std::invalid_argument("project_ball_l1_selection: r > 0 required");
    const double nx = norm(x);
    if (nx <= r) return {x, false};
    return {(r / nx) * x, true};
}

RemezResult project_poly(const PrimalVector& f, int n, const RemezOptions& options) {
    return remez(f, n, options);
}

// ---------------------------------------------------------------------------

namespace {

struct ZoomResult {
    std::vector<double> point;
    double value;
};

// Minimizes objective over the box center +- half (per axis) by repeated grid
// scans, each time shrinking the box around the incumbent. Infeasible points
// report +inf. Starts from the best `starts` cells of the first scan.
ZoomResult zoom_search(const std::function<double(const std::vector<double>&)>& objective,
                       std::vector<double> center, double half, int points_per_axis, int starts) {
    const std::size_t d = center.size();
    const int k = std::max(points_per_axis, 3);

    const auto scan = [&](const std::vector<double>& c, double h) {
        std::vector<ZoomResult> found;
        std::vector<int> idx(d, 0);
        std::vector<double> y(d);
        const double step = 2.0 * h / (k - 1);
        while (true) {
            for (std::size_t a = 0; a < d; ++a) y[a] = c[a] - h + step * idx[a];
            const double val = objective(y);
            if (std::isfinite(val)) found.push_back({y, val});
            std::size_t a = 0;
            while (a < d && ++idx[a] == k) idx[a++] = 0;
            if (a == d) break;
        }
        std::sort(found.begin(), found.end(),
                  [](const ZoomResult& l, const ZoomResult& r) { return l.value < r.value; });
        return found;
    };

    ZoomResult best{center, objective(center)};
    const auto seeds = scan(center, half);
    const std::size_t nseeds = std::min<std::size_t>(seeds.size(), static_cast<std::size_t>(starts));
    for (std::size_t s = 0; s < nseeds; ++s) {
        ZoomResult inc = seeds[s];
        double h = 2.0 * half / (k - 1);
        for (int level = 0; level < 200 && h > 1e-10 * (1.0 + half); ++level) {
            const auto local = scan(inc.point, h);
            if (!local.empty() && local.front().value <= inc.value) inc = local.front();
            h *= 0.5;
        }
        if (inc.value < best.value || !std::isfinite(best.value)) best = inc;
    }
    return best;
}

int points_for_dim(std::size_t d, int resolution) {
    switch (d) {
        case 1: return std::max(resolution, 3);
        case 2: return std::min(std::max(resolution, 3), 41);
        case 3: return std::min(std::max(resolution, 3), 15);
        default: return std::min(std::max(resolution, 3), 9);
    }
}

}  // namespace

PrimalVector brute_force_project(const PrimalVector& x, const ConvexSetDescriptor& set, int resolution) {
    require_same_space(set.space(), x.space(), "brute_force_project");
    if (resolution < 2) throw std::invalid_argument("brute_force_project: resolution >= 2 required");
    const SpaceSpec& space = set.space();

    if (const auto* poly = std::get_if<PolySubspace>(&set.shape())) {
        if (poly->n > 2) throw DimensionTooLarge("brute_force_project: n <= 2 required for PolySubspace");
        return brute_force_poly(x, poly->n).polynomial.sample(space);
    }

    const std::size_t d = space.dim();
    if (d > 4) throw DimensionTooLarge("brute_force_project: dim <= 4 required");

    double half = 0.0;
    std::visit(overloaded{
                   [&](const Ball& b) { half = b.r; },
                   [&](const L1Ball& b) { half = b.r; },
                   [&](const PositiveCone&) {
                       for (double v : x.values()) half = std::max(half, std::abs(v));
                       half += 1.0;
                   },
                   [&](const PolySubspace&) {},
               },
               set.shape());

    // Infeasible grid points are pulled back to the boundary along the segment
    // to an interior point, which keeps the objective continuous.
    const PrimalVector inner = std::holds_alternative<PositiveCone>(set.shape())
                                   ? PrimalVector(space, std::vector<double>(d, 0.5 * half))
                                   : PrimalVector::zero(space);
    const auto retract = [&](const std::vector<double>& y) {
        PrimalVector cand(space, y);
        if (set.contains(cand, 0.0)) return cand;
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 40; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (set.contains(inner + mid * (cand - inner), 0.0)) lo = mid;
            else hi = mid;
        }
        return inner + lo * (cand - inner);
    };
    const auto objective = [&](const std::vector<double>& y) { return distance(x, retract(y)); };
    const auto res = zoom_search(objective, std::vector<double>(inner.values().begin(), inner.values().end()), half,
                                 points_for_dim(d, resolution), 3);
    return retract(res.point);
}

BruteForcePoly brute_force_poly(const PrimalVector& f, int n, int resolution) {
    const SpaceSpec& space = f.space();
    if (space.kind() != SpaceKind::C01) throw SpaceMismatch("brute_force_poly: C[0,1] space required");
    if (n < 0 || n > 2) throw DimensionTooLarge("brute_force_poly: 0 <= n <= 2 required");

    // Interpolation nodes: Chebyshev points of the first kind on [0,1].
    const std::size_t m = static_cast<std::size_t>(n) + 1;
    std::vector<double> nodes(m);
    for (std::size_t j = 0; j < m; ++j) {
        nodes[j] = 0.5 * (1.0 - std::cos(std::numbers::pi * (2.0 * j + 1.0) / (2.0 * m)));
    }
    const std::size_t grid = space.grid_size();
    std::vector<double> basis(grid * m);
    for (std::size_t i = 0; i < grid; ++i) {
        const double t = space.node(i);
        for (std::size_t j = 0; j < m; ++j) {
            double l = 1.0;
            for (std::size_t k = 0; k < m; ++k) {
                if (k != j) l *= (t - nodes[k]) / (nodes[j] - nodes[k]);
            }
            basis[i * m + j] = l;
        }
    }
    const auto sup_residual = [&](const std::vector<double>& vals) {
        double worst = 0.0;
        for (std::size_t i = 0; i < grid; ++i) {
            double p = 0.0;
            for (std::size_t j = 0; j < m; ++j) p += vals[j] * basis[i * m + j];
            worst = std::max(worst, std::abs(f[i] - p));
        }
        return worst;
    };

    // ||p|| <= 2||f|| for the best approximation, and the interpolation nodes lie in [0,1].
    const double half = 2.0 * norm(f) + 1.0;
    const auto res = zoom_search(sup_residual, std::vector<double>(m, 0.0), half,
                                 points_for_dim(m, resolution), 4);

    // Monomial coefficients of the interpolant through (nodes, res.point).
    std::vector<double> coeffs(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<double> lj{1.0};
        double denom = 1.0;
        for (std::size_t k = 0; k < m; ++k) {
            if (k == j) continue;
            std::vector<double> next(lj.size() + 1, 0.0);
            for (std::size_t a = 0; a < lj.size(); ++a) {
                next[a + 1] += lj[a];
                next[a] -= nodes[k] * lj[a];
            }
            lj = std::move(next);
            denom *= nodes[j] - nodes[k];
        }
        for (std::size_t a = 0; a < lj.size(); ++a) coeffs[a] += res.point[j] * lj[a] / denom;
    }
    return {Polynomial(std::move(coeffs)), res.value};
}

}  // namespace codiff
