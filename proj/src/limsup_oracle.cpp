#include "codiff/limsup_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace codiff {

namespace {

using Real = long double;

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// <c, a - b> in extended precision.
Real pair_diff(const DualVector& c, const PrimalVector& a, const PrimalVector& b) {
    Real s = 0.0L;
    if (c.is_atomic()) {
        for (const Atom& at : c.atoms()) {
            s += static_cast<Real>(at.weight) * (static_cast<Real>(a[at.node]) - static_cast<Real>(b[at.node]));
        }
        return s;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += static_cast<Real>(c[i]) * (static_cast<Real>(a[i]) - static_cast<Real>(b[i]));
    }
    return s;
}

template <class Term>
Real pair_terms(const DualVector& c, std::size_t size, Term term) {
    Real s = 0.0L;
    if (c.is_atomic()) {
        for (const Atom& at : c.atoms()) s += static_cast<Real>(at.weight) * term(at.node);
        return s;
    }
    for (std::size_t i = 0; i < size; ++i) s += static_cast<Real>(c[i]) * term(i);
    return s;
}

double denominator(const GraphPoint& base, const PrimalVector& u, const PrimalVector& v) {
    const double d = distance(u, base.x) + distance(v, base.y);
    if (!(d > 0.0)) throw ZeroDenominator("quotient: (u, v) coincides with the base point");
    return d;
}

RayLimit extrapolate_ray(const std::function<double(double)>& q, const RayOptions& options) {
    if (!(options.t0 > 0.0) || options.steps < 3) throw std::invalid_argument("RayOptions: t0 > 0 and steps >= 3");
    RayLimit out;
    double t = options.t0;
    const auto push = [&] {
        out.t.push_back(t);
        out.q.push_back(q(t));
        t *= 0.5;
    };
    for (int k = 0; k < options.steps; ++k) push();
    const auto richardson = [&](std::size_t k) { return 2.0 * out.q[k + 1] - out.q[k]; };
    while (true) {
        const std::size_t m = out.q.size();
        const double last = richardson(m - 2);
        const double prev = richardson(m - 3);
        out.limit = last;
        if (std::abs(last - prev) <= 1e-7 * (1.0 + std::abs(last)) ||
            static_cast<int>(m) >= options.max_steps) {
            break;
        }
        push();
    }
    return out;
}

PrimalVector unit(const PrimalVector& d) {
    const double n = norm(d);
    if (!(n > 0.0)) throw std::invalid_argument("direction must be nonzero");
    return (1.0 / n) * d;
}

}  // namespace

GraphPoint graph_point(const MapDescriptor& map, const PrimalVector& x) { return {x, map.evaluate(x)}; }

GraphPoint graph_point(const MapDescriptor& map, const PrimalVector& x, const PrimalVector& y) {
    if (!map.in_graph(x, y)) throw std::invalid_argument("graph_point: y is not in F(x)");
    return {x, y};
}

void SamplingSchedule::validate() const {
    if (!(r0 > 0.0) || !std::isfinite(r0)) throw std::invalid_argument("SamplingSchedule: r0 > 0 required");
    if (levels < 4) throw std::invalid_argument("SamplingSchedule: at least 4 levels required");
    if (dirs_per_level < 16) throw std::invalid_argument("SamplingSchedule: at least 16 directions per level required");
    for (const auto& ray : extra_rays) {
        if (ray.is_zero()) throw std::invalid_argument("SamplingSchedule: extra rays must be nonzero");
    }
}

double quotient(const GraphPoint& base, const PrimalVector& u, const PrimalVector& v, const DualVector& x_star,
                const DualVector& y_star) {
    require_same_space(base.x.space(), u.space(), "quotient");
    const double den = denominator(base, u, v);
    const Real num = pair_diff(x_star, u, base.x) - pair_diff(y_star, v, base.y);
    return static_cast<double>(num / den);
}

double NumeratorForms::spread() const {
    return std::max({standard, difference, regrouped}) - std::min({standard, difference, regrouped});
}

NumeratorForms numerator_forms(const GraphPoint& base, const PrimalVector& u, const PrimalVector& v, const DualVector& c) {
    const double den = denominator(base, u, v);
    const std::size_t n = u.size();
    const auto at = [](const PrimalVector& p, std::size_t i) { return static_cast<Real>(p[i]); };
    const Real standard = pair_diff(c, u, base.x) - pair_diff(c, v, base.y);
    const Real difference = pair_terms(c, n, [&](std::size_t i) {
        return (at(u, i) - at(base.x, i)) - (at(v, i) - at(base.y, i));
    });
    const Real regrouped = pair_terms(c, n, [&](std::size_t i) {
        return (at(u, i) - at(v, i)) - (at(base.x, i) - at(base.y, i));
    });
    return {static_cast<double>(standard / den), static_cast<double>(difference / den),
            static_cast<double>(regrouped / den)};
}

Tolerances verdict_tolerances(const DualVector& y_star) {
    const double s = 1.0 + dual_norm(y_star);
    return {1e-3 * s, 1e-2 * s};
}

Verdict classify(double value, const Tolerances& tol) {
    if (value <= tol.accept) return Verdict::member;
    if (value >= tol.reject) return Verdict::non_member;
    return Verdict::indeterminate;
}

PrimalVector random_direction(const SpaceSpec& space, std::uint64_t seed, std::uint64_t index) {
    std::mt19937_64 rng(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
    std::normal_distribution<double> gauss(0.0, 1.0);
    if (space.kind() != SpaceKind::C01) {
        std::vector<double> v(space.dim());
        for (double& c : v) c = gauss(rng);
        if (std::all_of(v.begin(), v.end(), [](double c) { return c == 0.0; })) v[0] = 1.0;
        return unit(PrimalVector(space, std::move(v)));
    }
    // Grid functions: every fourth direction is a random cubic, the rest are
    // smooth trigonometric sums with decaying amplitudes.
    if (index % 4 == 3) {
        double a[4];
        for (double& c : a) c = gauss(rng);
        return unit(PrimalVector::sample(space, [&](double t) { return a[0] + t * (a[1] + t * (a[2] + t * a[3])); }));
    }
    constexpr int kModes = 7;
    double ca[kModes], sa[kModes];
    for (int k = 0; k < kModes; ++k) {
        ca[k] = gauss(rng) / (1.0 + k);
        sa[k] = gauss(rng) / (1.0 + k);
    }
    return unit(PrimalVector::sample(space, [&](double t) {
        double s = 0.0;
        for (int k = 0; k < kModes; ++k) {
            s += ca[k] * std::cos(k * std::numbers::pi * t) + sa[k] * std::sin(k * std::numbers::pi * t);
        }
        return s;
    }));
}

LimsupEstimate estimate_limsup(const MapDescriptor& map, const GraphPoint& base, const DualVector& x_star,
                               const DualVector& y_star, const SamplingSchedule& schedule) {
    schedule.validate();
    const SpaceSpec& space = map.space();
    require_same_space(space, base.x.space(), "estimate_limsup");
    require_same_space(space, x_star.space(), "estimate_limsup");
    require_same_space(space, y_star.space(), "estimate_limsup");

    std::vector<PrimalVector> dirs;
    dirs.reserve(static_cast<std::size_t>(schedule.dirs_per_level) + schedule.extra_rays.size());
    for (int i = 0; i < schedule.dirs_per_level; ++i) {
        dirs.push_back(random_direction(space, schedule.seed, static_cast<std::uint64_t>(i)));
    }
    for (const auto& ray : schedule.extra_rays) {
        require_same_space(space, ray.space(), "estimate_limsup(extra ray)");
        dirs.push_back(unit(ray));
    }

    LimsupEstimate est;
    est.tolerances = verdict_tolerances(y_star);
    est.forms_checked = x_star == y_star;
    double radius = schedule.r0;
    for (int k = 0; k < schedule.levels; ++k, radius *= 0.5) {
        double level_sup = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < dirs.size(); ++i) {
            const PrimalVector u = base.x + radius * dirs[i];
            const PrimalVector v = map.evaluate(u);
            const double den = denominator(base, u, v);
            const Real num = pair_diff(x_star, u, base.x) - pair_diff(y_star, v, base.y);
            const double q = static_cast<double>(num / den);
            est.max_abs_numerator = std::max(est.max_abs_numerator, static_cast<double>(std::fabs(num)));
            if (est.forms_checked) {
                est.max_form_spread = std::max(est.max_form_spread, numerator_forms(base, u, v, x_star).spread());
            }
            level_sup = std::max(level_sup, q);
            est.trace.push_back({k, radius, static_cast<int>(i), q});
        }
        est.per_level_sup.push_back(level_sup);
    }
    const std::size_t m = est.per_level_sup.size();
    est.extrapolated = std::max(est.per_level_sup[m - 1], est.per_level_sup[m - 2]);
    est.verdict = classify(est.extrapolated, est.tolerances);
    return est;
}

RayLimit directed_ray_limit(const MapDescriptor& map, const GraphPoint& base, const DualVector& x_star,
                            const DualVector& y_star, const PrimalVector& direction, const RayOptions& options) {
    require_same_space(map.space(), direction.space(), "directed_ray_limit");
    const PrimalVector d = unit(direction);
    return extrapolate_ray(
        [&](double t) {
            const PrimalVector u = base.x + t * d;
            return quotient(base, u, map.evaluate(u), x_star, y_star);
        },
        options);
}

RayLimit l1_majorant_ray_limit(const PrimalVector& x, double r, const DualVector& phi, std::size_t n,
                               const RayOptions& options) {
    if (x.space().kind() != SpaceKind::L1) throw SpaceMismatch("l1_majorant_ray_limit: L1 space required");
    require_same_space(x.space(), phi.space(), "l1_majorant_ray_limit");
    if (n >= x.size() || phi[n] == 0.0) throw std::invalid_argument("l1_majorant_ray_limit: phi_n must be nonzero");
    const double nx = norm(x);
    if (!(nx > r)) throw std::invalid_argument("l1_majorant_ray_limit: x must lie outside the ball");
    const double phin = phi[n];
    const double phi_x = pairing(phi, x);
    return extrapolate_ray(
        [&](double t) {
            const PrimalVector u = x + PrimalVector::basis(x.space(), n, t * phin);
            const double nu = norm(u);
            const double num = t * phin * phin * (1.0 - r / nu) - phi_x * (r / nu - r / nx);
            const double den = t * std::abs(phin) * (1.0 + r / nu) + r * nx * std::abs(1.0 / nu - 1.0 / nx);
            return num / den;
        },
        options);
}

double l1_case_limit(const PrimalVector& x, double r, const DualVector& phi, std::size_t n) {
    if (x.space().kind() != SpaceKind::L1) throw SpaceMismatch("l1_case_limit: L1 space required");
    require_same_space(x.space(), phi.space(), "l1_case_limit");
    if (n >= x.size() || phi[n] == 0.0) throw std::invalid_argument("l1_case_limit: phi_n must be nonzero");
    const double nx = norm(x);
    const double a = std::abs(phi[n]);
    const double phi_x = pairing(phi, x);
    if (phi_x == 0.0) return a * (1.0 - r / nx) / (1.0 + 2.0 * r / nx);
    if (!(x[n] * phi[n] * phi_x > 0.0)) {
        throw std::invalid_argument("l1_case_limit: x_n phi_n must share the sign of <phi, x>");
    }
    return (a * (1.0 - r / nx) + r * std::abs(phi_x) / (nx * nx)) / (1.0 + 2.0 * r / nx);
}

MembershipResult membership_test(const MapDescriptor& map, const GraphPoint& base, const DualVector& x_star,
                                 const DualVector& y_star, const SamplingSchedule& schedule,
                                 const std::vector<PrimalVector>& probe_rays) {
    MembershipResult out;
    SamplingSchedule extended = schedule;
    for (const auto& ray : probe_rays) {
        if (!ray.is_zero()) extended.extra_rays.push_back(ray);
    }
    out.estimate = estimate_limsup(map, base, x_star, y_star, extended);
    out.verdict = out.estimate.verdict;
    for (const auto& ray : probe_rays) {
        if (ray.is_zero()) continue;
        const double lim = directed_ray_limit(map, base, x_star, y_star, ray).limit;
        out.ray_limits.push_back(lim);
        if (lim >= out.estimate.tolerances.reject) out.verdict = Verdict::non_member;
    }
    return out;
}

std::string trace_csv(const LimsupEstimate& estimate) {
    std::vector<TraceRow> rows = estimate.trace;
    std::sort(rows.begin(), rows.end(), [](const TraceRow& a, const TraceRow& b) {
        return a.level != b.level ? a.level < b.level : a.direction < b.direction;
    });
    std::ostringstream os;
    os.precision(17);
    os << "level,radius,direction,quotient\n";
    for (const auto& r : rows) os << r.level << ',' << r.radius << ',' << r.direction << ',' << r.quotient << '\n';
    return os.str();
}

}  // namespace codiff
