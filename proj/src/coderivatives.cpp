#include "codiff/coderivatives.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace codiff {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_coordinates(const DualVector& w, const char* where) {
    if (w.is_atomic()) throw SpaceMismatch(std::string(where) + ": coordinate dual required");
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

std::string format_values(std::span<const double> v) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ")";
    return os.str();
}

std::string format_dual(const DualVector& w) {
    if (!w.is_atomic()) return format_values(w.values());
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (const Atom& a : w.atoms()) {
        os << (first ? "" : ",") << "(" << a.location << "," << a.weight << ")";
        first = false;
    }
    os << "}";
    return os.str();
}

std::string format_index_set(const IndexSet& m) {
    std::ostringstream os;
    os << "{";
    const auto ob = m.one_based();
    for (std::size_t i = 0; i < ob.size(); ++i) os << (i ? "," : "") << ob[i];
    os << "}";
    return os.str();
}

}  // namespace

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::member: return "member";
        case Verdict::non_member: return "non_member";
        case Verdict::indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

// ---------------------------------------------------------------------------

IndexSet::IndexSet(std::vector<std::size_t> members, std::size_t universe)
    : members_(std::move(members)), universe_(universe) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    if (!members_.empty() && members_.back() >= universe_) {
        throw std::invalid_argument("IndexSet: index outside the truncation");
    }
}

IndexSet IndexSet::from_one_based(const std::vector<std::size_t>& members, std::size_t universe) {
    std::vector<std::size_t> zero_based;
    for (std::size_t i : members) {
        if (i == 0) throw std::invalid_argument("IndexSet: 1-based indices start at 1");
        zero_based.push_back(i - 1);
    }
    return IndexSet(std::move(zero_based), universe);
}

std::vector<std::size_t> IndexSet::one_based() const {
    std::vector<std::size_t> out;
    for (std::size_t i : members_) out.push_back(i + 1);
    return out;
}

bool IndexSet::contains(std::size_t i) const {
    return std::binary_search(members_.begin(), members_.end(), i);
}

IndexSet IndexSet::complement() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < universe_; ++i) {
        if (!contains(i)) out.push_back(i);
    }
    return IndexSet(std::move(out), universe_);
}

// ---------------------------------------------------------------------------

MapDescriptor::MapDescriptor(Kind kind, SpaceSpec space) : kind_(std::move(kind)), space_(space) {
    std::visit(overloaded{
                   [&](const Affine& a) {
                       require_same_space(space_, a.x0.space(), "MapDescriptor(Affine)");
                       if (!std::isfinite(a.lambda)) throw std::invalid_argument("Affine: finite lambda required");
                   },
                   [&](const BallProj& b) {
                       if (space_.kind() != SpaceKind::Lp) throw SpaceMismatch("BallProj requires an Lp space");
                       if (!(b.r > 0.0)) throw std::invalid_argument("BallProj: r > 0 required");
                   },
                   [&](const ConeProj&) {
                       if (space_.kind() != SpaceKind::Lp) throw SpaceMismatch("ConeProj requires an Lp space");
                   },
                   [&](const L1BallProj& b) {
                       if (space_.kind() != SpaceKind::L1) throw SpaceMismatch("L1BallProj requires an L1 space");
                       if (!(b.r > 0.0)) throw std::invalid_argument("L1BallProj: r > 0 required");
                   },
                   [&](const PolyProj& p) {
                       if (space_.kind() != SpaceKind::C01) throw SpaceMismatch("PolyProj requires a C[0,1] space");
                       if (p.n < 0 || p.n > 8) throw std::invalid_argument("PolyProj: 0 <= n <= 8 required");
                   },
               },
               kind_);
}

std::string MapDescriptor::name() const {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const Affine& a) { os << "affine(lambda=" << a.lambda << ")"; },
                   [&](const BallProj& b) { os << "ball_projection(r=" << b.r << ")"; },
                   [&](const ConeProj&) { os << "cone_projection"; },
                   [&](const L1BallProj& b) { os << "l1_ball_projection(r=" << b.r << ")"; },
                   [&](const PolyProj& p) { os << "poly_projection(n=" << p.n << ")"; },
               },
               kind_);
    return os.str();
}

PrimalVector MapDescriptor::evaluate(const PrimalVector& u) const {
    require_same_space(space_, u.space(), "MapDescriptor::evaluate");
    return std::visit(overloaded{
                          [&](const Affine& a) { return a.x0 + a.lambda * u; },
                          [&](const BallProj& b) { return project_ball_lp(u, b.r); },
                          [&](const ConeProj&) { return project_positive_cone(u); },
                          [&](const L1BallProj& b) { return project_ball_l1_selection(u, b.r).value; },
                          [&](const PolyProj& p) { return project_poly(u, p.n).polynomial.sample(space_); },
                      },
                      kind_);
}

bool MapDescriptor::in_graph(const PrimalVector& x, const PrimalVector& y, double tol) const {
    require_same_space(space_, y.space(), "MapDescriptor::in_graph");
    const double scale = 1.0 + norm(x);
    if (const auto* b = std::get_if<L1BallProj>(&kind_)) {
        const double dist_to_ball = std::max(norm(x) - b->r, 0.0);
        return norm(y) <= b->r + tol * scale && distance(x, y) <= dist_to_ball + tol * scale;
    }
    return distance(evaluate(x), y) <= tol * scale;
}

// ---------------------------------------------------------------------------

std::string CoderivativeSet::describe() const {
    return std::visit(overloaded{
                          [](const EmptySet&) { return std::string("empty"); },
                          [](const Singleton& s) { return "singleton" + format_dual(s.w); },
                          [](const OrderInterval& o) {
                              return "order_interval[" + format_dual(o.lo) + "," + format_dual(o.hi) + "]";
                          },
                          [](const ConeSlice& c) {
                              return "cone_slice(M=" + format_index_set(c.m) + ",y=" + format_dual(c.y) + ")";
                          },
                          [](const WholeDual&) { return std::string("whole_dual"); },
                          [](const PositiveConeDual& p) {
                              return "positive_cone_dual" + format_index_set(p.constrained);
                          },
                          [](const OracleOnly& o) { return "oracle_only(" + o.reason + ")"; },
                      },
                      shape_);
}

Verdict CoderivativeSet::membership(const DualVector& z, double tol) const {
    const auto yes = [](bool b) { return b ? Verdict::member : Verdict::non_member; };
    return std::visit(
        overloaded{
            [&](const EmptySet&) { return Verdict::non_member; },
            [&](const Singleton& s) {
                require_same_space(s.w.space(), z.space(), "CoderivativeSet::membership");
                return yes(dual_distance(s.w, z) <= tol * (1.0 + dual_norm(s.w)));
            },
            [&](const OrderInterval& o) {
                require_same_space(o.hi.space(), z.space(), "CoderivativeSet::membership");
                require_coordinates(z, "OrderInterval membership");
                const double slack = tol * (1.0 + max_abs(o.hi.values()) + max_abs(o.lo.values()));
                for (std::size_t i = 0; i < z.size(); ++i) {
                    if (z[i] < o.lo[i] - slack || z[i] > o.hi[i] + slack) return Verdict::non_member;
                }
                return Verdict::member;
            },
            [&](const ConeSlice& c) {
                require_same_space(c.y.space(), z.space(), "CoderivativeSet::membership");
                require_coordinates(z, "ConeSlice membership");
                const double slack = tol * (1.0 + max_abs(c.y.values()));
                for (std::size_t i = 0; i < z.size(); ++i) {
                    if (c.m.contains(i)) {
                        if (std::abs(z[i] - c.y[i]) > slack) return Verdict::non_member;
                    } else if (z[i] < -slack || z[i] > c.y[i] + slack) {
                        return Verdict::non_member;
                    }
                }
                return Verdict::member;
            },
            [&](const WholeDual&) { return Verdict::member; },
            [&](const PositiveConeDual& p) {
                require_coordinates(z, "PositiveConeDual membership");
                const double slack = tol * (1.0 + max_abs(z.values()));
                for (std::size_t i : p.constrained.members()) {
                    if (z[i] < -slack) return Verdict::non_member;
                }
                return Verdict::member;
            },
            [&](const OracleOnly& o) {
                for (const DualVector& w : o.known_non_members) {
                    if (w.space() == z.space() && dual_distance(w, z) <= tol * (1.0 + dual_norm(w))) {
                        return Verdict::non_member;
                    }
                }
                return Verdict::indeterminate;
            },
        },
        shape_);
}

// ---------------------------------------------------------------------------

CoderivativeSet coderiv_affine(const Affine& map, const DualVector& w) {
    require_same_space(map.x0.space(), w.space(), "coderiv_affine");
    return Singleton{map.lambda * w};
}

CoderivativeSet coderiv_ball_lp(const PrimalVector& x, double r, const DualVector& w) {
    if (x.space().kind() != SpaceKind::Lp) throw SpaceMismatch("coderiv_ball_lp: Lp space required");
    require_same_space(x.space(), w.space(), "coderiv_ball_lp");
    if (!(r > 0.0)) throw std::invalid_argument("coderiv_ball_lp: r > 0 required");
    const double nx = norm(x);
    if (nx == r) throw UncoveredCase("coderiv_ball_lp: boundary point ||x|| = r has no closed form");
    if (nx < r) return Singleton{w};
    const DualVector jx = duality_map(x);
    const double wx = pairing(w, x);
    return Singleton{(r / nx) * (w - (wx / (nx * nx)) * jx)};
}

bool in_z_m(const PrimalVector& x, const IndexSet& m) {
    if (m.universe() != x.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (m.contains(i) ? !(x[i] > 1e-12) : x[i] != 0.0) return false;
    }
    return true;
}

CoderivativeSet coderiv_cone_l2(const PrimalVector& xbar, const IndexSet& m, const DualVector& y) {
    if (!xbar.space().is_hilbert()) throw SpaceMismatch("coderiv_cone_l2: l_2 space required");
    require_same_space(xbar.space(), y.space(), "coderiv_cone_l2");
    if (!in_z_m(xbar, m)) throw std::invalid_argument("coderiv_cone_l2: xbar must be positive exactly on M");
    if (y.is_zero()) return Singleton{y};
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!m.contains(i) && y[i] < 0.0) {
            return OracleOnly{"y has a negative coordinate off M", {y}};
        }
    }
    // Also covers y on the boundary of K_{M-bar}: the zero coordinates pin z_i = 0.
    return ConeSlice{m, y};
}

bool coderiv_cone_lp_theta_membership(const PrimalVector& f, const DualVector& phi) {
    if (f.space().kind() != SpaceKind::Lp) throw SpaceMismatch("coderiv_cone_lp_theta_membership: Lp space required");
    require_same_space(f.space(), phi.space(), "coderiv_cone_lp_theta_membership");
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (phi[i] != 0.0 && f[i] > 0.0) return false;
        if (phi[i] < 0.0 && f[i] == 0.0) return false;
    }
    return true;
}

CoderivativeSet coderiv_cone_lp_at_origin(const DualVector& psi) {
    if (psi.space().kind() != SpaceKind::Lp) throw SpaceMismatch("coderiv_cone_lp_at_origin: Lp space required");
    for (double v : psi.values()) {
        if (v < 0.0) throw std::invalid_argument("coderiv_cone_lp_at_origin: psi must be nonnegative");
    }
    return OrderInterval{DualVector::zero(psi.space()), psi};
}

CoderivativeSet coderiv_l1ball(const PrimalVector& x, double r, const DualVector& phi) {
    if (x.space().kind() != SpaceKind::L1) throw SpaceMismatch("coderiv_l1ball: L1 space required");
    require_same_space(x.space(), phi.space(), "coderiv_l1ball");
    if (!(r > 0.0)) throw std::invalid_argument("coderiv_l1ball: r > 0 required");
    const double nx = norm(x);
    if (nx == r) throw UncoveredCase("coderiv_l1ball: boundary point ||x||_1 = r has no closed form");
    if (nx < r) return Singleton{phi};

    const bool strictly_positive =
        std::all_of(x.values().begin(), x.values().end(), [](double v) { return v > 0.0; });
    if (!strictly_positive) return OracleOnly{"exterior x with a non-positive coordinate", {}};
    if (phi.is_zero()) return Singleton{phi};
    if (phi == duality_map_l1_selection(x).value) return EmptySet{};
    return OracleOnly{"exterior point with general phi", {}};
}

}  // namespace codiff
