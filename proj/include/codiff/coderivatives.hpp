#pragma once

// Closed-form Mordukhovich coderivatives of the affine maps and the metric
// projections, returned as symbolic sets with exact membership tests.

#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "codiff/projections.hpp"
#include "codiff/spaces.hpp"

namespace codiff {

enum class Verdict { member, non_member, indeterminate };

const char* to_string(Verdict v);

// Finite index set M inside {0, ..., N-1}. Reports and configs use 1-based
// indices; the conversion happens only in from_one_based / one_based.
class IndexSet {
public:
    IndexSet(std::vector<std::size_t> members, std::size_t universe);
    static IndexSet from_one_based(const std::vector<std::size_t>& members, std::size_t universe);

    const std::vector<std::size_t>& members() const { return members_; }
    std::vector<std::size_t> one_based() const;
    std::size_t universe() const { return universe_; }
    bool contains(std::size_t i) const;
    bool empty() const { return members_.empty(); }
    IndexSet complement() const;

    bool operator==(const IndexSet&) const = default;

private:
    std::vector<std::size_t> members_;  // sorted, unique
    std::size_t universe_;
};

struct Affine {
    PrimalVector x0;
    double lambda;
};
struct BallProj {
    double r;
};
struct ConeProj {};
struct L1BallProj {
    double r;
};
struct PolyProj {
    int n;
};

class MapDescriptor {
public:
    using Kind = std::variant<Affine, BallProj, ConeProj, L1BallProj, PolyProj>;

    MapDescriptor(Kind kind, SpaceSpec space);

    const Kind& kind() const { return kind_; }
    const SpaceSpec& space() const { return space_; }
    std::string name() const;

    // F(u), or the canonical selection for the set-valued l_1 ball projection.
    PrimalVector evaluate(const PrimalVector& u) const;
    // y in F(x); for the l_1 ball any nearest point of the ball is accepted.
    bool in_graph(const PrimalVector& x, const PrimalVector& y, double tol = 1e-12) const;

private:
    Kind kind_;
    SpaceSpec space_;
};

// Thrown for base points that no closed form covers (e.g. ||x|| = r).
struct UncoveredCase : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct EmptySet {};
struct Singleton {
    DualVector w;
};
// Componentwise lo <= z <= hi.
struct OrderInterval {
    DualVector lo;
    DualVector hi;
};
// z_i = y_i on M, 0 <= z_i <= y_i off M.
struct ConeSlice {
    IndexSet m;
    DualVector y;
};
struct WholeDual {};
// z_i >= 0 for i in constrained; other coordinates free.
struct PositiveConeDual {
    IndexSet constrained;
};
// No closed form applies; only the oracle can decide. Elements of
// known_non_members are certified outside the set.
struct OracleOnly {
    std::string reason;
    std::vector<DualVector> known_non_members;
};

class CoderivativeSet {
public:
    using Shape = std::variant<EmptySet, Singleton, OrderInterval, ConeSlice, WholeDual, PositiveConeDual,
                               OracleOnly>;

    template <class T>
        requires std::is_constructible_v<Shape, T>
    CoderivativeSet(T shape) : shape_(std::move(shape)) {}

    const Shape& shape() const { return shape_; }
    std::string describe() const;
    bool resolved() const { return !std::holds_alternative<OracleOnly>(shape_); }

    // Exact for every closed form, with absolute slack tol * (1 + scale).
    Verdict membership(const DualVector& z, double tol = 1e-12) const;

private:
    Shape shape_;
};

// D*f(x)(w) = {lambda w} for f(x) = x0 + lambda x.
CoderivativeSet coderiv_affine(const Affine& map, const DualVector& w);

CoderivativeSet coderiv_ball_lp(const PrimalVector& x, double r, const DualVector& w);

// l_2 positive cone at xbar in Z_M (positive on M, zero off M).
CoderivativeSet coderiv_cone_l2(const PrimalVector& xbar, const IndexSet& m, const DualVector& y);

// theta* in D*P_K(f)(phi) for the positive cone of an Lp counting-measure
// model: phi vanishes where f > 0 and phi >= 0 where f = 0.
bool coderiv_cone_lp_theta_membership(const PrimalVector& f, const DualVector& phi);

// D*P_K(theta)(psi) = [theta*, psi] for psi >= 0.
CoderivativeSet coderiv_cone_lp_at_origin(const DualVector& psi);

CoderivativeSet coderiv_l1ball(const PrimalVector& x, double r, const DualVector& phi);

// x positive exactly on M and zero off M.
bool in_z_m(const PrimalVector& x, const IndexSet& m);

}  // namespace codiff
