#pragma once

// Metric projections onto the four closed convex families: Lp balls, the
// positive cone, l_1 balls (canonical selection) and P_n inside C[0,1].

#include <string>
#include <variant>

#include "codiff/chebyshev.hpp"
#include "codiff/spaces.hpp"

namespace codiff {

struct Ball {
    double r;
};
struct PositiveCone {};
struct L1Ball {
    double r;
};
struct PolySubspace {
    int n;
};

class ConvexSetDescriptor {
public:
    using Shape = std::variant<Ball, PositiveCone, L1Ball, PolySubspace>;

    ConvexSetDescriptor(Shape shape, SpaceSpec space);

    const Shape& shape() const { return shape_; }
    const SpaceSpec& space() const { return space_; }
    std::string describe() const;

    // Membership with absolute slack tol.
    bool contains(const PrimalVector& x, double tol = 1e-12) const;
    PrimalVector project(const PrimalVector& x) const;

private:
    Shape shape_;
    SpaceSpec space_;
};

PrimalVector project_ball_lp(const PrimalVector& x, double r);
PrimalVector project_positive_cone(const PrimalVector& x);

struct L1ProjectionSelection {
    PrimalVector value;
    // The projection set has other members (x lies outside the ball).
    bool is_selection;
};

L1ProjectionSelection project_ball_l1_selection(const PrimalVector& x, double r);

RemezResult project_poly(const PrimalVector& f, int n, const RemezOptions& options = {});

struct DimensionTooLarge : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Grid-seeded search for a nearest point of the set, refined by zooming the
// search box around the incumbent. Independent of the closed forms; used as
// their oracle. Lp/L1 need dim <= 4; PolySubspace needs n <= 2.
PrimalVector brute_force_project(const PrimalVector& x, const ConvexSetDescriptor& set,
                                 int resolution = 200);

struct BruteForcePoly {
    Polynomial polynomial;
    double error;
};

// Minimax polynomial by box search over the values at n+1 Chebyshev nodes.
BruteForcePoly brute_force_poly(const PrimalVector& f, int n, int resolution = 24);

}  // namespace codiff
