#pragma once

// Sampling estimator of the limsup quotient
//
//   limsup_{(u,v) -> (x,y), v in F(u)} (<x*, u - x> - <y*, v - y>) / (||u - x|| + ||v - y||)
//
// x* belongs to D*F(x,y)(y*) iff the limsup is <= 0. The estimator samples u on
// shrinking spheres around x and takes v = F(u) (the canonical selection for
// the l_1 ball), so for set-valued maps only non-membership is conclusive.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "codiff/coderivatives.hpp"
#include "codiff/spaces.hpp"

namespace codiff {

struct GraphPoint {
    PrimalVector x;
    PrimalVector y;
};

// (x, F(x)).
GraphPoint graph_point(const MapDescriptor& map, const PrimalVector& x);
// (x, y) after checking y in F(x).
GraphPoint graph_point(const MapDescriptor& map, const PrimalVector& x, const PrimalVector& y);

struct SamplingSchedule {
    double r0 = 0.5;
    int levels = 16;           // radii r_k = r0 2^-k, k = 0..levels-1
    int dirs_per_level = 64;
    std::vector<PrimalVector> extra_rays;  // rescaled to each radius
    std::uint64_t seed = 1;

    void validate() const;
};

struct ZeroDenominator : std::domain_error {
    using std::domain_error::domain_error;
};

double quotient(const GraphPoint& base, const PrimalVector& u, const PrimalVector& v, const DualVector& x_star,
                const DualVector& y_star);

// With x* = y* = c the numerator has three algebraically equal forms:
//   <c, u - x> - <c, v - y>,  <c, (u - x) - (v - y)>,  <c, (u - v) - (x - y)>.
struct NumeratorForms {
    double standard;
    double difference;
    double regrouped;
    double spread() const;
};

NumeratorForms numerator_forms(const GraphPoint& base, const PrimalVector& u, const PrimalVector& v, const DualVector& c);

struct Tolerances {
    double accept;  // 1e-3 (1 + ||y*||)
    double reject;  // 1e-2 (1 + ||y*||)
};

Tolerances verdict_tolerances(const DualVector& y_star);
Verdict classify(double limsup_value, const Tolerances& tol);

struct TraceRow {
    int level;
    double radius;
    int direction;  // indices >= dirs_per_level are extra rays
    double quotient;
};

struct LimsupEstimate {
    std::vector<double> per_level_sup;
    double extrapolated = 0.0;
    Verdict verdict = Verdict::indeterminate;
    Tolerances tolerances{};
    std::vector<TraceRow> trace;
    // Largest numerator seen; exactly 0 when every sample cancels.
    double max_abs_numerator = 0.0;
    // Largest disagreement between the three quotient forms; only when x* = y*.
    double max_form_spread = 0.0;
    bool forms_checked = false;
};

// Unit direction number `index` of the stream `seed`. Each index has its own
// generator state, so direction sets are nested in the count.
PrimalVector random_direction(const SpaceSpec& space, std::uint64_t seed, std::uint64_t index);

LimsupEstimate estimate_limsup(const MapDescriptor& map, const GraphPoint& base, const DualVector& x_star,
                               const DualVector& y_star, const SamplingSchedule& schedule);

struct RayOptions {
    double t0 = 0.0625;
    int steps = 20;      // t_k = t0 2^-k
    int max_steps = 32;  // extra halvings while the extrapolation is unsettled
};

struct RayLimit {
    double limit = 0.0;
    std::vector<double> t;
    std::vector<double> q;
};

// Quotient along u_t = x + t d/||d||, t -> 0, extrapolated by 2q(t/2) - q(t).
RayLimit directed_ray_limit(const MapDescriptor& map, const GraphPoint& base, const DualVector& x_star,
                            const DualVector& y_star, const PrimalVector& direction, const RayOptions& options = {});

// The lower bound of the l_1 ball quotient obtained by splitting the
// denominator with the triangle inequality, along u_t = x + t phi_n e_n:
//   (t phi_n^2 (1 - r/||u_t||) - <phi,x>(r/||u_t|| - r/||x||))
//   / (t|phi_n|(1 + r/||u_t||) + r||x|| |1/||u_t|| - 1/||x|||)
// n is 0-based and phi_n must be nonzero.
RayLimit l1_majorant_ray_limit(const PrimalVector& x, double r, const DualVector& phi, std::size_t n,
                               const RayOptions& options = {});

// t -> 0 limit of the expression above in closed form, rho = r/||x||:
//   |phi_n|(1 - rho) / (1 + 2 rho)                          if <phi,x> = 0,
//   (|phi_n|(1 - rho) + r|<phi,x>|/||x||^2) / (1 + 2 rho)   if x_n phi_n <phi,x> > 0.
double l1_case_limit(const PrimalVector& x, double r, const DualVector& phi, std::size_t n);

struct MembershipResult {
    Verdict verdict = Verdict::indeterminate;
    LimsupEstimate estimate;
    std::vector<double> ray_limits;
};

// estimate_limsup plus directed limits along probe rays. A ray limit is a lower
// bound for the limsup, so one at or above the reject tolerance decides non_member.
MembershipResult membership_test(const MapDescriptor& map, const GraphPoint& base, const DualVector& x_star,
                                 const DualVector& y_star, const SamplingSchedule& schedule,
                                 const std::vector<PrimalVector>& probe_rays = {});

// level,radius,direction,quotient rows with a header line.
std::string trace_csv(const LimsupEstimate& estimate);

}  // namespace codiff
