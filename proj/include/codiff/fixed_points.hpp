#pragma once

// Fixed points y* in D*F(x,y)(y*) of Mordukhovich differential operators.
// A registry of closed-form characterizations answers whenever one
// applies; the limsup oracle is run alongside and audits every answer.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "codiff/coderivatives.hpp"
#include "codiff/limsup_oracle.hpp"

namespace codiff {

struct FixedPointQuery {
    MapDescriptor map;
    GraphPoint base;
    DualVector candidate;
};

struct OriginOnly {};

struct FixedPointSetCharacterization {
    using Shape = std::variant<WholeDual, OriginOnly, PositiveConeDual, OracleOnly>;

    Shape shape;
    std::string rule;
    // Oracle "member" verdicts are not conclusive (only the canonical selection
    // of a set-valued map is sampled).
    bool one_sided = false;

    std::string describe() const;
    Verdict membership(const DualVector& z) const;
};

FixedPointSetCharacterization characterize(const MapDescriptor& map, const GraphPoint& base);

enum class AuditMode { strict, record };

// A registry answer contradicted by a conclusive oracle verdict.
struct AuditFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FixedPointOptions {
    SamplingSchedule schedule{};
    AuditMode audit = AuditMode::strict;
};

struct FixedPointVerdict {
    Verdict verdict = Verdict::indeterminate;
    Verdict registry = Verdict::indeterminate;  // indeterminate when no rule applies
    std::string rule;
    Verdict oracle = Verdict::indeterminate;
    bool disagreement = false;
    bool audit_inconclusive = false;
    MembershipResult oracle_result;
};

// Candidate-specific rules: theta*, the cone duality-map and order-interval
// members, and measures annihilating P_n. Falls back to characterize().
Verdict registry_verdict(const FixedPointQuery& q, std::string* rule = nullptr);

// Rays along which the quotient is known to be large for non-members.
std::vector<PrimalVector> probe_rays(const FixedPointQuery& q);

FixedPointVerdict is_fixed_point(const FixedPointQuery& q, const FixedPointOptions& options = {});

struct ConvexityReport {
    int trials = 0;
    int checks = 0;
    int violations = 0;
    int inconclusive = 0;
    std::vector<std::string> notes;
};

// Convex combinations (t = 1/4, 1/2, 3/4) of random member pairs and the limit
// of the sequence b + 2^-k (a - b) must all be fixed points.
ConvexityReport convexity_closedness_probe(const MapDescriptor& map, const GraphPoint& base,
                                           const std::vector<DualVector>& members, int trials,
                                           std::uint64_t seed, const FixedPointOptions& options = {});

// n+2 atoms at Chebyshev points of the second kind on [0,1] with weights
// annihilating P_n, normalized to total variation 1 with a positive first weight.
DualVector annihilating_measure(const SpaceSpec& space, int n);

// max_k |<mu, t^k>|, k = 0..n.
double annihilation_residual(const DualVector& mu, int n);

// Limsup quotient of the polynomial projection at (f, P(f)) with x* = y* = candidate.
LimsupEstimate poly_fixed_point_quotient(const PrimalVector& f, int n, const DualVector& candidate,
                                         const SamplingSchedule& schedule);

struct ScaledDirectionReport {
    double pairing_mu_f = 0.0;
    double norm_f = 0.0;
    double norm_p = 0.0;
    double expected_limit = 0.0;  // |<mu,f>| / (||f|| + ||p||)
    double ray_limit = 0.0;
    double relative_error = 0.0;
    double gamma_residual = 0.0;
    Verdict verdict_i = Verdict::indeterminate;   // mu in D*P(f,p)(gamma)?
    bool part_ii_applies = false;                 // mu annihilates P_n
    Verdict verdict_ii = Verdict::indeterminate;  // mu a fixed point?
    bool passed = false;
};

// Quotient along g = f + lambda sign(<mu,f>) f, lambda -> 0, where P(g) is the
// matching multiple of p. Requires <mu,f> != 0 and gamma annihilating P_n.
ScaledDirectionReport scaled_direction_experiment(const PrimalVector& f, int n, const DualVector& mu,
                                              const DualVector& gamma, const FixedPointOptions& options = {});

// Report records.
nlohmann::ordered_json to_json(const PrimalVector& v);
nlohmann::ordered_json to_json(const DualVector& w);
nlohmann::ordered_json to_json(const LimsupEstimate& e, bool include_trace = false);
nlohmann::ordered_json to_json(const FixedPointVerdict& v);
nlohmann::ordered_json to_json(const FixedPointSetCharacterization& c);
nlohmann::ordered_json to_json(const ConvexityReport& r);
nlohmann::ordered_json to_json(const ScaledDirectionReport& r);

}  // namespace codiff
