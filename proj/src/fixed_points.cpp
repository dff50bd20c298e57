#include "codiff/fixed_points.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "codiff/chebyshev.hpp"

namespace codiff {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool close_dual(const DualVector& a, const DualVector& b, double tol = 1e-12) {
    return dual_distance(a, b) <= tol * (1.0 + dual_norm(a) + dual_norm(b));
}

bool nonnegative(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double c) { return c >= 0.0; });
}

// Closed-form image D*F(x,y)(c) when it is a singleton.
std::optional<DualVector> singleton_image(const MapDescriptor& map, const GraphPoint& base, const DualVector& c) {
    if (const auto* a = std::get_if<Affine>(&map.kind())) {
        return std::get<Singleton>(coderiv_affine(*a, c).shape()).w;
    }
    if (const auto* b = std::get_if<BallProj>(&map.kind())) {
        if (norm(base.x) == b->r) return std::nullopt;
        return std::get<Singleton>(coderiv_ball_lp(base.x, b->r, c).shape()).w;
    }
    return std::nullopt;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string FixedPointSetCharacterization::describe() const {
    return std::visit(overloaded{
                          [](const WholeDual&) { return std::string("whole_dual"); },
                          [](const OriginOnly&) { return std::string("origin_only"); },
                          [](const PositiveConeDual& p) { return CoderivativeSet(p).describe(); },
                          [](const OracleOnly& o) { return "oracle_only(" + o.reason + ")"; },
                      },
                      shape);
}

Verdict FixedPointSetCharacterization::membership(const DualVector& z) const {
    return std::visit(overloaded{
                          [](const WholeDual&) { return Verdict::member; },
                          [&](const OriginOnly&) {
                              return dual_norm(z) <= 1e-12 ? Verdict::member : Verdict::non_member;
                          },
                          [&](const PositiveConeDual& p) { return CoderivativeSet(p).membership(z); },
                          [](const OracleOnly&) { return Verdict::indeterminate; },
                      },
                      shape);
}

FixedPointSetCharacterization characterize(const MapDescriptor& map, const GraphPoint& base) {
    require_same_space(map.space(), base.x.space(), "characterize");
    using C = FixedPointSetCharacterization;
    return std::visit(
        overloaded{
            [&](const Affine& a) -> C {
                if (a.lambda == 1.0) return {WholeDual{}, "translation: the operator is the identity"};
                if (!a.x0.is_zero()) return {OriginOnly{}, "affine with lambda != 1"};
                return {OracleOnly{"affine with x0 = theta and lambda != 1", {}}, "none"};
            },
            [&](const BallProj& b) -> C {
                const double nx = norm(base.x);
                if (nx < b.r) return {WholeDual{}, "ball interior"};
                if (nx > b.r) return {OriginOnly{}, "ball exterior"};
                return {OracleOnly{"ball boundary", {}}, "none"};
            },
            [&](const ConeProj&) -> C {
                if (map.space().is_hilbert()) {
                    std::vector<std::size_t> m;
                    for (std::size_t i = 0; i < base.x.size(); ++i) {
                        if (base.x[i] > 1e-12) m.push_back(i);
                    }
                    const IndexSet ms(m, base.x.size());
                    if (!ms.empty() && in_z_m(base.x, ms)) {
                        return {PositiveConeDual{ms.complement()}, "l2 cone at a point of Z_M"};
                    }
                }
                return {OracleOnly{"cone base not covered by a set characterization", {}}, "none"};
            },
            [&](const L1BallProj& b) -> C {
                const double nx = norm(base.x);
                if (nx < b.r) return {WholeDual{}, "l1 ball interior"};
                if (nx > b.r) {
                    const PrimalVector sel = project_ball_l1_selection(base.x, b.r).value;
                    if (distance(sel, base.y) <= 1e-12 * (1.0 + b.r)) {
                        return {OriginOnly{}, "l1 ball exterior at the canonical selection", true};
                    }
                    return {OracleOnly{"l1 ball exterior at a non-canonical projection", {}}, "none", true};
                }
                return {OracleOnly{"l1 ball boundary", {}}, "none", true};
            },
            [&](const PolyProj&) -> C {
                return {OracleOnly{"no closed form for the polynomial projection", {}}, "none"};
            },
        },
        map.kind());
}

Verdict registry_verdict(const FixedPointQuery& q, std::string* rule) {
    const auto answer = [&](Verdict v, std::string r) {
        if (rule) *rule = std::move(r);
        return v;
    };
    require_same_space(q.map.space(), q.candidate.space(), "registry_verdict");
    if (q.candidate.is_zero()) return answer(Verdict::member, "theta* is always a fixed point");

    const auto ch = characterize(q.map, q.base);
    if (!std::holds_alternative<OracleOnly>(ch.shape)) return answer(ch.membership(q.candidate), ch.rule);

    if (std::holds_alternative<ConeProj>(q.map.kind())) {
        const PrimalVector& f = q.base.x;
        if (f.is_zero() && nonnegative(q.candidate.values())) {
            return answer(Verdict::member, "nonnegative dual vector at the origin of the cone");
        }
        if (!f.is_zero() && nonnegative(f.values()) && close_dual(q.candidate, duality_map(f))) {
            return answer(Verdict::member, "duality map of a cone point");
        }
    }
    if (const auto* pp = std::get_if<PolyProj>(&q.map.kind())) {
        const double scale = 1.0 + dual_norm(q.candidate);
        if (annihilation_residual(q.candidate, pp->n) <= 1e-10 * scale &&
            std::abs(pairing(q.candidate, q.base.x)) > 1e-12 * scale * (1.0 + norm(q.base.x))) {
            return answer(Verdict::non_member, "annihilator of P_n not vanishing on f");
        }
    }
    return answer(Verdict::indeterminate, "none");
}

std::vector<PrimalVector> probe_rays(const FixedPointQuery& q) {
    std::vector<PrimalVector> rays;
    const SpaceSpec& space = q.map.space();
    const DualVector& c = q.candidate;
    if (space.kind() == SpaceKind::C01) {
        const PrimalVector& f = q.base.x;
        if (!f.is_zero()) {
            rays.push_back(f);
            rays.push_back(-f);
        }
        rays.push_back(PrimalVector::sample(space, [](double) { return 1.0; }));
        rays.push_back(PrimalVector::sample(space, [](double t) { return t; }));
        return rays;
    }
    if (space.kind() == SpaceKind::Lp && !c.is_zero()) {
        const PrimalVector jc = duality_map_inverse(c);
        rays.push_back(jc);
        rays.push_back(-jc);
        if (const auto image = singleton_image(q.map, q.base, c)) {
            const DualVector gap = c - *image;
            if (!gap.is_zero()) {
                rays.push_back(duality_map_inverse(gap));
                rays.push_back(-duality_map_inverse(gap));
            }
        }
    }
    for (std::size_t i = 0; i < space.dim(); ++i) {
        rays.push_back(PrimalVector::basis(space, i, 1.0));
        rays.push_back(PrimalVector::basis(space, i, -1.0));
    }
    return rays;
}

FixedPointVerdict is_fixed_point(const FixedPointQuery& q, const FixedPointOptions& options) {
    FixedPointVerdict out;
    out.registry = registry_verdict(q, &out.rule);
    out.oracle_result =
        membership_test(q.map, q.base, q.candidate, q.candidate, options.schedule, probe_rays(q));
    out.oracle = out.oracle_result.verdict;
    out.verdict = out.registry != Verdict::indeterminate ? out.registry : out.oracle;

    if (out.registry == Verdict::indeterminate) return out;
    if (out.oracle == Verdict::indeterminate) {
        out.audit_inconclusive = true;
        return out;
    }
    if (out.oracle == out.registry) return out;
    const bool one_sided = characterize(q.map, q.base).one_sided;
    if (one_sided && out.registry == Verdict::non_member && out.oracle == Verdict::member) {
        out.audit_inconclusive = true;
        return out;
    }
    out.disagreement = true;
    if (options.audit == AuditMode::strict) {
        std::ostringstream os;
        os << "audit: registry rule '" << out.rule << "' says " << to_string(out.registry) << " but the oracle says "
           << to_string(out.oracle) << " (limsup estimate " << out.oracle_result.estimate.extrapolated << ") for "
           << q.map.name();
        throw AuditFailure(os.str());
    }
    return out;
}

// ---------------------------------------------------------------------------

ConvexityReport convexity_closedness_probe(const MapDescriptor& map, const GraphPoint& base,
                                           const std::vector<DualVector>& members, int trials,
                                           std::uint64_t seed, const FixedPointOptions& options) {
    if (members.empty()) throw std::invalid_argument("convexity_closedness_probe: members required");
    if (trials < 0) throw std::invalid_argument("convexity_closedness_probe: trials >= 0 required");
    FixedPointOptions record = options;
    record.audit = AuditMode::record;

    ConvexityReport rep;
    rep.trials = trials;
    const auto check = [&](const DualVector& z, const std::string& what) {
        const auto v = is_fixed_point({map, base, z}, record);
        ++rep.checks;
        if (v.verdict == Verdict::non_member || v.disagreement) {
            ++rep.violations;
            rep.notes.push_back(what + ": " + to_string(v.verdict));
        } else if (v.verdict == Verdict::indeterminate) {
            ++rep.inconclusive;
        }
    };
    for (std::size_t i = 0; i < members.size(); ++i) check(members[i], "member " + std::to_string(i));

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
    for (int trial = 0; trial < trials; ++trial) {
        const DualVector& a = members[pick(rng)];
        const DualVector& b = members[pick(rng)];
        for (double t : {0.25, 0.5, 0.75}) {
            check((1.0 - t) * a + t * b, "trial " + std::to_string(trial) + " combination");
        }
        // b + 2^-k (a - b) -> b
        double s = 1.0;
        for (int k = 1; k <= 3; ++k) {
            s *= 0.5;
            check(b + s * (a - b), "trial " + std::to_string(trial) + " sequence");
        }
        check(b, "trial " + std::to_string(trial) + " limit");
    }
    return rep;
}

// ---------------------------------------------------------------------------

DualVector annihilating_measure(const SpaceSpec& space, int n) {
    if (space.kind() != SpaceKind::C01) throw SpaceMismatch("annihilating_measure: C[0,1] space required");
    if (n < 0) throw std::invalid_argument("annihilating_measure: n >= 0 required");
    const std::size_t m = static_cast<std::size_t>(n) + 2;
    std::vector<double> loc(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double t = 0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(j) / (m - 1)));
        loc[j] = space.node(space.nearest_node(t));
    }
    for (std::size_t j = 1; j < m; ++j) {
        if (!(loc[j] > loc[j - 1])) throw std::invalid_argument("annihilating_measure: grid too coarse for n");
    }
    // Divided-difference weights vanish on every polynomial of degree <= n.
    std::vector<long double> w(m);
    long double tv = 0.0L;
    for (std::size_t j = 0; j < m; ++j) {
        long double prod = 1.0L;
        for (std::size_t i = 0; i < m; ++i) {
            if (i != j) prod *= static_cast<long double>(loc[j]) - loc[i];
        }
        w[j] = 1.0L / prod;
        tv += std::fabs(w[j]);
    }
    const long double scale = (w[0] > 0 ? 1.0L : -1.0L) / tv;
    std::vector<std::pair<double, double>> atoms;
    for (std::size_t j = 0; j < m; ++j) atoms.emplace_back(loc[j], static_cast<double>(w[j] * scale));
    return DualVector::atomic(space, atoms);
}

double annihilation_residual(const DualVector& mu, int n) {
    if (!mu.is_atomic()) throw SpaceMismatch("annihilation_residual: atomic measure required");
    double worst = 0.0;
    for (int k = 0; k <= n; ++k) {
        long double s = 0.0L;
        for (const Atom& a : mu.atoms()) s += a.weight * std::pow(static_cast<long double>(a.location), k);
        worst = std::max(worst, static_cast<double>(std::fabs(s)));
    }
    return worst;
}

LimsupEstimate poly_fixed_point_quotient(const PrimalVector& f, int n, const DualVector& candidate,
                                         const SamplingSchedule& schedule) {
    const MapDescriptor map(PolyProj{n}, f.space());
    const GraphPoint base = graph_point(map, f);
    SamplingSchedule s = schedule;
    for (auto& ray : probe_rays({map, base, candidate})) s.extra_rays.push_back(std::move(ray));
    return estimate_limsup(map, base, candidate, candidate, s);
}

ScaledDirectionReport scaled_direction_experiment(const PrimalVector& f, int n, const DualVector& mu,
                                              const DualVector& gamma, const FixedPointOptions& options) {
    ScaledDirectionReport rep;
    rep.pairing_mu_f = pairing(mu, f);
    if (std::abs(rep.pairing_mu_f) <= 1e-12 * (1.0 + dual_norm(mu) * norm(f))) {
        throw std::invalid_argument("scaled_direction_experiment: <mu, f> must be nonzero");
    }
    rep.gamma_residual = annihilation_residual(gamma, n);
    if (rep.gamma_residual > 1e-10 * (1.0 + dual_norm(gamma))) {
        throw std::invalid_argument("scaled_direction_experiment: gamma must annihilate P_n");
    }
    const MapDescriptor map(PolyProj{n}, f.space());
    const GraphPoint base = graph_point(map, f);
    rep.norm_f = norm(f);
    rep.norm_p = norm(base.y);
    rep.expected_limit = std::abs(rep.pairing_mu_f) / (rep.norm_f + rep.norm_p);

    const PrimalVector dir = rep.pairing_mu_f > 0 ? f : -f;
    rep.ray_limit = directed_ray_limit(map, base, mu, gamma, dir).limit;
    rep.relative_error = std::abs(rep.ray_limit - rep.expected_limit) / rep.expected_limit;
    rep.verdict_i = membership_test(map, base, mu, gamma, options.schedule, {dir}).verdict;

    rep.part_ii_applies = annihilation_residual(mu, n) <= 1e-10 * (1.0 + dual_norm(mu));
    if (rep.part_ii_applies) rep.verdict_ii = is_fixed_point({map, base, mu}, options).verdict;

    rep.passed = rep.relative_error <= 0.02 && rep.verdict_i == Verdict::non_member &&
                 (!rep.part_ii_applies || rep.verdict_ii == Verdict::non_member);
    return rep;
}

// ---------------------------------------------------------------------------

nlohmann::ordered_json to_json(const PrimalVector& v) {
    nlohmann::ordered_json j;
    j["space"] = v.space().describe();
    j["values"] = std::vector<double>(v.values().begin(), v.values().end());
    return j;
}

nlohmann::ordered_json to_json(const DualVector& w) {
    nlohmann::ordered_json j;
    j["space"] = w.space().describe();
    if (w.is_atomic()) {
        auto atoms = nlohmann::ordered_json::array();
        for (const Atom& a : w.atoms()) atoms.push_back({a.location, a.weight});
        j["atoms"] = atoms;
    } else {
        j["values"] = std::vector<double>(w.values().begin(), w.values().end());
    }
    return j;
}

nlohmann::ordered_json to_json(const LimsupEstimate& e, bool include_trace) {
    nlohmann::ordered_json j;
    j["per_level_sup"] = e.per_level_sup;
    j["extrapolated"] = e.extrapolated;
    j["verdict"] = to_string(e.verdict);
    j["tol_accept"] = e.tolerances.accept;
    j["tol_reject"] = e.tolerances.reject;
    j["max_abs_numerator"] = e.max_abs_numerator;
    if (e.forms_checked) j["max_form_spread"] = e.max_form_spread;
    if (include_trace) {
        auto rows = nlohmann::ordered_json::array();
        for (const auto& r : e.trace) rows.push_back({r.level, r.radius, r.direction, r.quotient});
        j["trace"] = rows;
    }
    return j;
}

nlohmann::ordered_json to_json(const FixedPointVerdict& v) {
    nlohmann::ordered_json j;
    j["verdict"] = to_string(v.verdict);
    j["registry"] = to_string(v.registry);
    j["rule"] = v.rule;
    j["oracle"] = to_string(v.oracle);
    j["disagreement"] = v.disagreement;
    j["audit_inconclusive"] = v.audit_inconclusive;
    j["limsup"] = v.oracle_result.estimate.extrapolated;
    j["ray_limits"] = v.oracle_result.ray_limits;
    return j;
}

nlohmann::ordered_json to_json(const FixedPointSetCharacterization& c) {
    nlohmann::ordered_json j;
    j["characterization"] = c.describe();
    j["rule"] = c.rule;
    j["one_sided"] = c.one_sided;
    return j;
}

nlohmann::ordered_json to_json(const ConvexityReport& r) {
    nlohmann::ordered_json j;
    j["trials"] = r.trials;
    j["checks"] = r.checks;
    j["violations"] = r.violations;
    j["inconclusive"] = r.inconclusive;
    j["notes"] = r.notes;
    return j;
}

nlohmann::ordered_json to_json(const ScaledDirectionReport& r) {
    nlohmann::ordered_json j;
    j["pairing_mu_f"] = r.pairing_mu_f;
    j["norm_f"] = r.norm_f;
    j["norm_p"] = r.norm_p;
    j["expected_limit"] = r.expected_limit;
    j["ray_limit"] = r.ray_limit;
    j["relative_error"] = r.relative_error;
    j["gamma_residual"] = r.gamma_residual;
    j["verdict_i"] = to_string(r.verdict_i);
    j["part_ii_applies"] = r.part_ii_applies;
    j["verdict_ii"] = to_string(r.verdict_ii);
    j["passed"] = r.passed;
    return j;
}

}  // namespace codiff
