#include "codiff/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace codiff {

namespace {

void require_finite(std::span<const double> values, const char* what) {
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument(std::string(what) + ": non-finite entry");
        }
    }
}

// (sum |v_i|^p)^(1/p), scaled by max |v_i| so large entries do not overflow.
double lp_norm(std::span<const double> values, double p) {
    double scale = 0.0;
    for (double v : values) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return 0.0;
    if (std::isinf(p)) return scale;
    double sum = 0.0;
    for (double v : values) sum += std::pow(std::abs(v) / scale, p);
    return scale * std::pow(sum, 1.0 / p);
}

// ||v|| sign(v_i) (|v_i|/||v||)^(p-1), the normalized duality map of l_p.
std::vector<double> lp_duality(std::span<const double> values, double p) {
    const double nv = lp_norm(values, p);
    std::vector<double> out(values.size(), 0.0);
    if (nv == 0.0) return out;
    if (p == 2.0) return {values.begin(), values.end()};
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double a = std::abs(values[i]);
        if (a == 0.0) continue;
        out[i] = std::copysign(nv * std::pow(a / nv, p - 1.0), values[i]);
    }
    return out;
}

}  // namespace

SpaceSpec SpaceSpec::lp(double p, std::size_t dim) {
    if (!(p > 1.0) || !std::isfinite(p)) {
        throw std::invalid_argument("Lp space requires 1 < p < infinity");
    }
    if (dim < 1) throw std::invalid_argument("Lp space requires dim >= 1");
    return SpaceSpec(SpaceKind::Lp, p, dim, 0);
}

SpaceSpec SpaceSpec::l1(std::size_t dim) {
    if (dim < 1) throw std::invalid_argument("L1 space requires dim >= 1");
    return SpaceSpec(SpaceKind::L1, 1.0, dim, 0);
}

SpaceSpec SpaceSpec::c01(std::size_t grid_size) {
    if (grid_size < 2) throw std::invalid_argument("C[0,1] grid requires at least 2 nodes");
    return SpaceSpec(SpaceKind::C01, std::numeric_limits<double>::infinity(), 0, grid_size);
}

double SpaceSpec::q() const {
    switch (kind_) {
        case SpaceKind::Lp: return p_ / (p_ - 1.0);
        case SpaceKind::L1: return std::numeric_limits<double>::infinity();
        case SpaceKind::C01: return 1.0;
    }
    return 0.0;
}

double SpaceSpec::node(std::size_t i) const {
    if (kind_ != SpaceKind::C01) throw std::logic_error("grid nodes exist only for C[0,1]");
    if (i + 1 == grid_size_) return 1.0;
    return static_cast<double>(i) / static_cast<double>(grid_size_ - 1);
}

std::size_t SpaceSpec::nearest_node(double t) const {
    if (kind_ != SpaceKind::C01) throw std::logic_error("grid nodes exist only for C[0,1]");
    const double h = static_cast<double>(grid_size_ - 1);
    const double idx = std::round(std::clamp(t, 0.0, 1.0) * h);
    return static_cast<std::size_t>(idx);
}

std::string SpaceSpec::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case SpaceKind::Lp: os << "l_" << p_ << "^" << dim_; break;
        case SpaceKind::L1: os << "l_1^" << dim_; break;
        case SpaceKind::C01: os << "C[0,1] on " << grid_size_ << " nodes"; break;
    }
    return os.str();
}

void require_same_space(const SpaceSpec& a, const SpaceSpec& b, const char* where) {
    if (!(a == b)) {
        throw SpaceMismatch(std::string(where) + ": " + a.describe() + " vs " + b.describe());
    }
}

// ---------------------------------------------------------------------------

PrimalVector::PrimalVector(SpaceSpec space, std::vector<double> values)
    : space_(space), values_(std::move(values)) {
    if (values_.size() != space_.size()) {
        throw std::invalid_argument("PrimalVector: length does not match " + space_.describe());
    }
    require_finite(values_, "PrimalVector");
}

PrimalVector PrimalVector::zero(const SpaceSpec& space) {
    return PrimalVector(space, std::vector<double>(space.size(), 0.0));
}

PrimalVector PrimalVector::basis(const SpaceSpec& space, std::size_t i, double scale) {
    std::vector<double> v(space.size(), 0.0);
    v.at(i) = scale;
    return PrimalVector(space, std::move(v));
}

PrimalVector PrimalVector::sample(const SpaceSpec& space, const std::function<double(double)>& fn) {
    if (space.kind() != SpaceKind::C01) throw std::invalid_argument("sample: C[0,1] space required");
    std::vector<double> v(space.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(space.node(i));
    return PrimalVector(space, std::move(v));
}

bool PrimalVector::is_zero() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

PrimalVector& PrimalVector::operator+=(const PrimalVector& other) {
    require_same_space(space_, other.space_, "PrimalVector +");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

PrimalVector& PrimalVector::operator-=(const PrimalVector& other) {
    require_same_space(space_, other.space_, "PrimalVector -");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

PrimalVector& PrimalVector::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

// ---------------------------------------------------------------------------

DualVector::DualVector(SpaceSpec space, std::vector<double> values)
    : space_(space), values_(std::move(values)) {
    if (space_.kind() == SpaceKind::C01) {
        throw std::invalid_argument("DualVector: C[0,1] duals are atomic measures");
    }
    if (values_.size() != space_.size()) {
        throw std::invalid_argument("DualVector: length does not match " + space_.describe());
    }
    require_finite(values_, "DualVector");
}

DualVector DualVector::atomic(SpaceSpec space, const std::vector<std::pair<double, double>>& atoms) {
    if (space.kind() != SpaceKind::C01) {
        throw std::invalid_argument("atomic measures live in the dual of C[0,1]");
    }
    DualVector out(space);
    for (const auto& [t, w] : atoms) {
        if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("atom location outside [0,1]");
        if (!std::isfinite(w)) throw std::invalid_argument("atom weight not finite");
        const std::size_t node = space.nearest_node(t);
        const double loc = space.node(node);
        out.snap_distance_ = std::max(out.snap_distance_, std::abs(loc - t));
        out.atoms_.push_back({node, loc, w});
    }
    std::sort(out.atoms_.begin(), out.atoms_.end(),
              [](const Atom& a, const Atom& b) { return a.node < b.node; });
    for (std::size_t i = 1; i < out.atoms_.size(); ++i) {
        if (out.atoms_[i].node == out.atoms_[i - 1].node) {
            throw std::invalid_argument("atomic measure: duplicate location after snapping");
        }
    }
    return out;
}

DualVector DualVector::zero(const SpaceSpec& space) {
    if (space.kind() == SpaceKind::C01) return DualVector(space);
    return DualVector(space, std::vector<double>(space.size(), 0.0));
}

DualVector DualVector::basis(const SpaceSpec& space, std::size_t i, double scale) {
    std::vector<double> v(space.size(), 0.0);
    v.at(i) = scale;
    return DualVector(space, std::move(v));
}

DualVector DualVector::dirac(const SpaceSpec& space, double t, double weight) {
    return atomic(space, {{t, weight}});
}

bool DualVector::is_zero() const {
    if (is_atomic()) {
        return std::all_of(atoms_.begin(), atoms_.end(), [](const Atom& a) { return a.weight == 0.0; });
    }
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

void DualVector::merge_atoms(const DualVector& other, double sign) {
    std::vector<Atom> merged;
    merged.reserve(atoms_.size() + other.atoms_.size());
    std::size_t i = 0, j = 0;
    while (i < atoms_.size() || j < other.atoms_.size()) {
        if (j == other.atoms_.size() || (i < atoms_.size() && atoms_[i].node < other.atoms_[j].node)) {
            merged.push_back(atoms_[i++]);
        } else if (i == atoms_.size() || other.atoms_[j].node < atoms_[i].node) {
            Atom a = other.atoms_[j++];
            a.weight *= sign;
            merged.push_back(a);
        } else {
            Atom a = atoms_[i++];
            a.weight += sign * other.atoms_[j++].weight;
            merged.push_back(a);
        }
    }
    atoms_ = std::move(merged);
    snap_distance_ = std::max(snap_distance_, other.snap_distance_);
}

DualVector& DualVector::operator+=(const DualVector& other) {
    require_same_space(space_, other.space_, "DualVector +");
    if (is_atomic()) {
        merge_atoms(other, 1.0);
    } else {
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    }
    return *this;
}

DualVector& DualVector::operator-=(const DualVector& other) {
    require_same_space(space_, other.space_, "DualVector -");
    if (is_atomic()) {
        merge_atoms(other, -1.0);
    } else {
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    }
    return *this;
}

DualVector& DualVector::operator*=(double s) {
    for (double& v : values_) v *= s;
    for (Atom& a : atoms_) a.weight *= s;
    return *this;
}

// ---------------------------------------------------------------------------

double norm(const PrimalVector& v) {
    const auto vals = v.values();
    switch (v.space().kind()) {
        case SpaceKind::Lp: return lp_norm(vals, v.space().p());
        case SpaceKind::L1: {
            double s = 0.0;
            for (double x : vals) s += std::abs(x);
            return s;
        }
        case SpaceKind::C01: {
            double m = 0.0;
            for (double x : vals) m = std::max(m, std::abs(x));
            return m;
        }
    }
    return 0.0;
}

double dual_norm(const DualVector& w) {
    switch (w.space().kind()) {
        case SpaceKind::Lp: return lp_norm(w.values(), w.space().q());
        case SpaceKind::L1: {
            double m = 0.0;
            for (double x : w.values()) m = std::max(m, std::abs(x));
            return m;
        }
        case SpaceKind::C01: {
            double s = 0.0;
            for (const Atom& a : w.atoms()) s += std::abs(a.weight);
            return s;
        }
    }
    return 0.0;
}

double pairing(const DualVector& w, const PrimalVector& v) {
    require_same_space(w.space(), v.space(), "pairing");
    double s = 0.0;
    if (w.is_atomic()) {
        for (const Atom& a : w.atoms()) s += a.weight * v[a.node];
        return s;
    }
    for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * v[i];
    return s;
}

double distance(const PrimalVector& a, const PrimalVector& b) { return norm(a - b); }

double dual_distance(const DualVector& a, const DualVector& b) { return dual_norm(a - b); }

DualVector duality_map(const PrimalVector& v) {
    if (v.space().kind() != SpaceKind::Lp) {
        throw std::invalid_argument("duality_map: Lp space required");
    }
    return DualVector(v.space(), lp_duality(v.values(), v.space().p()));
}

L1DualitySelection duality_map_l1_selection(const PrimalVector& v) {
    if (v.space().kind() != SpaceKind::L1) {
        throw std::invalid_argument("duality_map_l1_selection: L1 space required");
    }
    const double n1 = norm(v);
    std::vector<double> out(v.size(), 0.0);
    if (n1 == 0.0) return {DualVector(v.space(), std::move(out)), true};
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] > 0.0) out[i] = n1;
        else if (v[i] < 0.0) out[i] = -n1;
    }
    return {DualVector(v.space(), std::move(out)), false};
}

PrimalVector duality_map_inverse(const DualVector& w) {
    if (w.space().kind() != SpaceKind::Lp) {
        throw std::invalid_argument("duality_map_inverse: Lp space required");
    }
    return PrimalVector(w.space(), lp_duality(w.values(), w.space().q()));
}

PrimalVector as_primal(const DualVector& w) {
    if (w.is_atomic()) throw std::invalid_argument("as_primal: coordinate dual required");
    return PrimalVector(w.space(), {w.values().begin(), w.values().end()});
}

DualVector as_dual(const PrimalVector& v) {
    if (v.space().kind() == SpaceKind::C01) throw std::invalid_argument("as_dual: coordinate space required");
    return DualVector(v.space(), {v.values().begin(), v.values().end()});
}

}  // namespace codiff
