#pragma once

// Finite models of the Banach spaces used throughout the toolkit:
//   Lp  - l_p truncated to N coordinates, dual l_q with 1/p + 1/q = 1
//   L1  - l_1 truncated to N coordinates, dual l_inf
//   C01 - C[0,1] sampled on a uniform grid, dual = finite atomic measures
//
// Primal and dual elements carry their space so that mixing spaces is a
// runtime error rather than silent garbage.

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace codiff {

inline constexpr std::size_t kDefaultDim = 8;
inline constexpr std::size_t kDefaultGridSize = 513;

enum class SpaceKind { Lp, L1, C01 };

struct SpaceMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class SpaceSpec {
public:
    static SpaceSpec lp(double p, std::size_t dim = kDefaultDim);
    static SpaceSpec l1(std::size_t dim = kDefaultDim);
    static SpaceSpec c01(std::size_t grid_size = kDefaultGridSize);

    SpaceKind kind() const { return kind_; }
    double p() const { return p_; }
    // Conjugate exponent; infinity for L1.
    double q() const;
    std::size_t dim() const { return dim_; }
    std::size_t grid_size() const { return grid_size_; }
    // Number of stored coordinates / samples.
    std::size_t size() const { return kind_ == SpaceKind::C01 ? grid_size_ : dim_; }

    // Grid node t_i = i/(G-1); C01 only.
    double node(std::size_t i) const;
    std::size_t nearest_node(double t) const;

    bool is_hilbert() const { return kind_ == SpaceKind::Lp && p_ == 2.0; }
    std::string describe() const;

    bool operator==(const SpaceSpec&) const = default;

private:
    SpaceSpec(SpaceKind kind, double p, std::size_t dim, std::size_t grid_size)
        : kind_(kind), p_(p), dim_(dim), grid_size_(grid_size) {}

    SpaceKind kind_;
    double p_;
    std::size_t dim_;
    std::size_t grid_size_;
};

void require_same_space(const SpaceSpec& a, const SpaceSpec& b, const char* where);

class PrimalVector {
public:
    PrimalVector(SpaceSpec space, std::vector<double> values);

    static PrimalVector zero(const SpaceSpec& space);
    static PrimalVector basis(const SpaceSpec& space, std::size_t i, double scale = 1.0);
    // Samples fn at the grid nodes of a C01 space.
    static PrimalVector sample(const SpaceSpec& space, const std::function<double(double)>& fn);

    const SpaceSpec& space() const { return space_; }
    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    bool is_zero() const;

    PrimalVector& operator+=(const PrimalVector& other);
    PrimalVector& operator-=(const PrimalVector& other);
    PrimalVector& operator*=(double s);

    friend PrimalVector operator+(PrimalVector a, const PrimalVector& b) { return a += b; }
    friend PrimalVector operator-(PrimalVector a, const PrimalVector& b) { return a -= b; }
    friend PrimalVector operator*(double s, PrimalVector a) { return a *= s; }
    friend PrimalVector operator-(PrimalVector a) { return a *= -1.0; }

    bool operator==(const PrimalVector&) const = default;

private:
    SpaceSpec space_;
    std::vector<double> values_;
};

// A point mass of a dual measure on [0,1], snapped to a grid node.
struct Atom {
    std::size_t node;
    double location;
    double weight;

    bool operator==(const Atom&) const = default;
};

class DualVector {
public:
    // Coordinate dual (Lq for Lp, l_inf for L1).
    DualVector(SpaceSpec space, std::vector<double> values);

    // Atomic measure on [0,1]; locations are snapped to the nearest grid node.
    // Duplicate nodes after snapping are rejected.
    static DualVector atomic(SpaceSpec space, const std::vector<std::pair<double, double>>& atoms);
    static DualVector zero(const SpaceSpec& space);
    static DualVector basis(const SpaceSpec& space, std::size_t i, double scale = 1.0);
    // Dirac mass at t (C01 only).
    static DualVector dirac(const SpaceSpec& space, double t, double weight = 1.0);

    const SpaceSpec& space() const { return space_; }
    bool is_atomic() const { return space_.kind() == SpaceKind::C01; }
    std::span<const double> values() const { return values_; }
    std::span<const Atom> atoms() const { return atoms_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }
    // Largest distance an atom moved while snapping.
    double snap_distance() const { return snap_distance_; }
    bool is_zero() const;

    DualVector& operator+=(const DualVector& other);
    DualVector& operator-=(const DualVector& other);
    DualVector& operator*=(double s);

    friend DualVector operator+(DualVector a, const DualVector& b) { return a += b; }
    friend DualVector operator-(DualVector a, const DualVector& b) { return a -= b; }
    friend DualVector operator*(double s, DualVector a) { return a *= s; }
    friend DualVector operator-(DualVector a) { return a *= -1.0; }

    friend bool operator==(const DualVector& a, const DualVector& b) {
        return a.space_ == b.space_ && a.values_ == b.values_ && a.atoms_ == b.atoms_;
    }

private:
    explicit DualVector(SpaceSpec space) : space_(space) {}
    void merge_atoms(const DualVector& other, double sign);

    SpaceSpec space_;
    std::vector<double> values_;
    std::vector<Atom> atoms_;  // sorted by node
    double snap_distance_ = 0.0;
};

double norm(const PrimalVector& v);
double dual_norm(const DualVector& w);
double pairing(const DualVector& w, const PrimalVector& v);

double distance(const PrimalVector& a, const PrimalVector& b);
double dual_distance(const DualVector& a, const DualVector& b);

// Normalized duality map of an Lp space; J(theta) = theta*.
DualVector duality_map(const PrimalVector& v);

struct L1DualitySelection {
    DualVector value;
    bool degenerate;
};

// j(v)_i = ||v||_1 sign(v_i), sign(0) = 0.
L1DualitySelection duality_map_l1_selection(const PrimalVector& v);

// Duality map of the dual space l_q back into l_p.
PrimalVector duality_map_inverse(const DualVector& w);

// Primal element with the same coordinates as a coordinate dual vector.
PrimalVector as_primal(const DualVector& w);
DualVector as_dual(const PrimalVector& v);

}  // namespace codiff
