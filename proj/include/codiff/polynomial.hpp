#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "codiff/spaces.hpp"

namespace codiff {

// Real polynomial a_0 + a_1 t + ... + a_n t^n, evaluated on [0,1].
class Polynomial {
public:
    Polynomial() : coeffs_{0.0} {}
    explicit Polynomial(std::vector<double> coefficients);

    static Polynomial constant(double c) { return Polynomial({c}); }
    static Polynomial monomial(int k, double scale = 1.0);

    std::span<const double> coefficients() const { return coeffs_; }
    double coefficient(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : 0.0; }
    // Formal degree (length of the coefficient vector minus one).
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

    double operator()(double t) const;
    Polynomial derivative() const;
    PrimalVector sample(const SpaceSpec& space) const;

    // max over [0,1] of |p|: dense scan plus golden-section polish of each local peak.
    double sup_norm() const;
    double max_abs_coefficient() const;

    Polynomial& operator+=(const Polynomial& other);
    Polynomial& operator-=(const Polynomial& other);
    Polynomial& operator*=(double s);

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(double s, Polynomial a) { return a *= s; }

private:
    std::vector<double> coeffs_;
};

}  // namespace codiff
