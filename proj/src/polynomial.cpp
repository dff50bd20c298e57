#include "codiff/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace codiff {

Polynomial::Polynomial(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {
    if (coeffs_.empty()) coeffs_.push_back(0.0);
    for (double c : coeffs_) {
        if (!std::isfinite(c)) throw std::invalid_argument("Polynomial: non-finite coefficient");
    }
}

Polynomial Polynomial::monomial(int k, double scale) {
    if (k < 0) throw std::invalid_argument("monomial: negative degree");
    std::vector<double> c(static_cast<std::size_t>(k) + 1, 0.0);
    c.back() = scale;
    return Polynomial(std::move(c));
}

double Polynomial::operator()(double t) const {
    double acc = 0.0;
    for (std::size_t k = coeffs_.size(); k-- > 0;) acc = acc * t + coeffs_[k];
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return Polynomial();
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
    return Polynomial(std::move(d));
}

PrimalVector Polynomial::sample(const SpaceSpec& space) const {
    return PrimalVector::sample(space, [this](double t) { return (*this)(t); });
}

double Polynomial::sup_norm() const {
    constexpr int kScan = 2048;
    const auto absval = [this](double t) { return std::abs((*this)(t)); };
    double best = std::max(absval(0.0), absval(1.0));
    std::vector<double> vals(kScan + 1);
    for (int i = 0; i <= kScan; ++i) vals[i] = absval(static_cast<double>(i) / kScan);
    for (int i = 1; i < kScan; ++i) {
        if (vals[i] < vals[i - 1] || vals[i] < vals[i + 1]) continue;
        // golden-section maximization on the bracketing cell pair
        double a = static_cast<double>(i - 1) / kScan, b = static_cast<double>(i + 1) / kScan;
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = b - g * (b - a), d = a + g * (b - a);
        double fc = absval(c), fd = absval(d);
        for (int it = 0; it < 60; ++it) {
            if (fc > fd) {
                b = d; d = c; fd = fc;
                c = b - g * (b - a); fc = absval(c);
            } else {
                a = c; c = d; fc = fd;
                d = a + g * (b - a); fd = absval(d);
            }
        }
        best = std::max({best, fc, fd, vals[i]});
    }
    return best;
}

double Polynomial::max_abs_coefficient() const {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
    if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), 0.0);
    for (std::size_t k = 0; k < other.coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
    if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), 0.0);
    for (std::size_t k = 0; k < other.coeffs_.size(); ++k) coeffs_[k] -= other.coeffs_[k];
    return *this;
}

Polynomial& Polynomial::operator*=(double s) {
    for (double& c : coeffs_) c *= s;
    return *this;
}

}  // namespace codiff
