#pragma once

// Best uniform polynomial approximation on [0,1] and the determinant
// machinery used to bound polynomial coefficients by the sup norm.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "codiff/polynomial.hpp"
#include "codiff/spaces.hpp"

namespace codiff {

struct RemezOptions {
    double tol = 1e-10;        // relative gap between levelled error and max residual
    int max_iterations = 100;
};

struct RemezIterate {
    int iteration;
    double levelled_error;
    double max_residual;
};

struct RemezResult {
    Polynomial polynomial;
    double error = 0.0;
    std::vector<double> reference;
    std::vector<std::size_t> reference_nodes;
    std::vector<int> residual_signs;
    int iterations = 0;
    std::vector<RemezIterate> trace;
    bool degenerate = false;  // input already in P_n
};

class RemezError : public std::runtime_error {
public:
    RemezError(const std::string& what, std::vector<RemezIterate> trace)
        : std::runtime_error(what), trace_(std::move(trace)) {}
    const std::vector<RemezIterate>& trace() const { return trace_; }

private:
    std::vector<RemezIterate> trace_;
};

// Discrete Remez exchange on the grid nodes of a C[0,1] sample. The norm of the
// grid model is the max over nodes, so the discrete minimax polynomial is the
// metric projection of f onto P_n in that model.
RemezResult remez(const PrimalVector& f, int n, const RemezOptions& options = {});

// det[t^(i*j)]_{i,j=0..n}, by pivoted elimination in quad precision. 1 <= n <= 8.
double an_determinant(double t, int n);
// Same quantity through the product recursion A_n = prod_k (t^k - 1) * t^(n(n-1)/2) * A_{n-1}.
double an_recursive(double t, int n);

struct DeterminantReport {
    int n = 0;
    std::vector<double> grid;
    std::vector<double> direct_values;
    std::vector<double> recursive_values;
    double max_rel_diff = 0.0;
};

DeterminantReport compare_determinants(int n, std::span<const double> grid);

// Recovers a_0..a_n from p(1), p(1/2), ..., p(1/2^n).
Polynomial coeffs_from_values(std::span<const double> values);

// n! b / |A_n(1/2)|: bound on every coefficient of p in P_n with ||p|| <= b.
double coefficient_bound(double b, int n);
// n! n^2 b / |A_n(1/2)|: bound on ||p'|| for ||p|| <= b.
double derivative_coefficient_bound(double b, int n);

struct ContinuityReport {
    std::vector<double> deviations;  // ||P(f + g/m) - P(f)||, m = 1..M
    double fitted_constant = 0.0;    // least-squares C in deviation ~ C/m
    double tail_bound_factor = 2.0;
    bool tail_bounded = false;       // tail deviations <= factor * C / m
    bool tail_monotone = false;
    double final_value = 0.0;
    double final_threshold = 0.0;    // 1e-3 (1 + ||g||)
    bool passed = false;
};

ContinuityReport continuity_experiment(const PrimalVector& f, const PrimalVector& g, int n,
                                       int perturbations, const RemezOptions& options = {});

}  // namespace codiff
