#ifndef DERHAM_QUADRATURE_HPP
#define DERHAM_QUADRATURE_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace derham {

struct QuadratureSpec {
    int order = 3;              ///< Grundmann-Möller index s; exact for polynomials of degree 2s+1
    int max_depth = 12;         ///< level L splits Δ_k into (2^L)^k congruent pieces
    double tolerance = 1e-9;    ///< absolute
    std::size_t budget = 4000000;  ///< cap on integrand evaluations per level
};

/// Validates positivity of order, depth, tolerance and budget.
void validate(const QuadratureSpec& q);

struct QuadratureNode {
    double weight;
    std::vector<double> barycentric;  ///< k + 1 entries summing to 1
};

/// Grundmann-Möller rule of index s on the standard k-simplex (weights sum to 1/k!).
std::vector<QuadratureNode> grundmann_moller(std::size_t k, int s);

struct Integral {
    double value = 0.0;
    double error = 0.0;  ///< difference between the last two refinement levels
    int depth = 0;
};

/**
 * ∫ over Δ_k = {t_i >= 0, Σ t_i <= 1} of f, by the symmetric rule on uniform
 * subdivisions of increasing depth until two successive levels differ by less
 * than tolerance/2. Throws ConvergenceError at max depth or when the budget is
 * exhausted, and EvalError on a non-finite integrand value.
 */
Integral integrate_simplex(const std::function<double(std::span<const double>)>& f, std::size_t k,
                           const QuadratureSpec& q = {});

}  // namespace derham

#endif
