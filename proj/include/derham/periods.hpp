#ifndef DERHAM_PERIODS_HPP
#define DERHAM_PERIODS_HPP

#include "derham/forms.hpp"
#include "derham/quadrature.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace derham {

/// Smooth map σ from the standard k-simplex (coordinates t1..tk) into a target coordinate space.
class SmoothSimplex {
public:
    /// Components are normalized; free variables must be among t1..tk.
    SmoothSimplex(std::size_t degree, std::vector<std::string> target, std::vector<Expr> components);

    /// σ(t) = v_0 + Σ t_i (v_i - v_0).
    static SmoothSimplex affine(std::vector<std::string> target, const std::vector<std::vector<Rational>>& vertices);

    std::size_t degree() const { return degree_; }
    const std::vector<std::string>& target() const { return map_.target(); }
    const std::vector<Expr>& components() const { return map_.components(); }
    const SmoothMap& map() const { return map_; }
    /// Canonical text identifying σ; equal keys mean equal maps.
    const std::string& key() const { return key_; }

    /// Floating image of a parameter point.
    std::vector<double> evaluate(std::span<const double> t) const;

private:
    std::size_t degree_;
    SmoothMap map_;
    std::string key_;
    std::vector<CompiledExpr> compiled_;
};

/// Names t1 .. tk of the standard simplex coordinates.
std::vector<std::string> simplex_coordinates(std::size_t k);

/// F ∘ σ, built symbolically.
SmoothSimplex compose(const SmoothMap& f, const SmoothSimplex& s);

/// Lattice of periods for cycles on a quotient R^n / Λ; columns of `basis` span Λ.
struct Lattice {
    std::vector<std::vector<Rational>> basis;  ///< one period vector per entry
};

/// Formal rational combination of simplices of one degree in one target space.
class SingularChain {
public:
    SingularChain(std::size_t degree, std::vector<std::string> target) : degree_(degree), target_(std::move(target)) {}

    std::size_t degree() const { return degree_; }
    const std::vector<std::string>& target() const { return target_; }
    const std::vector<std::pair<Rational, SmoothSimplex>>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    /// Appends c·σ and merges with an identical simplex; exact zero coefficients are dropped.
    void add(const Rational& c, const SmoothSimplex& s);

    /**
     * Copy with degree-0 points merged when they agree numerically (optionally
     * modulo a lattice of periods). Higher-degree simplices merge by key in `add`.
     */
    SingularChain simplified(const Lattice* lattice = nullptr) const;

    friend SingularChain operator+(const SingularChain& a, const SingularChain& b);
    SingularChain scaled(const Rational& c) const;

private:
    std::size_t degree_;
    std::vector<std::string> target_;
    std::vector<std::pair<Rational, SmoothSimplex>> terms_;
};

std::string to_string(const SmoothSimplex& s);
std::string to_string(const SingularChain& c);

/// Alternating sum of the faces σ∘F_i, where F_i skips vertex i of the standard simplex.
SingularChain boundary(const SmoothSimplex& s);
SingularChain boundary(const SingularChain& c);

/// True when the boundary cancels (modulo the lattice, if given).
bool is_cycle(const SingularChain& c, const Lattice* lattice = nullptr);

/**
 * ∫_σ w = ∫_{Δ_k} σ* w. A degree-0 simplex is point evaluation. Throws
 * ValidationError on degree or coordinate mismatch, EvalError when the form
 * is singular on the image (checked at 1000 sample points), ConvergenceError
 * when the tolerance is not met.
 */
Integral integrate(const DifferentialForm& w, const SmoothSimplex& s, const QuadratureSpec& q = {});

/// Σ c_i ∫_{σ_i} w after cancellation; the error is the weighted sum of simplex errors.
Integral integrate_chain(const DifferentialForm& w, const SingularChain& c, const QuadratureSpec& q = {});

/// |∫_{∂c} w - ∫_c dw|.
double stokes_residual(const DifferentialForm& w, const SingularChain& c, const QuadratureSpec& q = {});

/// |∫_s F*w - ∫_{F∘s} w|.
double naturality_check(const SmoothMap& f, const DifferentialForm& w, const SmoothSimplex& s,
                        const QuadratureSpec& q = {});

struct PeriodOptions {
    std::optional<Lattice> lattice;
    ZeroTestOptions zero_test;
    bool perturbation_checks = true;
};

struct PeriodReport {
    std::vector<std::vector<double>> matrix;  ///< matrix[i][j] = ∫_{c_j} ω_i
    std::vector<double> singular_values;
    std::size_t rank = 0;
    double rank_threshold = 0.0;
    /// Largest change of an entry when c_j is replaced by c_j + ∂p; nullopt when no such p fits.
    std::optional<double> cycle_perturbation;
    /// Largest change of an entry when ω_i is replaced by ω_i + dη.
    std::optional<double> form_perturbation;
    bool perturbation_ok = true;
};

/// Numerical rank: singular values above tolerance · σ_max · max(rows, cols).
std::size_t numerical_rank(const std::vector<std::vector<double>>& m, double tolerance,
                           std::vector<double>* singular_values = nullptr, double* threshold = nullptr);

/// Period matrix of closed forms over cycles, with well-definedness spot checks.
PeriodReport period_matrix(const std::vector<DifferentialForm>& forms, const std::vector<SingularChain>& cycles,
                           const QuadratureSpec& q = {}, const PeriodOptions& options = {});

}  // namespace derham

#endif
