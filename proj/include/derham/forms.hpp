#ifndef DERHAM_FORMS_HPP
#define DERHAM_FORMS_HPP

#include "derham/expr.hpp"

#include <map>
#include <string>
#include <vector>

namespace derham {

/// Strictly increasing 1-based coordinate indices; empty for degree 0.
using MultiIndex = std::vector<int>;

/**
 * Homogeneous differential form on a coordinate domain in R^n,
 * sum over I of f_I dx_I.
 *
 * Coefficients are stored in canonical form (see `normalize`) and terms whose
 * coefficient normalizes to zero are dropped, so a form of degree k > n is
 * always the zero form. Terms are ordered lexicographically by multi-index.
 */
class DifferentialForm {
public:
    DifferentialForm(std::vector<std::string> coords, int degree);

    /// The 0-form f.
    static DifferentialForm function(std::vector<std::string> coords, const Expr& f);
    /// The monomial form c dx_I.
    static DifferentialForm monomial(std::vector<std::string> coords, const MultiIndex& index, const Expr& c = Expr(1));

    const std::vector<std::string>& coords() const { return coords_; }
    int dimension() const { return static_cast<int>(coords_.size()); }
    int degree() const { return degree_; }
    const std::map<MultiIndex, Expr>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    /// Coefficient of dx_I (zero when absent).
    Expr coefficient(const MultiIndex& index) const;

    /// Adds c dx_I to the form. Throws ValidationError when I is not a valid
    /// index of this degree or c mentions a non-coordinate variable.
    void add_term(const MultiIndex& index, const Expr& c);

    DifferentialForm operator-() const;
    DifferentialForm& operator+=(const DifferentialForm& o);
    DifferentialForm& operator-=(const DifferentialForm& o);
    friend DifferentialForm operator+(DifferentialForm a, const DifferentialForm& b) { return a += b; }
    friend DifferentialForm operator-(DifferentialForm a, const DifferentialForm& b) { return a -= b; }
    /// Multiplication by a 0-form coefficient.
    DifferentialForm scaled(const Expr& f) const;

    friend bool operator==(const DifferentialForm& a, const DifferentialForm& b) {
        return a.coords_ == b.coords_ && a.degree_ == b.degree_ && a.terms_ == b.terms_;
    }

private:
    void require_same_space(const DifferentialForm& o, const char* op) const;

    std::vector<std::string> coords_;
    int degree_;
    std::map<MultiIndex, Expr> terms_;
};

/// Human-readable canonical text, e.g. "y dx + x dy" or "-x*y dx∧dy"; "0" for the zero form.
std::string to_string(const DifferentialForm& w);

/// A smooth map R^m -> R^n given by n component expressions in the source coordinates.
class SmoothMap {
public:
    SmoothMap(std::vector<std::string> source, std::vector<std::string> target, std::vector<Expr> components);

    static SmoothMap identity(const std::vector<std::string>& coords);

    const std::vector<std::string>& source() const { return source_; }
    const std::vector<std::string>& target() const { return target_; }
    const std::vector<Expr>& components() const { return components_; }

    /// Substitution map target-coordinate -> component, for composing with g: g(f(x)).
    std::map<std::string, Expr> substitution() const;

private:
    std::vector<std::string> source_;
    std::vector<std::string> target_;
    std::vector<Expr> components_;
};

/// outer o inner; inner.target must equal outer.source.
SmoothMap compose(const SmoothMap& outer, const SmoothMap& inner);

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b);

/// Exterior derivative.
DifferentialForm d(const DifferentialForm& w);

/// f^* w; w must live on f's target coordinates.
DifferentialForm pullback(const SmoothMap& f, const DifferentialForm& w);

/// Zero iff every coefficient tests Zero; NonZero if any tests NonZero; Unknown otherwise.
ZeroTest all_coefficients_zero(const DifferentialForm& w, const ZeroTestOptions& options = {});

/// dw == 0, decided coefficientwise by `is_zero`.
ZeroTest is_closed(const DifferentialForm& w, const ZeroTestOptions& options = {});

/// Verifies w == d(tau) for a supplied witness of degree deg(w) - 1.
ZeroTest check_exact_witness(const DifferentialForm& w, const DifferentialForm& tau,
                             const ZeroTestOptions& options = {});

}  // namespace derham

#endif
