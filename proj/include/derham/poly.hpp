#ifndef DERHAM_POLY_HPP
#define DERHAM_POLY_HPP

#include "derham/rational.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace derham {

/// Exponent vector over a fixed, ordered list of indeterminates.
using Monomial = std::vector<unsigned>;

/**
 * Sparse multivariate polynomial with exact rational coefficients.
 *
 * Terms are kept in descending lexicographic order of exponent vectors
 * (indeterminate 0 is the most significant), so `terms().begin()` is the
 * leading term. Zero coefficients are never stored.
 */
class Polynomial {
public:
    using TermMap = std::map<Monomial, Rational, std::greater<Monomial>>;

    explicit Polynomial(std::size_t nvars = 0) : nvars_(nvars) {}

    static Polynomial constant(std::size_t nvars, const Rational& c);
    static Polynomial variable(std::size_t nvars, std::size_t index);

    std::size_t nvars() const { return nvars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    /// Constant term value; only meaningful when is_constant().
    Rational constant_value() const;

    const Monomial& leading_monomial() const { return terms_.begin()->first; }
    const Rational& leading_coefficient() const { return terms_.begin()->second; }

    void add_term(const Monomial& m, const Rational& c);

    unsigned degree_in(std::size_t var) const;
    unsigned total_degree() const;
    bool depends_on(std::size_t var) const { return degree_in(var) > 0; }

    /// Groups terms by the power of `var`; the returned polynomials do not involve `var`.
    std::map<unsigned, Polynomial> coefficients_in(std::size_t var) const;
    Polynomial leading_coefficient_in(std::size_t var) const;

    Polynomial operator-() const;
    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(const Rational& c);

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

    Polynomial pow(unsigned e) const;

    /// Multiply by x_var^k.
    Polynomial shifted(std::size_t var, unsigned k) const;

private:
    std::size_t nvars_;
    TermMap terms_;
};

/// Quotient a / b when b divides a exactly, std::nullopt otherwise.
std::optional<Polynomial> divide_exact(const Polynomial& a, const Polynomial& b);

/// Scales p to integer coefficients with gcd 1 and positive leading coefficient.
/// Returns the factor used, so that `p * factor` equals the result.
Rational make_primitive(Polynomial& p);

/// Greatest common divisor, primitive with positive leading coefficient.
/// gcd(0, 0) is 0.
Polynomial gcd(const Polynomial& a, const Polynomial& b);

/**
 * Quotient of polynomials kept in lowest terms: gcd(num, den) = 1, the
 * denominator has coprime integer coefficients and a positive leading
 * coefficient. A zero function is 0/1.
 */
class RationalFunction {
public:
    explicit RationalFunction(std::size_t nvars = 0);
    explicit RationalFunction(Polynomial num);
    RationalFunction(Polynomial num, Polynomial den);

    /// Builds num/den when gcd(num, den) = 1 is already known; only rescales the denominator.
    static RationalFunction from_coprime(Polynomial num, Polynomial den);

    const Polynomial& numerator() const { return num_; }
    const Polynomial& denominator() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    RationalFunction operator-() const;
    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
    RationalFunction pow(unsigned e) const;

    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

private:
    void reduce();

    Polynomial num_;
    Polynomial den_;
};

}  // namespace derham

#endif
