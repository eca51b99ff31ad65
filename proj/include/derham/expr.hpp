#ifndef DERHAM_EXPR_HPP
#define DERHAM_EXPR_HPP

#include "derham/rational.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace derham {

enum class ExprKind { Constant, Pi, Variable, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp };

/**
 * Immutable symbolic scalar expression over named variables.
 *
 * Nodes are shared; copying an Expr is cheap. The arithmetic operators and
 * the free functions `pow`, `sin`, `cos`, `exp` fold constant operands and
 * drop the identities x+0, x*1, x*0, x/1, x^0, x^1 and -(-x), so trees built
 * through them (and through `parse`) never contain those patterns.
 */
class Expr {
public:
    /// The constant 0.
    Expr();
    Expr(const Rational& value);  // NOLINT(google-explicit-constructor)
    Expr(int value);              // NOLINT(google-explicit-constructor)

    static Expr constant(const Rational& value) { return Expr(value); }
    static Expr variable(std::string name);
    static Expr pi();

    ExprKind kind() const;
    /// Constant value; zero for non-constant nodes.
    const Rational& value() const;
    /// Variable name; empty for other nodes.
    const std::string& name() const;
    /// Exponent of a Pow node.
    unsigned exponent() const;
    std::span<const Expr> args() const;
    const Expr& arg(std::size_t i) const { return args()[i]; }

    bool is_constant() const { return kind() == ExprKind::Constant; }
    bool is_constant(const Rational& v) const { return is_constant() && value() == v; }

    /// Structural equality.
    friend bool operator==(const Expr& a, const Expr& b);
    friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

    const void* identity() const { return node_.get(); }

    /// True for trees returned by `normalize` (their fractions are already reduced).
    bool is_canonical() const;

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    static Expr make(ExprKind kind, std::vector<Expr> args, unsigned exponent = 0);
    void mark_canonical() const;

    std::shared_ptr<const Node> node_;

    friend Expr operator-(const Expr& a);
    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    friend Expr pow(const Expr& base, unsigned exponent);
    friend Expr sin(const Expr& a);
    friend Expr cos(const Expr& a);
    friend Expr exp(const Expr& a);
    friend Expr normalize(const Expr& e);
};

Expr operator-(const Expr& a);
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
/// Throws ValidationError when `b` is the constant 0.
Expr operator/(const Expr& a, const Expr& b);
Expr pow(const Expr& base, unsigned exponent);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr exp(const Expr& a);

/**
 * Parses infix text. Precedence, highest first: `^` (non-negative integer
 * exponent), unary `-`, `*` `/`, binary `+` `-`. Functions: sin, cos, exp.
 * The identifier `pi` denotes the constant. Integer literals only; `p/q`
 * folds to a rational constant.
 */
Expr parse(std::string_view text);

/// Canonical printer; `parse(to_string(e)) == e` for every Expr.
std::string to_string(const Expr& e);

std::set<std::string> free_variables(const Expr& e);

/// True when no sin/cos/exp node occurs (pi is allowed).
bool is_rational_fragment(const Expr& e);

/// Formal partial derivative with respect to `var`.
Expr diff(const Expr& e, const std::string& var);

/// Simultaneous substitution of variables.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& values);

/**
 * Canonical form. Variables, pi, and every sin/cos/exp node (with its
 * argument normalized) are treated as independent atoms; the expression is
 * brought to a single reduced fraction of expanded polynomials in those
 * atoms, with an integer-primitive denominator whose leading coefficient is
 * positive. Idempotent.
 */
Expr normalize(const Expr& e);

enum class ZeroTest { Zero, NonZero, Unknown };

const char* to_string(ZeroTest z);

struct ZeroTestOptions {
    std::uint64_t seed = 0;
    int samples = 32;
    double tolerance = 1e-9;
    /// Sample coordinates are p/q with |p| <= max_component, 1 <= q <= max_component.
    long max_component = 10000;
};

/**
 * Decides whether e is identically zero. The rational fragment is decided
 * exactly. Otherwise the atom-normal form is tried first, then e is sampled
 * at random rational points: all samples below tolerance gives Zero
 * (probabilistic), all above gives NonZero, anything else Unknown.
 */
ZeroTest is_zero(const Expr& e, const ZeroTestOptions& options = {});

/// Variable bindings for evaluation; values may be exact or floating.
class EvalPoint {
public:
    using Value = std::variant<Rational, double>;

    EvalPoint() = default;
    EvalPoint(std::initializer_list<std::pair<const std::string, Value>> init) : values_(init) {}

    void set(const std::string& name, Value v) { values_[name] = std::move(v); }
    const Value* find(const std::string& name) const;

private:
    std::map<std::string, Value> values_;
};

/// Floating evaluation. Throws EvalError for unbound variables or a vanishing denominator.
double eval(const Expr& e, const EvalPoint& point);

/// Exact evaluation of a rational-fragment expression without pi at rational bindings.
Rational eval_exact(const Expr& e, const EvalPoint& point);

/**
 * Flattened postfix program for fast repeated floating evaluation, e.g. at
 * quadrature nodes. Variables are read positionally from the order given at
 * construction. Division by an exact zero yields NaN instead of throwing.
 */
class CompiledExpr {
public:
    CompiledExpr() = default;
    CompiledExpr(const Expr& e, const std::vector<std::string>& variables);

    double operator()(std::span<const double> x) const;

    /// Evaluates and also returns a magnitude bound used to scale zero tolerances.
    double evaluate_with_scale(std::span<const double> x, double& scale) const;

private:
    struct Instr {
        ExprKind kind;
        double value = 0.0;
        std::size_t slot = 0;
        unsigned exponent = 0;
    };
    std::vector<Instr> code_;
    std::size_t max_stack_ = 0;
};

}  // namespace derham

#endif
