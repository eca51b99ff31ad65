#include "derham/expr.hpp"

#include "derham/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace derham {

struct Expr::Node {
    ExprKind kind = ExprKind::Constant;
    Rational value;
    std::string name;
    unsigned exponent = 0;
    std::vector<Expr> args;
    // Set once by normalize(); a property of the tree itself.
    mutable bool canonical = false;
};

namespace {

const Rational& zero_rational() {
    static const Rational z(0);
    return z;
}

const std::string& empty_name() {
    static const std::string s;
    return s;
}

}  // namespace

Expr::Expr() : Expr(Rational(0)) {}

Expr::Expr(int value) : Expr(Rational(value)) {}

Expr::Expr(const Rational& value) {
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Constant;
    n->value = value;
    node_ = std::move(n);
}

Expr Expr::variable(std::string name) {
    if (name.empty()) throw ValidationError("variable name must be nonempty");
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Variable;
    n->name = std::move(name);
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::pi() {
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Pi;
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::make(ExprKind kind, std::vector<Expr> args, unsigned exponent) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->args = std::move(args);
    n->exponent = exponent;
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

ExprKind Expr::kind() const { return node_->kind; }

const Rational& Expr::value() const {
    return node_->kind == ExprKind::Constant ? node_->value : zero_rational();
}

const std::string& Expr::name() const {
    return node_->kind == ExprKind::Variable ? node_->name : empty_name();
}

unsigned Expr::exponent() const { return node_->exponent; }

bool Expr::is_canonical() const { return node_->canonical; }

void Expr::mark_canonical() const { node_->canonical = true; }

std::span<const Expr> Expr::args() const { return node_->args; }

bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    if (x.kind != y.kind || x.exponent != y.exponent || x.args.size() != y.args.size()) return false;
    if (x.kind == ExprKind::Constant && x.value != y.value) return false;
    if (x.kind == ExprKind::Variable && x.name != y.name) return false;
    for (std::size_t i = 0; i < x.args.size(); ++i) {
        if (!(x.args[i] == y.args[i])) return false;
    }
    return true;
}

Expr operator-(const Expr& a) {
    if (a.is_constant()) return Expr(-a.value());
    if (a.kind() == ExprKind::Neg) return a.arg(0);
    return Expr::make(ExprKind::Neg, {a});
}

Expr operator+(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant()) return Expr(a.value() + b.value());
    if (a.is_constant(0)) return b;
    if (b.is_constant(0)) return a;
    return Expr::make(ExprKind::Add, {a, b});
}

Expr operator-(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant()) return Expr(a.value() - b.value());
    if (b.is_constant(0)) return a;
    if (a.is_constant(0)) return -b;
    return Expr::make(ExprKind::Sub, {a, b});
}

Expr operator*(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant()) return Expr(a.value() * b.value());
    if (a.is_constant(0) || b.is_constant(0)) return Expr();
    if (a.is_constant(1)) return b;
    if (b.is_constant(1)) return a;
    if (a.is_constant(-1)) return -b;
    if (b.is_constant(-1)) return -a;
    return Expr::make(ExprKind::Mul, {a, b});
}

Expr operator/(const Expr& a, const Expr& b) {
    if (b.is_constant(0)) throw ValidationError("division by the constant 0");
    if (a.is_constant() && b.is_constant()) return Expr(a.value() / b.value());
    if (a.is_constant(0)) return Expr();
    if (b.is_constant(1)) return a;
    if (b.is_constant(-1)) return -a;
    return Expr::make(ExprKind::Div, {a, b});
}

Expr pow(const Expr& base, unsigned exponent) {
    if (exponent == 0) return Expr(1);
    if (exponent == 1) return base;
    if (base.is_constant()) {
        Rational r(1);
        for (unsigned i = 0; i < exponent; ++i) r *= base.value();
        return Expr(r);
    }
    return Expr::make(ExprKind::Pow, {base}, exponent);
}

Expr sin(const Expr& a) {
    if (a.is_constant(0)) return Expr();
    return Expr::make(ExprKind::Sin, {a});
}

Expr cos(const Expr& a) {
    if (a.is_constant(0)) return Expr(1);
    return Expr::make(ExprKind::Cos, {a});
}

Expr exp(const Expr& a) {
    if (a.is_constant(0)) return Expr(1);
    return Expr::make(ExprKind::Exp, {a});
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

int precedence(const Expr& e) {
    switch (e.kind()) {
        case ExprKind::Add:
        case ExprKind::Sub:
            return 1;
        case ExprKind::Mul:
        case ExprKind::Div:
            return 2;
        case ExprKind::Neg:
            return 3;
        case ExprKind::Pow:
            return 4;
        case ExprKind::Constant:
            if (!is_integer(e.value())) return 2;
            return e.value() < 0 ? 3 : 5;
        default:
            return 5;
    }
}

void print(const Expr& e, int min_prec, std::string& out) {
    const bool wrap = precedence(e) < min_prec;
    if (wrap) out += '(';
    switch (e.kind()) {
        case ExprKind::Constant:
            out += to_string(e.value());
            break;
        case ExprKind::Pi:
            out += "pi";
            break;
        case ExprKind::Variable:
            out += e.name();
            break;
        case ExprKind::Neg:
            out += '-';
            print(e.arg(0), 4, out);
            break;
        case ExprKind::Add:
        case ExprKind::Sub:
            print(e.arg(0), 1, out);
            out += e.kind() == ExprKind::Add ? " + " : " - ";
            print(e.arg(1), 2, out);
            break;
        case ExprKind::Mul:
        case ExprKind::Div:
            print(e.arg(0), 2, out);
            out += e.kind() == ExprKind::Mul ? '*' : '/';
            print(e.arg(1), 3, out);
            break;
        case ExprKind::Pow:
            print(e.arg(0), 5, out);
            out += '^';
            out += std::to_string(e.exponent());
            break;
        case ExprKind::Sin:
        case ExprKind::Cos:
        case ExprKind::Exp:
            out += e.kind() == ExprKind::Sin ? "sin(" : e.kind() == ExprKind::Cos ? "cos(" : "exp(";
            print(e.arg(0), 0, out);
            out += ')';
            break;
    }
    if (wrap) out += ')';
}

void collect_variables(const Expr& e, std::set<std::string>& out) {
    if (e.kind() == ExprKind::Variable) out.insert(e.name());
    for (const Expr& a : e.args()) collect_variables(a, out);
}

}  // namespace

std::string to_string(const Expr& e) {
    std::string out;
    print(e, 0, out);
    return out;
}

std::set<std::string> free_variables(const Expr& e) {
    std::set<std::string> out;
    collect_variables(e, out);
    return out;
}

bool is_rational_fragment(const Expr& e) {
    switch (e.kind()) {
        case ExprKind::Sin:
        case ExprKind::Cos:
        case ExprKind::Exp:
            return false;
        default:
            for (const Expr& a : e.args()) {
                if (!is_rational_fragment(a)) return false;
            }
            return true;
    }
}

// ---------------------------------------------------------------------------
// Calculus and substitution
// ---------------------------------------------------------------------------

Expr diff(const Expr& e, const std::string& var) {
    switch (e.kind()) {
        case ExprKind::Constant:
        case ExprKind::Pi:
            return Expr();
        case ExprKind::Variable:
            return Expr(e.name() == var ? 1 : 0);
        case ExprKind::Neg:
            return -diff(e.arg(0), var);
        case ExprKind::Add:
            return diff(e.arg(0), var) + diff(e.arg(1), var);
        case ExprKind::Sub:
            return diff(e.arg(0), var) - diff(e.arg(1), var);
        case ExprKind::Mul: {
            const Expr& a = e.arg(0);
            const Expr& b = e.arg(1);
            return diff(a, var) * b + a * diff(b, var);
        }
        case ExprKind::Div: {
            const Expr& a = e.arg(0);
            const Expr& b = e.arg(1);
            Expr da = diff(a, var);
            Expr db = diff(b, var);
            if (db.is_constant(0)) return da / b;
            return (da * b - a * db) / pow(b, 2);
        }
        case ExprKind::Pow: {
            const Expr& a = e.arg(0);
            const unsigned n = e.exponent();
            return Expr(static_cast<int>(n)) * pow(a, n - 1) * diff(a, var);
        }
        case ExprKind::Sin:
            return cos(e.arg(0)) * diff(e.arg(0), var);
        case ExprKind::Cos:
            return -sin(e.arg(0)) * diff(e.arg(0), var);
        case ExprKind::Exp:
            return e * diff(e.arg(0), var);
    }
    return Expr();
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& values) {
    switch (e.kind()) {
        case ExprKind::Constant:
        case ExprKind::Pi:
            return e;
        case ExprKind::Variable: {
            auto it = values.find(e.name());
            return it == values.end() ? e : it->second;
        }
        case ExprKind::Neg:
            return -substitute(e.arg(0), values);
        case ExprKind::Add:
            return substitute(e.arg(0), values) + substitute(e.arg(1), values);
        case ExprKind::Sub:
            return substitute(e.arg(0), values) - substitute(e.arg(1), values);
        case ExprKind::Mul:
            return substitute(e.arg(0), values) * substitute(e.arg(1), values);
        case ExprKind::Div:
            return substitute(e.arg(0), values) / substitute(e.arg(1), values);
        case ExprKind::Pow:
            return pow(substitute(e.arg(0), values), e.exponent());
        case ExprKind::Sin:
            return sin(substitute(e.arg(0), values));
        case ExprKind::Cos:
            return cos(substitute(e.arg(0), values));
        case ExprKind::Exp:
            return exp(substitute(e.arg(0), values));
    }
    return e;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

const EvalPoint::Value* EvalPoint::find(const std::string& name) const {
    auto it = values_.find(name);
    return it == values_.end() ? nullptr : &it->second;
}

double eval(const Expr& e, const EvalPoint& point) {
    switch (e.kind()) {
        case ExprKind::Constant:
            return to_double(e.value());
        case ExprKind::Pi:
            return std::numbers::pi;
        case ExprKind::Variable: {
            const auto* v = point.find(e.name());
            if (!v) throw EvalError("unbound variable '" + e.name() + "'");
            if (const auto* r = std::get_if<Rational>(v)) return to_double(*r);
            return std::get<double>(*v);
        }
        case ExprKind::Neg:
            return -eval(e.arg(0), point);
        case ExprKind::Add:
            return eval(e.arg(0), point) + eval(e.arg(1), point);
        case ExprKind::Sub:
            return eval(e.arg(0), point) - eval(e.arg(1), point);
        case ExprKind::Mul:
            return eval(e.arg(0), point) * eval(e.arg(1), point);
        case ExprKind::Div: {
            const double den = eval(e.arg(1), point);
            if (den == 0.0) throw EvalError("division by zero: denominator " + to_string(e.arg(1)) + " vanishes");
            return eval(e.arg(0), point) / den;
        }
        case ExprKind::Pow:
            return std::pow(eval(e.arg(0), point), static_cast<int>(e.exponent()));
        case ExprKind::Sin:
            return std::sin(eval(e.arg(0), point));
        case ExprKind::Cos:
            return std::cos(eval(e.arg(0), point));
        case ExprKind::Exp:
            return std::exp(eval(e.arg(0), point));
    }
    return 0.0;
}

Rational eval_exact(const Expr& e, const EvalPoint& point) {
    switch (e.kind()) {
        case ExprKind::Constant:
            return e.value();
        case ExprKind::Variable: {
            const auto* v = point.find(e.name());
            if (!v) throw EvalError("unbound variable '" + e.name() + "'");
            const auto* r = std::get_if<Rational>(v);
            if (!r) throw EvalError("variable '" + e.name() + "' is bound to a floating value");
            return *r;
        }
        case ExprKind::Neg:
            return -eval_exact(e.arg(0), point);
        case ExprKind::Add:
            return eval_exact(e.arg(0), point) + eval_exact(e.arg(1), point);
        case ExprKind::Sub:
            return eval_exact(e.arg(0), point) - eval_exact(e.arg(1), point);
        case ExprKind::Mul:
            return eval_exact(e.arg(0), point) * eval_exact(e.arg(1), point);
        case ExprKind::Div: {
            Rational den = eval_exact(e.arg(1), point);
            if (den == 0) throw EvalError("division by zero: denominator " + to_string(e.arg(1)) + " vanishes");
            return eval_exact(e.arg(0), point) / den;
        }
        case ExprKind::Pow: {
            Rational base = eval_exact(e.arg(0), point);
            Rational r(1);
            for (unsigned i = 0; i < e.exponent(); ++i) r *= base;
            return r;
        }
        default:
            throw EvalError("expression " + to_string(e) + " has no exact value");
    }
}

// ---------------------------------------------------------------------------
// Compiled evaluation
// ---------------------------------------------------------------------------

namespace {

template <class Emit>
void compile_into(const Expr& e, const std::vector<std::string>& vars, Emit&& emit) {
    for (const Expr& a : e.args()) compile_into(a, vars, emit);
    emit(e, vars);
}

}  // namespace

CompiledExpr::CompiledExpr(const Expr& e, const std::vector<std::string>& variables) {
    std::size_t depth = 0;
    compile_into(e, variables, [&](const Expr& node, const std::vector<std::string>& vars) {
        Instr ins{node.kind()};
        switch (node.kind()) {
            case ExprKind::Constant:
                ins.value = to_double(node.value());
                ++depth;
                break;
            case ExprKind::Pi:
                ins.value = std::numbers::pi;
                ++depth;
                break;
            case ExprKind::Variable: {
                auto it = std::find(vars.begin(), vars.end(), node.name());
                if (it == vars.end()) throw ValidationError("unbound variable '" + node.name() + "'");
                ins.slot = static_cast<std::size_t>(it - vars.begin());
                ++depth;
                break;
            }
            case ExprKind::Add:
            case ExprKind::Sub:
            case ExprKind::Mul:
            case ExprKind::Div:
                --depth;
                break;
            case ExprKind::Pow:
                ins.exponent = node.exponent();
                break;
            default:
                break;
        }
        max_stack_ = std::max(max_stack_, depth);
        code_.push_back(ins);
    });
}

double CompiledExpr::operator()(std::span<const double> x) const {
    double scale = 0.0;
    return evaluate_with_scale(x, scale);
}

double CompiledExpr::evaluate_with_scale(std::span<const double> x, double& scale) const {
    constexpr std::size_t kInline = 64;
    std::array<double, kInline> vbuf{};
    std::array<double, kInline> mbuf{};
    std::vector<double> vheap, mheap;
    double* v = vbuf.data();
    double* m = mbuf.data();
    if (max_stack_ > kInline) {
        vheap.resize(max_stack_);
        mheap.resize(max_stack_);
        v = vheap.data();
        m = mheap.data();
    }
    std::size_t top = 0;
    for (const Instr& ins : code_) {
        switch (ins.kind) {
            case ExprKind::Constant:
            case ExprKind::Pi:
                v[top] = ins.value;
                m[top] = std::abs(ins.value);
                ++top;
                break;
            case ExprKind::Variable:
                v[top] = x[ins.slot];
                m[top] = std::abs(v[top]);
                ++top;
                break;
            case ExprKind::Neg:
                v[top - 1] = -v[top - 1];
                break;
            case ExprKind::Add:
                --top;
                v[top - 1] += v[top];
                m[top - 1] += m[top];
                break;
            case ExprKind::Sub:
                --top;
                v[top - 1] -= v[top];
                m[top - 1] += m[top];
                break;
            case ExprKind::Mul:
                --top;
                v[top - 1] *= v[top];
                m[top - 1] *= m[top];
                break;
            case ExprKind::Div:
                --top;
                if (v[top] == 0.0) {
                    v[top - 1] = std::numeric_limits<double>::quiet_NaN();
                } else {
                    m[top - 1] /= std::abs(v[top]);
                    v[top - 1] /= v[top];
                }
                break;
            case ExprKind::Pow: {
                const int n = static_cast<int>(ins.exponent);
                v[top - 1] = std::pow(v[top - 1], n);
                m[top - 1] = std::pow(m[top - 1], n);
                break;
            }
            case ExprKind::Sin:
                v[top - 1] = std::sin(v[top - 1]);
                m[top - 1] = 1.0;
                break;
            case ExprKind::Cos:
                v[top - 1] = std::cos(v[top - 1]);
                m[top - 1] = 1.0;
                break;
            case ExprKind::Exp: {
                const double arg_scale = m[top - 1];
                v[top - 1] = std::exp(v[top - 1]);
                m[top - 1] = v[top - 1] * std::max(1.0, arg_scale);
                break;
            }
        }
    }
    scale = m[0];
    return v[0];
}

}  // namespace derham
