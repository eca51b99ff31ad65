#include "derham/error.hpp"
#include "derham/expr.hpp"
#include "derham/poly.hpp"

#include <cmath>
#include <random>
#include <unordered_map>

namespace derham {

namespace {

/*
 * Atoms are the indeterminates of the canonical rational function:
 * variables (ordered by name), then pi, then sin/cos/exp nodes ordered by
 * the printed form of the node with its argument normalized.
 */
class AtomTable {
public:
    explicit AtomTable(const Expr& e) {
        collect(e);
        std::size_t i = 0;
        for (auto& [key, slot] : by_key_) {
            slot.index = i++;
            atoms_.push_back(slot.atom);
        }
    }

    std::size_t size() const { return atoms_.size(); }
    const Expr& atom(std::size_t i) const { return atoms_[i]; }

    std::size_t index_of(const Expr& e) const {
        auto it = key_of_node_.find(e.identity());
        return by_key_.at(it->second).index;
    }

private:
    struct Slot {
        Expr atom;
        std::size_t index = 0;
    };

    void collect(const Expr& e) {
        if (key_of_node_.count(e.identity())) return;
        switch (e.kind()) {
            case ExprKind::Variable:
                remember(e, "0:" + e.name(), e);
                return;
            case ExprKind::Pi:
                remember(e, "1:pi", e);
                return;
            case ExprKind::Sin:
            case ExprKind::Cos:
            case ExprKind::Exp: {
                Expr arg = normalize(e.arg(0));
                Expr atom = e.kind() == ExprKind::Sin ? sin(arg) : e.kind() == ExprKind::Cos ? cos(arg) : exp(arg);
                if (atom.is_constant()) {
                    // sin(0) and friends fold to constants.
                    constant_nodes_.emplace(e.identity(), atom.value());
                    return;
                }
                remember(e, "2:" + to_string(atom), atom);
                return;
            }
            default:
                for (const Expr& a : e.args()) collect(a);
        }
    }

    void remember(const Expr& node, const std::string& key, const Expr& atom) {
        key_of_node_.emplace(node.identity(), key);
        by_key_.try_emplace(key, Slot{atom, 0});
    }

    std::map<std::string, Slot> by_key_;
    std::unordered_map<const void*, std::string> key_of_node_;
    std::vector<Expr> atoms_;

public:
    std::unordered_map<const void*, Rational> constant_nodes_;
};

RationalFunction to_rational_function(const Expr& e, const AtomTable& table) {
    const std::size_t n = table.size();
    switch (e.kind()) {
        case ExprKind::Constant:
            return RationalFunction(Polynomial::constant(n, e.value()));
        case ExprKind::Variable:
        case ExprKind::Pi:
            return RationalFunction(Polynomial::variable(n, table.index_of(e)));
        case ExprKind::Sin:
        case ExprKind::Cos:
        case ExprKind::Exp: {
            auto c = table.constant_nodes_.find(e.identity());
            if (c != table.constant_nodes_.end()) return RationalFunction(Polynomial::constant(n, c->second));
            return RationalFunction(Polynomial::variable(n, table.index_of(e)));
        }
        case ExprKind::Neg:
            return -to_rational_function(e.arg(0), table);
        case ExprKind::Add:
            return to_rational_function(e.arg(0), table) + to_rational_function(e.arg(1), table);
        case ExprKind::Sub:
            return to_rational_function(e.arg(0), table) - to_rational_function(e.arg(1), table);
        case ExprKind::Mul:
            return to_rational_function(e.arg(0), table) * to_rational_function(e.arg(1), table);
        case ExprKind::Div: {
            if (e.is_canonical()) {
                RationalFunction num = to_rational_function(e.arg(0), table);
                RationalFunction den = to_rational_function(e.arg(1), table);
                return RationalFunction::from_coprime(num.numerator(), den.numerator());
            }
            RationalFunction den = to_rational_function(e.arg(1), table);
            if (den.is_zero()) {
                throw EvalError("denominator " + to_string(e.arg(1)) + " is identically zero");
            }
            return to_rational_function(e.arg(0), table) / den;
        }
        case ExprKind::Pow:
            return to_rational_function(e.arg(0), table).pow(e.exponent());
    }
    return RationalFunction(n);
}

Expr monomial_factor(const AtomTable& table, const Monomial& m, std::size_t i) {
    return pow(table.atom(i), m[i]);
}

// Term c * monomial, built so that printing and re-parsing reproduces it.
Expr build_term(const AtomTable& table, const Monomial& m, const Rational& c) {
    std::vector<Expr> factors;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] > 0) factors.push_back(monomial_factor(table, m, i));
    }
    if (factors.empty()) return Expr(c);
    Expr acc;
    std::size_t start = 0;
    if (c == 1) {
        acc = factors[0];
        start = 1;
    } else if (c == -1) {
        acc = -factors[0];
        start = 1;
    } else {
        acc = Expr(c);
    }
    for (std::size_t i = start; i < factors.size(); ++i) acc = acc * factors[i];
    return acc;
}

Expr build_polynomial(const AtomTable& table, const Polynomial& p) {
    if (p.is_zero()) return Expr();
    Expr acc;
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        if (first) {
            acc = build_term(table, m, c);
            first = false;
        } else if (c < 0) {
            acc = acc - build_term(table, m, -c);
        } else {
            acc = acc + build_term(table, m, c);
        }
    }
    return acc;
}

}  // namespace

Expr normalize(const Expr& e) {
    if (e.is_canonical()) return e;
    AtomTable table(e);
    RationalFunction rf = to_rational_function(e, table);
    Expr out = build_polynomial(table, rf.numerator());
    if (!rf.denominator().is_constant()) out = out / build_polynomial(table, rf.denominator());
    out.mark_canonical();
    return out;
}

const char* to_string(ZeroTest z) {
    switch (z) {
        case ZeroTest::Zero:
            return "zero";
        case ZeroTest::NonZero:
            return "nonzero";
        case ZeroTest::Unknown:
            return "unknown";
    }
    return "unknown";
}

ZeroTest is_zero(const Expr& e, const ZeroTestOptions& options) {
    if (e.is_constant()) return e.value() == 0 ? ZeroTest::Zero : ZeroTest::NonZero;
    {
        AtomTable table(e);
        RationalFunction rf = to_rational_function(e, table);
        if (rf.is_zero()) return ZeroTest::Zero;
        if (is_rational_fragment(e)) return ZeroTest::NonZero;
    }

    const std::set<std::string> names = free_variables(e);
    const std::vector<std::string> vars(names.begin(), names.end());
    const CompiledExpr program(e, vars);

    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<long> num(-options.max_component, options.max_component);
    std::uniform_int_distribution<long> den(1, options.max_component);

    std::vector<double> x(vars.size());
    int small = 0;
    int large = 0;
    const int max_attempts = 10 * options.samples;
    for (int attempt = 0; attempt < max_attempts && small + large < options.samples; ++attempt) {
        for (double& xi : x) xi = static_cast<double>(num(rng)) / static_cast<double>(den(rng));
        double scale = 0.0;
        const double v = program.evaluate_with_scale(x, scale);
        if (!std::isfinite(v) || !std::isfinite(scale)) continue;
        if (std::abs(v) <= options.tolerance * std::max(1.0, scale)) {
            ++small;
        } else {
            ++large;
        }
    }
    if (small + large < options.samples) return ZeroTest::Unknown;
    if (large == 0) return ZeroTest::Zero;
    if (small == 0) return ZeroTest::NonZero;
    return ZeroTest::Unknown;
}

}  // namespace derham
