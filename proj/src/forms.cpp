#include "derham/forms.hpp"

#include "derham/error.hpp"

#include <algorithm>

namespace derham {

namespace {

std::string join(const std::vector<std::string>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
    return s + ")";
}

void check_coordinates(const std::vector<std::string>& coords) {
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (coords[i].empty()) throw ValidationError("empty coordinate name");
        if (coords[i] == "pi") throw ValidationError("'pi' is reserved and cannot be a coordinate");
        for (std::size_t j = 0; j < i; ++j) {
            if (coords[i] == coords[j]) throw ValidationError("duplicate coordinate '" + coords[i] + "'");
        }
    }
}

void check_free_variables(const Expr& e, const std::vector<std::string>& coords, const char* what) {
    for (const auto& v : free_variables(e)) {
        if (std::find(coords.begin(), coords.end(), v) == coords.end()) {
            throw ValidationError(std::string(what) + " mentions '" + v + "', which is not among coordinates " +
                                  join(coords));
        }
    }
}

// Sign of the shuffle that sorts the concatenation I J, given disjoint I and J.
int shuffle_sign(const MultiIndex& a, const MultiIndex& b) {
    std::size_t inversions = 0;
    for (int i : a) {
        for (int j : b) {
            if (i > j) ++inversions;
        }
    }
    return inversions % 2 ? -1 : 1;
}

// Splits a leading minus sign off a coefficient for display.
bool strip_sign(const Expr& e, Expr& magnitude) {
    if (e.kind() == ExprKind::Neg) {
        magnitude = e.arg(0);
        return true;
    }
    if (e.is_constant() && e.value() < 0) {
        magnitude = Expr(-e.value());
        return true;
    }
    if (e.kind() == ExprKind::Mul || e.kind() == ExprKind::Div) {
        Expr left;
        if (strip_sign(e.arg(0), left)) {
            magnitude = e.kind() == ExprKind::Mul ? left * e.arg(1) : left / e.arg(1);
            return true;
        }
    }
    magnitude = e;
    return false;
}

}  // namespace

DifferentialForm::DifferentialForm(std::vector<std::string> coords, int degree)
    : coords_(std::move(coords)), degree_(degree) {
    check_coordinates(coords_);
    if (degree_ < 0) throw ValidationError("negative form degree");
}

DifferentialForm DifferentialForm::function(std::vector<std::string> coords, const Expr& f) {
    DifferentialForm w(std::move(coords), 0);
    w.add_term({}, f);
    return w;
}

DifferentialForm DifferentialForm::monomial(std::vector<std::string> coords, const MultiIndex& index, const Expr& c) {
    DifferentialForm w(std::move(coords), static_cast<int>(index.size()));
    w.add_term(index, c);
    return w;
}

Expr DifferentialForm::coefficient(const MultiIndex& index) const {
    auto it = terms_.find(index);
    return it == terms_.end() ? Expr() : it->second;
}

void DifferentialForm::add_term(const MultiIndex& index, const Expr& c) {
    if (static_cast<int>(index.size()) != degree_) {
        throw ValidationError("multi-index of length " + std::to_string(index.size()) + " in a " +
                              std::to_string(degree_) + "-form");
    }
    for (std::size_t i = 0; i < index.size(); ++i) {
        if (index[i] < 1 || index[i] > dimension()) {
            throw ValidationError("multi-index entry " + std::to_string(index[i]) + " outside 1.." +
                                  std::to_string(dimension()));
        }
        if (i > 0 && index[i] <= index[i - 1]) throw ValidationError("multi-index is not strictly increasing");
    }
    check_free_variables(c, coords_, "coefficient");
    auto it = terms_.find(index);
    Expr sum = normalize(it == terms_.end() ? c : it->second + c);
    if (sum.is_constant(0)) {
        if (it != terms_.end()) terms_.erase(it);
    } else if (it == terms_.end()) {
        terms_.emplace(index, std::move(sum));
    } else {
        it->second = std::move(sum);
    }
}

void DifferentialForm::require_same_space(const DifferentialForm& o, const char* op) const {
    if (coords_ != o.coords_) {
        throw ValidationError(std::string(op) + ": ambient coordinates differ: " + join(coords_) + " vs " +
                              join(o.coords_));
    }
    if (degree_ != o.degree_) throw ValidationError(std::string(op) + ": degrees differ");
}

DifferentialForm DifferentialForm::operator-() const {
    DifferentialForm out(coords_, degree_);
    for (const auto& [i, c] : terms_) out.terms_.emplace(i, normalize(-c));
    return out;
}

DifferentialForm& DifferentialForm::operator+=(const DifferentialForm& o) {
    require_same_space(o, "sum");
    for (const auto& [i, c] : o.terms_) add_term(i, c);
    return *this;
}

DifferentialForm& DifferentialForm::operator-=(const DifferentialForm& o) {
    require_same_space(o, "difference");
    for (const auto& [i, c] : o.terms_) add_term(i, -c);
    return *this;
}

DifferentialForm DifferentialForm::scaled(const Expr& f) const {
    DifferentialForm out(coords_, degree_);
    for (const auto& [i, c] : terms_) out.add_term(i, f * c);
    return out;
}

std::string to_string(const DifferentialForm& w) {
    if (w.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [index, c] : w.terms()) {
        Expr coeff;
        const bool negative = strip_sign(c, coeff);
        if (first) {
            if (negative) out += "-";
        } else {
            out += negative ? " - " : " + ";
        }
        first = false;

        std::string basis;
        for (std::size_t k = 0; k < index.size(); ++k) {
            if (k) basis += "∧";
            basis += "d" + w.coords()[static_cast<std::size_t>(index[k] - 1)];
        }
        if (basis.empty()) {
            out += to_string(coeff);
            continue;
        }
        if (!coeff.is_constant(1)) {
            std::string text = to_string(coeff);
            const bool sum = coeff.kind() == ExprKind::Add || coeff.kind() == ExprKind::Sub ||
                             coeff.kind() == ExprKind::Div;
            out += sum ? "(" + text + ")" : text;
            out += " ";
        }
        out += basis;
    }
    return out;
}

SmoothMap::SmoothMap(std::vector<std::string> source, std::vector<std::string> target, std::vector<Expr> components)
    : source_(std::move(source)), target_(std::move(target)), components_(std::move(components)) {
    check_coordinates(source_);
    check_coordinates(target_);
    if (components_.size() != target_.size()) {
        throw ValidationError("smooth map has " + std::to_string(components_.size()) + " components for " +
                              std::to_string(target_.size()) + " target coordinates");
    }
    for (const Expr& c : components_) check_free_variables(c, source_, "map component");
}

SmoothMap SmoothMap::identity(const std::vector<std::string>& coords) {
    std::vector<Expr> comps;
    for (const auto& c : coords) comps.push_back(Expr::variable(c));
    return SmoothMap(coords, coords, std::move(comps));
}

std::map<std::string, Expr> SmoothMap::substitution() const {
    std::map<std::string, Expr> out;
    for (std::size_t i = 0; i < target_.size(); ++i) out.emplace(target_[i], components_[i]);
    return out;
}

SmoothMap compose(const SmoothMap& outer, const SmoothMap& inner) {
    if (inner.target() != outer.source()) {
        throw ValidationError("compose: inner target " + join(inner.target()) + " differs from outer source " +
                              join(outer.source()));
    }
    const auto subst = inner.substitution();
    std::vector<Expr> comps;
    for (const Expr& c : outer.components()) comps.push_back(normalize(substitute(c, subst)));
    return SmoothMap(inner.source(), outer.target(), std::move(comps));
}

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b) {
    if (a.coords() != b.coords()) {
        throw ValidationError("wedge: ambient coordinates differ: " + join(a.coords()) + " vs " + join(b.coords()));
    }
    DifferentialForm out(a.coords(), a.degree() + b.degree());
    for (const auto& [i, f] : a.terms()) {
        for (const auto& [j, g] : b.terms()) {
            MultiIndex merged;
            std::set_union(i.begin(), i.end(), j.begin(), j.end(), std::back_inserter(merged));
            if (merged.size() != i.size() + j.size()) continue;  // repeated dx_k
            out.add_term(merged, Expr(shuffle_sign(i, j)) * f * g);
        }
    }
    return out;
}

DifferentialForm d(const DifferentialForm& w) {
    DifferentialForm out(w.coords(), w.degree() + 1);
    for (const auto& [index, f] : w.terms()) {
        for (int k = 1; k <= w.dimension(); ++k) {
            if (std::find(index.begin(), index.end(), k) != index.end()) continue;
            Expr partial = diff(f, w.coords()[static_cast<std::size_t>(k - 1)]);
            if (partial.is_constant(0)) continue;
            // dx_k moves left past every index smaller than k.
            auto pos = std::lower_bound(index.begin(), index.end(), k);
            const auto passed = pos - index.begin();
            MultiIndex merged(index.begin(), index.end());
            merged.insert(merged.begin() + passed, k);
            out.add_term(merged, passed % 2 ? -partial : partial);
        }
    }
    return out;
}

DifferentialForm pullback(const SmoothMap& f, const DifferentialForm& w) {
    if (w.coords() != f.target()) {
        throw ValidationError("pullback: form coordinates " + join(w.coords()) + " differ from map target " +
                              join(f.target()));
    }
    const auto subst = f.substitution();
    std::vector<DifferentialForm> differentials;
    for (const Expr& c : f.components()) differentials.push_back(d(DifferentialForm::function(f.source(), c)));

    DifferentialForm out(f.source(), w.degree());
    for (const auto& [index, g] : w.terms()) {
        DifferentialForm term = DifferentialForm::function(f.source(), substitute(g, subst));
        for (int k : index) {
            term = wedge(term, differentials[static_cast<std::size_t>(k - 1)]);
            if (term.is_zero()) break;
        }
        if (term.degree() == out.degree()) out += term;
    }
    return out;
}

ZeroTest all_coefficients_zero(const DifferentialForm& w, const ZeroTestOptions& options) {
    ZeroTest verdict = ZeroTest::Zero;
    for (const auto& [index, c] : w.terms()) {
        ZeroTest z = is_zero(c, options);
        if (z == ZeroTest::NonZero) return ZeroTest::NonZero;
        if (z == ZeroTest::Unknown) verdict = ZeroTest::Unknown;
    }
    return verdict;
}

ZeroTest is_closed(const DifferentialForm& w, const ZeroTestOptions& options) {
    return all_coefficients_zero(d(w), options);
}

ZeroTest check_exact_witness(const DifferentialForm& w, const DifferentialForm& tau, const ZeroTestOptions& options) {
    if (tau.degree() + 1 != w.degree()) {
        throw ValidationError("exactness witness must have degree " + std::to_string(w.degree() - 1) + ", got " +
                              std::to_string(tau.degree()));
    }
    if (tau.coords() != w.coords()) throw ValidationError("exactness witness lives on different coordinates");
    return all_coefficients_zero(w - d(tau), options);
}

}  // namespace derham
