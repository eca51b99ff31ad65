#include "derham/periods.hpp"

#include "derham/error.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace derham {

std::vector<std::string> simplex_coordinates(std::size_t k) {
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= k; ++i) out.push_back("t" + std::to_string(i));
    return out;
}

namespace {

std::vector<Expr> normalized(std::vector<Expr> comps) {
    for (auto& c : comps) c = normalize(c);
    return comps;
}

std::string join_coords(const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
    return out;
}

}  // namespace

SmoothSimplex::SmoothSimplex(std::size_t degree, std::vector<std::string> target, std::vector<Expr> components)
    : degree_(degree), map_(simplex_coordinates(degree), std::move(target), normalized(std::move(components))) {
    key_ = std::to_string(degree_) + "|" + join_coords(map_.target()) + "|";
    for (std::size_t i = 0; i < map_.components().size(); ++i) {
        key_ += (i ? ";" : "") + to_string(map_.components()[i]);
        compiled_.emplace_back(map_.components()[i], map_.source());
    }
}

SmoothSimplex SmoothSimplex::affine(std::vector<std::string> target, const std::vector<std::vector<Rational>>& vertices) {
    if (vertices.empty()) throw ValidationError("affine simplex needs at least one vertex");
    const std::size_t k = vertices.size() - 1;
    const auto t = simplex_coordinates(k);
    std::vector<Expr> comps;
    for (std::size_t j = 0; j < target.size(); ++j) {
        Expr c(vertices[0].at(j));
        for (std::size_t i = 1; i <= k; ++i) {
            if (vertices[i].size() != target.size()) throw ValidationError("affine vertex has the wrong dimension");
            c = c + Expr(vertices[i][j] - vertices[0][j]) * Expr::variable(t[i - 1]);
        }
        comps.push_back(c);
    }
    return SmoothSimplex(k, std::move(target), std::move(comps));
}

std::vector<double> SmoothSimplex::evaluate(std::span<const double> t) const {
    std::vector<double> out;
    for (const auto& c : compiled_) out.push_back(c(t));
    return out;
}

SmoothSimplex compose(const SmoothMap& f, const SmoothSimplex& s) {
    if (f.source() != s.target()) throw ValidationError("map source does not match the simplex target");
    const auto sub = s.map().substitution();
    std::vector<Expr> comps;
    for (const auto& c : f.components()) comps.push_back(substitute(c, sub));
    return SmoothSimplex(s.degree(), f.target(), comps);
}

void SingularChain::add(const Rational& c, const SmoothSimplex& s) {
    if (s.degree() != degree_) throw ValidationError("chain has degree " + std::to_string(degree_) + ", simplex " + std::to_string(s.degree()));
    if (s.target() != target_) throw ValidationError("simplex target coordinates differ from the chain's");
    if (c == 0) return;
    for (auto it = terms_.begin(); it != terms_.end(); ++it) {
        if (it->second.key() == s.key()) {
            it->first += c;
            if (it->first == 0) terms_.erase(it);
            return;
        }
    }
    terms_.emplace_back(c, s);
}

SingularChain SingularChain::scaled(const Rational& c) const {
    SingularChain out(degree_, target_);
    for (const auto& [a, s] : terms_) out.add(a * c, s);
    return out;
}

SingularChain operator+(const SingularChain& a, const SingularChain& b) {
    SingularChain out = a;
    for (const auto& [c, s] : b.terms_) out.add(c, s);
    return out;
}

namespace {

// Point coordinates, reduced to the fundamental domain when a lattice is given.
std::vector<double> reduced_point(const SmoothSimplex& s, const Lattice* lattice) {
    std::vector<double> x = s.evaluate({});
    if (!lattice) return x;
    const std::size_t n = x.size();
    if (lattice->basis.size() != n) throw ValidationError("lattice needs one period vector per coordinate");
    Eigen::MatrixXd b(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        if (lattice->basis[j].size() != n) throw ValidationError("lattice vector has the wrong dimension");
        for (std::size_t i = 0; i < n; ++i) b(static_cast<long>(i), static_cast<long>(j)) = to_double(lattice->basis[j][i]);
    }
    Eigen::VectorXd v(n);
    for (std::size_t i = 0; i < n; ++i) v(static_cast<long>(i)) = x[i];
    Eigen::VectorXd u = b.fullPivLu().solve(v);
    for (long i = 0; i < u.size(); ++i) {
        u(i) -= std::floor(u(i));
        if (u(i) > 1.0 - 1e-10) u(i) = 0.0;
    }
    Eigen::VectorXd r = b * u;
    for (std::size_t i = 0; i < n; ++i) x[i] = r(static_cast<long>(i));
    return x;
}

bool same_point(const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i] - b[i]) > 1e-10 * std::max(1.0, std::abs(a[i]))) return false;
    }
    return true;
}

}  // namespace

SingularChain SingularChain::simplified(const Lattice* lattice) const {
    if (degree_ != 0) return *this;
    std::vector<std::pair<Rational, std::vector<double>>> groups;
    std::vector<std::size_t> owner;
    for (const auto& [c, s] : terms_) {
        const auto x = reduced_point(s, lattice);
        std::size_t g = 0;
        while (g < groups.size() && !same_point(groups[g].second, x)) ++g;
        if (g == groups.size()) groups.emplace_back(0, x);
        groups[g].first += c;
        owner.push_back(g);
    }
    SingularChain out(degree_, target_);
    std::vector<bool> emitted(groups.size(), false);
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        const std::size_t g = owner[i];
        if (emitted[g]) continue;
        emitted[g] = true;
        out.add(groups[g].first, terms_[i].second);
    }
    return out;
}

std::string to_string(const SmoothSimplex& s) {
    std::string out = "σ(" + join_coords(simplex_coordinates(s.degree())) + ") = (";
    for (std::size_t i = 0; i < s.components().size(); ++i) out += (i ? ", " : "") + to_string(s.components()[i]);
    return out + ")";
}

std::string to_string(const SingularChain& c) {
    if (c.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < c.terms().size(); ++i) {
        const auto& [coef, s] = c.terms()[i];
        out += (i ? " + " : "") + to_string(coef) + "·" + to_string(s);
    }
    return out;
}

SingularChain boundary(const SmoothSimplex& s) {
    const std::size_t k = s.degree();
    if (k == 0) throw ValidationError("a point has no boundary");
    const auto t = simplex_coordinates(k);
    const auto sv = simplex_coordinates(k - 1);
    SingularChain out(k - 1, s.target());
    for (std::size_t i = 0; i <= k; ++i) {
        std::map<std::string, Expr> face;
        if (i == 0) {
            Expr rest(1);
            for (const auto& name : sv) rest = rest - Expr::variable(name);
            face[t[0]] = rest;
            for (std::size_t j = 1; j < k; ++j) face[t[j]] = Expr::variable(sv[j - 1]);
        } else {
            for (std::size_t m = 1; m <= k; ++m) {
                if (m < i) face[t[m - 1]] = Expr::variable(sv[m - 1]);
                else if (m == i) face[t[m - 1]] = Expr(0);
                else face[t[m - 1]] = Expr::variable(sv[m - 2]);
            }
        }
        std::vector<Expr> comps;
        for (const auto& c : s.components()) comps.push_back(substitute(c, face));
        out.add(Rational(i % 2 ? -1 : 1), SmoothSimplex(k - 1, s.target(), comps));
    }
    return out;
}

SingularChain boundary(const SingularChain& c) {
    if (c.degree() == 0) throw ValidationError("a 0-chain has no boundary");
    SingularChain out(c.degree() - 1, c.target());
    for (const auto& [coef, s] : c.terms()) out = out + boundary(s).scaled(coef);
    return out;
}

bool is_cycle(const SingularChain& c, const Lattice* lattice) {
    if (c.degree() == 0) return true;
    return boundary(c).simplified(lattice).empty();
}

namespace {

void check_form_on_simplex(const DifferentialForm& w, const SmoothSimplex& s) {
    if (w.degree() != static_cast<int>(s.degree())) {
        throw ValidationError("form of degree " + std::to_string(w.degree()) + " cannot be integrated over a " +
                              std::to_string(s.degree()) + "-simplex");
    }
    if (w.coords() != s.target()) {
        throw ValidationError("form coordinates (" + join_coords(w.coords()) + ") differ from the simplex target (" +
                              join_coords(s.target()) + ")");
    }
}

// Guard sample points on Δ_k: a dyadic grid (so singularities at simple parameter values are hit
// exactly), topped up with uniform random points to `count`.
std::vector<std::vector<double>> guard_samples(std::size_t k, std::size_t count) {
    std::vector<std::vector<double>> out;
    if (k == 0) return {{}};
    std::size_t m = 1;
    auto grid_size = [&](std::size_t mm) {
        // Number of lattice points with Σ i_j <= mm: C(mm + k, k).
        double c = 1;
        for (std::size_t j = 1; j <= k; ++j) c = c * static_cast<double>(mm + j) / static_cast<double>(j);
        return c;
    };
    while (grid_size(2 * m) <= static_cast<double>(count)) m *= 2;
    std::vector<std::size_t> idx(k, 0);
    auto rec = [&](auto&& self, std::size_t j, std::size_t left) -> void {
        if (j == k) {
            std::vector<double> t(k);
            for (std::size_t i = 0; i < k; ++i) t[i] = static_cast<double>(idx[i]) / static_cast<double>(m);
            out.push_back(std::move(t));
            return;
        }
        for (std::size_t x = 0; x <= left; ++x) {
            idx[j] = x;
            self(self, j + 1, left - x);
        }
    };
    rec(rec, 0, m);
    std::mt19937_64 rng(0x5eed);
    std::exponential_distribution<double> expo(1.0);
    while (out.size() < count) {
        double total = 0.0;
        std::vector<double> e(k + 1);
        for (auto& x : e) total += (x = expo(rng));
        std::vector<double> t(k);
        for (std::size_t i = 0; i < k; ++i) t[i] = e[i] / total;
        out.push_back(std::move(t));
    }
    return out;
}

// The form's coefficients must be finite along σ at every guard sample.
void guard_singularities(const DifferentialForm& w, const SmoothSimplex& s, const CompiledExpr& integrand) {
    const std::size_t k = s.degree();
    std::vector<CompiledExpr> coeffs;
    for (const auto& [idx, c] : w.terms()) coeffs.emplace_back(c, w.coords());
    for (const auto& t : guard_samples(k, 1000)) {
        const std::vector<double> x = s.evaluate(t);
        bool ok = std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
        for (std::size_t i = 0; ok && i < coeffs.size(); ++i) {
            const double v = coeffs[i](x);
            ok = std::isfinite(v) && std::abs(v) < 1e12;
        }
        ok = ok && std::isfinite(integrand(t));
        if (!ok) {
            std::ostringstream msg;
            msg << "form is singular on the image of " << to_string(s) << " near t = (";
            for (std::size_t i = 0; i < k; ++i) msg << (i ? ", " : "") << t[i];
            msg << ")";
            throw EvalError(msg.str());
        }
    }
}

}  // namespace

Integral integrate(const DifferentialForm& w, const SmoothSimplex& s, const QuadratureSpec& q) {
    check_form_on_simplex(w, s);
    const std::size_t k = s.degree();
    const DifferentialForm pulled = pullback(s.map(), w);
    MultiIndex top;
    for (std::size_t i = 1; i <= k; ++i) top.push_back(static_cast<int>(i));
    const CompiledExpr integrand(pulled.coefficient(top), s.map().source());
    guard_singularities(w, s, integrand);
    return integrate_simplex([&](std::span<const double> t) { return integrand(t); }, k, q);
}

Integral integrate_chain(const DifferentialForm& w, const SingularChain& c, const QuadratureSpec& q) {
    Integral total;
    const SingularChain simple = c.simplified();
    for (const auto& [coef, s] : simple.terms()) {
        const Integral part = integrate(w, s, q);
        const double weight = to_double(coef);
        total.value += weight * part.value;
        total.error += std::abs(weight) * part.error;
        total.depth = std::max(total.depth, part.depth);
    }
    return total;
}

double stokes_residual(const DifferentialForm& w, const SingularChain& c, const QuadratureSpec& q) {
    if (w.degree() + 1 != static_cast<int>(c.degree())) {
        throw ValidationError("Stokes check needs deg w = deg c - 1");
    }
    const double lhs = integrate_chain(w, boundary(c), q).value;
    const double rhs = integrate_chain(d(w), c, q).value;
    return std::abs(lhs - rhs);
}

double naturality_check(const SmoothMap& f, const DifferentialForm& w, const SmoothSimplex& s, const QuadratureSpec& q) {
    const double lhs = integrate(pullback(f, w), s, q).value;
    const double rhs = integrate(w, compose(f, s), q).value;
    return std::abs(lhs - rhs);
}

std::size_t numerical_rank(const std::vector<std::vector<double>>& m, double tolerance,
                           std::vector<double>* singular_values, double* threshold) {
    const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
    if (rows == 0 || cols == 0) {
        if (singular_values) singular_values->clear();
        if (threshold) *threshold = 0.0;
        return 0;
    }
    Eigen::MatrixXd a(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) a(static_cast<long>(i), static_cast<long>(j)) = m[i][j];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const Eigen::VectorXd sv = svd.singularValues();
    const double cut = tolerance * (sv.size() ? sv(0) : 0.0) * static_cast<double>(std::max(rows, cols));
    std::size_t r = 0;
    for (long i = 0; i < sv.size(); ++i) {
        if (sv(i) > cut) ++r;
    }
    if (singular_values) singular_values->assign(sv.data(), sv.data() + sv.size());
    if (threshold) *threshold = cut;
    return r;
}

namespace {

Rational grid_rational(double x) { return Rational(static_cast<long>(std::llround(x * 1024.0)), 1024); }

// Coefficient for the exact perturbation dη: polynomial, or lattice-periodic on a torus.
Expr eta_coefficient(const std::vector<std::string>& coords, const std::optional<Lattice>& lattice) {
    const std::size_t n = coords.size();
    if (!lattice) {
        const Expr x1 = Expr::variable(coords[0]), xn = Expr::variable(coords[n - 1]);
        return x1 * xn + pow(x1, 2) / Expr(2);
    }
    Eigen::MatrixXd b(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) b(static_cast<long>(i), static_cast<long>(j)) = to_double(lattice->basis[j][i]);
    const Eigen::MatrixXd inv = b.inverse();
    // Dual coordinates u = B^{-1} x; periodic under the lattice. Exact when B^{-1} is dyadic.
    auto dual = [&](std::size_t row) {
        Expr u(0);
        for (std::size_t j = 0; j < n; ++j) u = u + Expr(grid_rational(inv(static_cast<long>(row), static_cast<long>(j)))) * Expr::variable(coords[j]);
        return u;
    };
    return sin(Expr(2) * Expr::pi() * dual(0)) + cos(Expr(2) * Expr::pi() * dual(n - 1));
}

}  // namespace

PeriodReport period_matrix(const std::vector<DifferentialForm>& forms, const std::vector<SingularChain>& cycles,
                           const QuadratureSpec& q, const PeriodOptions& options) {
    const Lattice* lattice = options.lattice ? &*options.lattice : nullptr;
    for (std::size_t i = 0; i < forms.size(); ++i) {
        const ZeroTest closed = is_closed(forms[i], options.zero_test);
        if (closed != ZeroTest::Zero) {
            throw ValidationError("form " + std::to_string(i) + " is not closed (closedness test: " + to_string(closed) + ")");
        }
    }
    for (std::size_t j = 0; j < cycles.size(); ++j) {
        if (!is_cycle(cycles[j], lattice)) throw ValidationError("chain " + std::to_string(j) + " is not a cycle");
    }
    PeriodReport r;
    for (const auto& w : forms) {
        std::vector<double> row;
        for (const auto& c : cycles) row.push_back(integrate_chain(w, c, q).value);
        r.matrix.push_back(std::move(row));
    }
    r.rank = numerical_rank(r.matrix, q.tolerance, &r.singular_values, &r.rank_threshold);
    if (!options.perturbation_checks || forms.empty() || cycles.empty()) return r;

    const double allowed = q.tolerance;
    // Cycle side: c + ∂p for a small affine (k+1)-simplex p at a point of the cycle.
    for (std::size_t j = 0; j < cycles.size(); ++j) {
        const SingularChain& c = cycles[j];
        const std::size_t k = c.degree();
        const std::size_t n = c.target().size();
        if (c.empty() || k + 1 > n) continue;
        const SmoothSimplex& first = c.terms().front().second;
        const std::vector<double> t(k, 1.0 / static_cast<double>(k + 1));
        const std::vector<double> x0 = first.evaluate(t);
        for (int h_exp : {2, 4, 6}) {
            const Rational h(1, 1 << h_exp);
            std::vector<std::vector<Rational>> verts;
            std::vector<Rational> base;
            for (double x : x0) base.push_back(grid_rational(x));
            verts.push_back(base);
            for (std::size_t i = 0; i <= k; ++i) {
                auto v = base;
                v[i] += h;
                verts.push_back(v);
            }
            const SingularChain shifted = c + boundary(SmoothSimplex::affine(c.target(), verts));
            try {
                double worst = 0.0;
                for (std::size_t i = 0; i < forms.size(); ++i) {
                    worst = std::max(worst, std::abs(integrate_chain(forms[i], shifted, q).value - r.matrix[i][j]));
                }
                r.cycle_perturbation = std::max(r.cycle_perturbation.value_or(0.0), worst);
                break;
            } catch (const EvalError&) {
                // p meets a singularity; try a smaller one.
            }
        }
    }
    // Form side: ω + dη with η a fixed (k-1)-form.
    for (std::size_t i = 0; i < forms.size(); ++i) {
        const DifferentialForm& w = forms[i];
        if (w.degree() == 0 || w.dimension() == 0) continue;
        MultiIndex idx;
        for (int m = 1; m < w.degree(); ++m) idx.push_back(m);
        DifferentialForm eta(w.coords(), w.degree() - 1);
        eta.add_term(idx, eta_coefficient(w.coords(), options.lattice));
        const DifferentialForm shifted = w + d(eta);
        double worst = 0.0;
        for (std::size_t j = 0; j < cycles.size(); ++j) {
            worst = std::max(worst, std::abs(integrate_chain(shifted, cycles[j], q).value - r.matrix[i][j]));
        }
        r.form_perturbation = std::max(r.form_perturbation.value_or(0.0), worst);
    }
    r.perturbation_ok = r.cycle_perturbation.value_or(0.0) < allowed && r.form_perturbation.value_or(0.0) < allowed;
    return r;
}

}  // namespace derham
