#include "derham/quadrature.hpp"

#include "derham/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace derham {

void validate(const QuadratureSpec& q) {
    if (q.order < 0) throw ValidationError("quadrature order must be nonnegative");
    if (q.max_depth < 1) throw ValidationError("quadrature depth must be positive");
    if (!(q.tolerance > 0.0)) throw ValidationError("quadrature tolerance must be positive");
    if (q.budget == 0) throw ValidationError("quadrature budget must be positive");
}

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// All compositions of `total` into `parts` nonnegative integers.
void compositions(int total, std::size_t parts, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (cur.size() + 1 == parts) {
        cur.push_back(total);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int x = 0; x <= total; ++x) {
        cur.push_back(x);
        compositions(total - x, parts, cur, out);
        cur.pop_back();
    }
}

// A piece of the level-m subdivision, as k+1 vertices in t coordinates.
using Piece = std::vector<std::vector<double>>;

// Kuhn subdivision: Δ_k is the image of {1 >= u_1 >= ... >= u_k >= 0} under t_j = u_j - u_{j+1}.
// Each grid cube c/m + [0,1/m]^k splits into simplices ordered by a permutation; those inside the
// ordered region are kept. There are m^k of them, all of volume 1/(k! m^k).
template <class Visit>
void for_each_piece(std::size_t k, std::size_t m, Visit&& visit) {
    std::vector<std::size_t> c(k, 0);
    std::vector<std::size_t> perm(k);
    Piece piece(k + 1, std::vector<double>(k));
    std::vector<double> u(k);
    auto emit = [&] {
        std::iota(perm.begin(), perm.end(), 0);
        do {
            std::vector<std::size_t> pos(k);
            for (std::size_t i = 0; i < k; ++i) pos[perm[i]] = i;
            bool inside = true;
            for (std::size_t j = 0; j + 1 < k && inside; ++j) {
                inside = c[j] > c[j + 1] || (c[j] == c[j + 1] && pos[j] < pos[j + 1]);
            }
            if (!inside) continue;
            std::vector<std::size_t> v(c);
            for (std::size_t i = 0; i <= k; ++i) {
                if (i > 0) ++v[perm[i - 1]];
                for (std::size_t j = 0; j < k; ++j) u[j] = static_cast<double>(v[j]) / static_cast<double>(m);
                for (std::size_t j = 0; j < k; ++j) piece[i][j] = u[j] - (j + 1 < k ? u[j + 1] : 0.0);
            }
            visit(piece);
        } while (std::next_permutation(perm.begin(), perm.end()));
    };
    // Nonincreasing c only; others contain no piece.
    auto rec = [&](auto&& self, std::size_t j, std::size_t upper) -> void {
        if (j == k) {
            emit();
            return;
        }
        for (std::size_t x = 0; x <= upper; ++x) {
            c[j] = x;
            self(self, j + 1, x);
        }
    };
    rec(rec, 0, m - 1);
}

}  // namespace

std::vector<QuadratureNode> grundmann_moller(std::size_t k, int s) {
    const int n = static_cast<int>(k);
    const int d = 2 * s + 1;
    std::vector<QuadratureNode> nodes;
    for (int i = 0; i <= s; ++i) {
        const double denom = d + n - 2 * i;
        const double w = (i % 2 ? -1.0 : 1.0) * std::pow(2.0, -2 * s) * std::pow(denom, d) /
                         (factorial(i) * factorial(d + n - i));
        std::vector<std::vector<int>> betas;
        std::vector<int> cur;
        compositions(s - i, k + 1, cur, betas);
        for (const auto& beta : betas) {
            QuadratureNode node{w, std::vector<double>(k + 1)};
            for (std::size_t j = 0; j <= k; ++j) node.barycentric[j] = (2.0 * beta[j] + 1.0) / denom;
            nodes.push_back(std::move(node));
        }
    }
    return nodes;
}

Integral integrate_simplex(const std::function<double(std::span<const double>)>& f, std::size_t k,
                           const QuadratureSpec& q) {
    validate(q);
    if (k == 0) {
        const double v = f({});
        if (!std::isfinite(v)) throw EvalError("integrand is not finite at the point");
        return {v, 0.0, 0};
    }
    const std::vector<QuadratureNode> rule = grundmann_moller(k, q.order);
    std::vector<double> t(k);
    double previous = 0.0;
    double last_change = std::numeric_limits<double>::infinity();
    for (int level = 0; level <= q.max_depth; ++level) {
        const std::size_t m = std::size_t{1} << level;
        double pieces = 1.0;
        for (std::size_t i = 0; i < k; ++i) pieces *= static_cast<double>(m);
        if (pieces * static_cast<double>(rule.size()) > static_cast<double>(q.budget)) {
            std::ostringstream msg;
            msg << "quadrature did not reach tolerance " << q.tolerance << " within the evaluation budget (level "
                << level << ", last change " << last_change << ")";
            throw ConvergenceError(msg.str());
        }
        const double scale = 1.0 / pieces;
        double total = 0.0;
        for_each_piece(k, m, [&](const Piece& piece) {
            double local = 0.0;
            for (const auto& node : rule) {
                std::fill(t.begin(), t.end(), 0.0);
                for (std::size_t i = 0; i <= k; ++i)
                    for (std::size_t j = 0; j < k; ++j) t[j] += node.barycentric[i] * piece[i][j];
                const double v = f(t);
                if (!std::isfinite(v)) {
                    std::ostringstream msg;
                    msg << "integrand is not finite at t = (";
                    for (std::size_t j = 0; j < k; ++j) msg << (j ? ", " : "") << t[j];
                    msg << ")";
                    throw EvalError(msg.str());
                }
                local += node.weight * v;
            }
            total += local * scale;
        });
        if (level >= 1) last_change = std::abs(total - previous);
        if (level >= 2 && last_change < q.tolerance / 2) return {total, last_change, level};
        previous = total;
    }
    throw ConvergenceError("quadrature did not reach tolerance " + std::to_string(q.tolerance) + " by depth " +
                           std::to_string(q.max_depth));
}

}  // namespace derham
