#include "derham/random.hpp"

#include <algorithm>
#include <set>

namespace derham::gen {

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Rational small_rational(Rng& rng, int range) {
    const int p = uniform_int(rng, -range, range);
    const int q = uniform_int(rng, 1, 3);
    return Rational(p, q);
}

Expr random_polynomial(Rng& rng, const std::vector<std::string>& vars, int degree, int terms) {
    Expr acc;
    for (int t = 0; t < terms; ++t) {
        Expr term(small_rational(rng));
        const int deg = uniform_int(rng, 0, degree);
        for (int k = 0; k < deg && !vars.empty(); ++k) {
            term = term * Expr::variable(vars[uniform_int(rng, 0, static_cast<int>(vars.size()) - 1)]);
        }
        acc = acc + term;
    }
    return acc;
}

Expr random_rational_expr(Rng& rng, const std::vector<std::string>& vars, int depth) {
    if (depth <= 0 || uniform_int(rng, 0, 4) == 0) {
        if (vars.empty() || uniform_int(rng, 0, 2) == 0) return Expr(small_rational(rng));
        return Expr::variable(vars[uniform_int(rng, 0, static_cast<int>(vars.size()) - 1)]);
    }
    switch (uniform_int(rng, 0, 6)) {
        case 0:
            return -random_rational_expr(rng, vars, depth - 1);
        case 1:
        case 2:
            return random_rational_expr(rng, vars, depth - 1) + random_rational_expr(rng, vars, depth - 1);
        case 3:
            return random_rational_expr(rng, vars, depth - 1) - random_rational_expr(rng, vars, depth - 1);
        case 4:
            return random_rational_expr(rng, vars, depth - 1) * random_rational_expr(rng, vars, depth - 1);
        case 5: {
            Expr den(1);
            for (const auto& v : vars) {
                if (uniform_int(rng, 0, 1)) den = den + pow(Expr::variable(v), 2);
            }
            return random_rational_expr(rng, vars, depth - 1) / den;
        }
        default:
            return pow(random_rational_expr(rng, vars, depth - 1), static_cast<unsigned>(uniform_int(rng, 2, 3)));
    }
}

Expr random_expr(Rng& rng, const std::vector<std::string>& vars, int depth) {
    if (depth <= 0 || uniform_int(rng, 0, 4) == 0) return random_rational_expr(rng, vars, 1);
    switch (uniform_int(rng, 0, 5)) {
        case 0:
            return sin(random_expr(rng, vars, depth - 1));
        case 1:
            return cos(random_expr(rng, vars, depth - 1));
        case 2:
            return exp(random_rational_expr(rng, vars, 1) / Expr(4));
        case 3:
            return random_expr(rng, vars, depth - 1) * random_expr(rng, vars, depth - 1);
        case 4:
            return random_expr(rng, vars, depth - 1) - random_expr(rng, vars, depth - 1);
        default:
            return random_expr(rng, vars, depth - 1) + random_expr(rng, vars, depth - 1);
    }
}

std::vector<MultiIndex> all_indices(int n, int k) {
    std::vector<MultiIndex> out;
    MultiIndex cur;
    auto rec = [&](auto&& self, int start) -> void {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i <= n; ++i) {
            cur.push_back(i);
            self(self, i + 1);
            cur.pop_back();
        }
    };
    rec(rec, 1);
    return out;
}

DifferentialForm random_form(Rng& rng, const std::vector<std::string>& coords, int k) {
    DifferentialForm w(coords, k);
    for (const auto& index : all_indices(static_cast<int>(coords.size()), k)) {
        if (uniform_int(rng, 0, 2) == 0) continue;
        Expr c = uniform_int(rng, 0, 4) == 0 ? random_rational_expr(rng, coords, 2) : random_polynomial(rng, coords, 3);
        w.add_term(index, c);
    }
    return w;
}

DifferentialForm random_polynomial_form(Rng& rng, const std::vector<std::string>& coords, int k) {
    DifferentialForm w(coords, k);
    for (const auto& idx : all_indices(static_cast<int>(coords.size()), k)) w.add_term(idx, random_polynomial(rng, coords, 3));
    return w;
}

SmoothSimplex random_simplex(Rng& rng, const std::vector<std::string>& target, std::size_t k, bool quadratic) {
    std::vector<std::vector<Rational>> verts(k + 1);
    for (auto& v : verts) {
        for (std::size_t j = 0; j < target.size(); ++j) v.push_back(small_rational(rng, 3));
    }
    SmoothSimplex affine = SmoothSimplex::affine(target, verts);
    if (!quadratic) return affine;
    std::vector<Expr> comps = affine.components();
    const auto t = simplex_coordinates(k);
    for (auto& c : comps) {
        Expr bump(0);
        for (std::size_t i = 0; i < k; ++i) bump = bump + Expr(small_rational(rng, 2)) * pow(Expr::variable(t[i]), 2);
        c = c + bump;
    }
    return SmoothSimplex(k, target, comps);
}

SmoothMap random_polynomial_map(Rng& rng, const std::vector<std::string>& source,
                                const std::vector<std::string>& target, int degree) {
    std::vector<Expr> comps;
    for (std::size_t i = 0; i < target.size(); ++i) comps.push_back(random_polynomial(rng, source, degree));
    return SmoothMap(source, target, comps);
}

RationalMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, int range) {
    RationalMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = Rational(uniform_int(rng, -range, range));
    return m;
}

RationalMatrix random_invertible(Rng& rng, std::size_t n) {
    // Unit lower times upper with nonzero diagonal; then permute rows.
    RationalMatrix l = RationalMatrix::identity(n), u(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) l(i, j) = Rational(uniform_int(rng, -2, 2));
        int diag = 0;
        while (diag == 0) diag = uniform_int(rng, -2, 2);
        u(i, i) = Rational(diag);
        for (std::size_t j = i + 1; j < n; ++j) u(i, j) = Rational(uniform_int(rng, -2, 2));
    }
    RationalMatrix m = l * u;
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    return m.transpose().columns(perm).transpose();
}

namespace {

// Canonical basis layout of a sum of elementary pieces.
struct Pieces {
    std::vector<std::size_t> dims;
    // Each isomorphism piece: (degree, index in degree, index in degree+1).
    struct Iso {
        std::size_t k, src, dst;
    };
    std::vector<Iso> isos;
    std::vector<std::pair<std::size_t, std::size_t>> lines;  // (degree, index)
};

Pieces random_pieces(Rng& rng, std::size_t max_top_degree, std::size_t max_dim, bool acyclic) {
    Pieces p;
    const std::size_t top = static_cast<std::size_t>(uniform_int(rng, acyclic ? 1 : 0, static_cast<int>(max_top_degree)));
    p.dims.assign(top + 1, 0);
    const int attempts = uniform_int(rng, 1, static_cast<int>(max_dim * (top + 1)));
    for (int a = 0; a < attempts; ++a) {
        const std::size_t k = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(top)));
        const bool iso = acyclic || uniform_int(rng, 0, 1) == 1;
        if (iso) {
            if (k + 1 > top || p.dims[k] >= max_dim || p.dims[k + 1] >= max_dim) continue;
            p.isos.push_back({k, p.dims[k]++, p.dims[k + 1]++});
        } else {
            if (p.dims[k] >= max_dim) continue;
            p.lines.emplace_back(k, p.dims[k]++);
        }
    }
    return p;
}

std::vector<RationalMatrix> canonical_differentials(const Pieces& p) {
    std::vector<RationalMatrix> ds;
    for (std::size_t k = 0; k + 1 < p.dims.size(); ++k) ds.emplace_back(p.dims[k + 1], p.dims[k]);
    for (const auto& iso : p.isos) ds[iso.k](iso.dst, iso.src) = Rational(1);
    return ds;
}

// Columns of the identity selected by `which`.
RationalMatrix selector(std::size_t n, const std::vector<std::size_t>& which) {
    return RationalMatrix::identity(n).columns(which);
}

}  // namespace

CochainComplex change_basis(Rng& rng, const CochainComplex& c) {
    std::vector<RationalMatrix> p, pinv;
    for (std::size_t n : c.dims()) {
        p.push_back(random_invertible(rng, n));
        pinv.push_back(*inverse(p.back()));
    }
    std::vector<RationalMatrix> ds;
    for (std::size_t k = 0; k + 1 < c.length(); ++k) ds.push_back(p[k + 1] * c.differentials()[k] * pinv[k]);
    return CochainComplex(c.dims(), ds);
}

CochainComplex random_complex(Rng& rng, std::size_t max_top_degree, std::size_t max_dim) {
    const Pieces p = random_pieces(rng, max_top_degree, max_dim, false);
    return change_basis(rng, CochainComplex(p.dims, canonical_differentials(p)));
}

ComplexSES random_ses(Rng& rng, std::size_t max_top_degree, std::size_t max_dim, bool acyclic_b) {
    const Pieces p = random_pieces(rng, max_top_degree, max_dim, acyclic_b);
    const std::size_t len = p.dims.size();
    const std::vector<RationalMatrix> d = canonical_differentials(p);

    // A d-stable coordinate subset: lines freely, isos as {}, {dst} or {src, dst}.
    std::vector<std::vector<bool>> in_a(len);
    for (std::size_t k = 0; k < len; ++k) in_a[k].assign(p.dims[k], false);
    for (const auto& [k, i] : p.lines) in_a[k][i] = uniform_int(rng, 0, 1) == 1;
    for (const auto& iso : p.isos) {
        const int choice = uniform_int(rng, 0, 2);
        in_a[iso.k + 1][iso.dst] = choice >= 1;
        in_a[iso.k][iso.src] = choice == 2;
    }

    std::vector<RationalMatrix> ea, ec, pb, pbinv, ra, rainv, qc, qcinv;
    std::vector<std::size_t> dims_a, dims_c;
    for (std::size_t k = 0; k < len; ++k) {
        std::vector<std::size_t> sa, sc;
        for (std::size_t i = 0; i < p.dims[k]; ++i) (in_a[k][i] ? sa : sc).push_back(i);
        ea.push_back(selector(p.dims[k], sa));
        ec.push_back(selector(p.dims[k], sc));
        dims_a.push_back(sa.size());
        dims_c.push_back(sc.size());
        pb.push_back(random_invertible(rng, p.dims[k]));
        pbinv.push_back(*inverse(pb.back()));
        ra.push_back(random_invertible(rng, sa.size()));
        rainv.push_back(*inverse(ra.back()));
        qc.push_back(random_invertible(rng, sc.size()));
        qcinv.push_back(*inverse(qc.back()));
    }

    std::vector<RationalMatrix> db, da, dc;
    for (std::size_t k = 0; k + 1 < len; ++k) {
        db.push_back(pb[k + 1] * d[k] * pbinv[k]);
        da.push_back(rainv[k + 1] * ea[k + 1].transpose() * d[k] * ea[k] * ra[k]);
        dc.push_back(qc[k + 1] * ec[k + 1].transpose() * d[k] * ec[k] * qcinv[k]);
    }
    ComplexSES s;
    s.a = CochainComplex(dims_a, da);
    s.b = CochainComplex(p.dims, db);
    s.c = CochainComplex(dims_c, dc);
    for (std::size_t k = 0; k < len; ++k) {
        s.f.push_back(pb[k] * ea[k] * ra[k]);
        s.g.push_back(qc[k] * ec[k].transpose() * pbinv[k]);
    }
    return s;
}

SimplicialComplex random_connected_complex(Rng& rng, std::size_t vertices, std::size_t extra) {
    std::vector<Simplex> simplices{{0}};
    const int last = static_cast<int>(vertices) - 1;
    for (std::size_t v = 1; v < vertices; ++v) {
        const auto parent = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(v) - 1));
        simplices.push_back({parent, v});
    }
    for (std::size_t e = 0; e < extra && vertices >= 2; ++e) {
        const bool triangle = vertices >= 3 && uniform_int(rng, 0, 1) == 1;
        std::set<std::size_t> picked;
        while (picked.size() < (triangle ? 3u : 2u)) picked.insert(static_cast<std::size_t>(uniform_int(rng, 0, last)));
        simplices.emplace_back(picked.begin(), picked.end());
    }
    return SimplicialComplex(vertices, simplices);
}

SimplicialComplex random_complex_simplicial(Rng& rng, std::size_t max_vertices, std::size_t max_simplices) {
    const auto n = static_cast<std::size_t>(uniform_int(rng, 1, static_cast<int>(max_vertices)));
    std::vector<Simplex> simplices;
    for (std::size_t v = 0; v < n; ++v) simplices.push_back({v});
    SimplicialComplex current(n, simplices);
    const int tries = uniform_int(rng, 0, 3 * static_cast<int>(n));
    for (int t = 0; t < tries && n >= 2; ++t) {
        const std::size_t size = n >= 3 && uniform_int(rng, 0, 2) == 0 ? 3 : 2;
        std::set<std::size_t> picked;
        while (picked.size() < size) picked.insert(static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(n) - 1)));
        auto candidate = simplices;
        candidate.emplace_back(picked.begin(), picked.end());
        SimplicialComplex next(n, candidate);
        if (next.size() > max_simplices) break;
        simplices = std::move(candidate);
        current = std::move(next);
    }
    return current;
}

std::pair<SimplicialComplex, SimplicialComplex> random_cover(Rng& rng, const SimplicialComplex& s) {
    std::vector<Simplex> u, v;
    for (const auto& m : s.maximal_simplices()) {
        switch (uniform_int(rng, 0, 3)) {
            case 0:
                u.push_back(m);
                break;
            case 1:
                v.push_back(m);
                break;
            default:
                u.push_back(m);
                v.push_back(m);
        }
    }
    return {subcomplex(s, u), subcomplex(s, v)};
}

}  // namespace derham::gen
