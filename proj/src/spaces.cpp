#include "derham/spaces.hpp"

#include "derham/error.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace derham {

namespace {

std::string simplex_text(const Simplex& s) {
    std::string out = "[";
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
    return out + "]";
}

std::string list_text(const std::vector<std::size_t>& v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
    return out + ")";
}

void add_faces(const Simplex& s, std::set<Simplex>& out) {
    if (!out.insert(s).second) return;
    if (s.size() <= 1) return;
    for (std::size_t i = 0; i < s.size(); ++i) {
        Simplex face = s;
        face.erase(face.begin() + static_cast<long>(i));
        add_faces(face, out);
    }
}

}  // namespace

SimplicialComplex::SimplicialComplex(std::size_t vertex_count, std::vector<Simplex> simplices, Closure closure,
                                     std::optional<std::size_t> dimension)
    : vertex_count_(vertex_count) {
    std::set<Simplex> given;
    for (auto& s : simplices) {
        if (s.empty()) throw ValidationError("empty simplex");
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
            throw ValidationError("simplex " + simplex_text(s) + " repeats a vertex");
        }
        if (s.back() >= vertex_count_) {
            throw ValidationError("simplex " + simplex_text(s) + " uses a vertex outside 0.." +
                                  std::to_string(vertex_count_ == 0 ? 0 : vertex_count_ - 1));
        }
        if (!given.insert(s).second && closure == Closure::Require) {
            throw ValidationError("duplicate simplex " + simplex_text(s));
        }
    }
    std::set<Simplex> all;
    if (closure == Closure::Compute) {
        for (const auto& s : given) add_faces(s, all);
    } else {
        all = given;
        for (const auto& s : given) {
            for (std::size_t i = 0; s.size() > 1 && i < s.size(); ++i) {
                Simplex face = s;
                face.erase(face.begin() + static_cast<long>(i));
                if (!all.count(face)) {
                    throw ValidationError("face " + simplex_text(face) + " of " + simplex_text(s) + " is missing");
                }
            }
        }
    }
    for (const auto& s : all) {
        const std::size_t k = s.size() - 1;
        if (by_degree_.size() <= k) by_degree_.resize(k + 1);
        index_[s] = by_degree_[k].size();
        by_degree_[k].push_back(s);
    }
    dimension_ = dimension.value_or(top_simplex_dimension());
    if (dimension_ < top_simplex_dimension() && !by_degree_.empty()) {
        throw ValidationError("declared dimension " + std::to_string(dimension_) + " is below the top simplex dimension " +
                              std::to_string(top_simplex_dimension()));
    }
}

const std::vector<Simplex>& SimplicialComplex::simplices(std::size_t k) const {
    static const std::vector<Simplex> none;
    return k < by_degree_.size() ? by_degree_[k] : none;
}

std::size_t SimplicialComplex::size() const { return index_.size(); }

bool SimplicialComplex::contains(const Simplex& s) const { return index_.count(s) > 0; }

std::optional<std::size_t> SimplicialComplex::index_of(const Simplex& s) const {
    auto it = index_.find(s);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<Simplex> SimplicialComplex::all_simplices() const {
    std::vector<Simplex> out;
    for (const auto& level : by_degree_) out.insert(out.end(), level.begin(), level.end());
    return out;
}

std::vector<Simplex> SimplicialComplex::maximal_simplices() const {
    std::set<Simplex> faces;
    for (const auto& [s, idx] : index_) {
        for (std::size_t i = 0; s.size() > 1 && i < s.size(); ++i) {
            Simplex face = s;
            face.erase(face.begin() + static_cast<long>(i));
            faces.insert(face);
        }
    }
    std::vector<Simplex> out;
    for (const auto& s : all_simplices()) {
        if (!faces.count(s)) out.push_back(s);
    }
    return out;
}

SimplicialComplex SimplicialComplex::intersection(const SimplicialComplex& other) const {
    std::vector<Simplex> shared;
    for (const auto& s : all_simplices()) {
        if (other.contains(s)) shared.push_back(s);
    }
    return SimplicialComplex(vertex_count_, shared, Closure::Require, dimension_);
}

bool SimplicialComplex::is_subcomplex_of(const SimplicialComplex& other) const {
    return std::all_of(index_.begin(), index_.end(), [&](const auto& kv) { return other.contains(kv.first); });
}

CochainComplex coboundary_complex(const SimplicialComplex& s, std::optional<std::size_t> length) {
    const std::size_t len = length.value_or(std::max(s.dimension(), s.top_simplex_dimension()) + 1);
    std::vector<std::size_t> dims(len);
    for (std::size_t k = 0; k < len; ++k) dims[k] = s.count(k);
    std::vector<RationalMatrix> ds;
    for (std::size_t k = 0; k + 1 < len; ++k) {
        RationalMatrix m(dims[k + 1], dims[k]);
        const auto& cofaces = s.simplices(k + 1);
        for (std::size_t row = 0; row < cofaces.size(); ++row) {
            const Simplex& tau = cofaces[row];
            for (std::size_t i = 0; i < tau.size(); ++i) {
                Simplex face = tau;
                face.erase(face.begin() + static_cast<long>(i));
                m(row, *s.index_of(face)) = Rational(i % 2 ? -1 : 1);
            }
        }
        ds.push_back(std::move(m));
    }
    return CochainComplex(dims, ds);
}

std::vector<std::size_t> component_labels(const SimplicialComplex& s) {
    const auto& verts = s.simplices(0);
    std::vector<std::size_t> parent(verts.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& e : s.simplices(1)) {
        const std::size_t a = find(*s.index_of({e[0]})), b = find(*s.index_of({e[1]}));
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::map<std::size_t, std::size_t> relabel;
    std::vector<std::size_t> out(verts.size());
    for (std::size_t i = 0; i < verts.size(); ++i) {
        const std::size_t root = find(i);
        auto it = relabel.emplace(root, relabel.size()).first;
        out[i] = it->second;
    }
    return out;
}

std::size_t union_find_components(const SimplicialComplex& s) {
    const auto labels = component_labels(s);
    return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

std::size_t component_count(const SimplicialComplex& s) {
    const std::size_t b0 = betti(coboundary_complex(s))[0];
    const std::size_t uf = union_find_components(s);
    if (b0 != uf) {
        throw std::logic_error("component count mismatch: b0 = " + std::to_string(b0) + ", union-find = " +
                               std::to_string(uf));
    }
    return b0;
}

BettiProfile BettiProfile::of(std::vector<std::size_t> b, bool compact, bool oriented) {
    BettiProfile p;
    p.connected = !b.empty() && b[0] == 1;
    p.betti = std::move(b);
    p.compact = compact;
    p.oriented = oriented;
    return p;
}

BettiProfile kunneth(const BettiProfile& a, const BettiProfile& b) {
    BettiProfile out;
    if (a.betti.empty() || b.betti.empty()) return out;
    out.betti.assign(a.betti.size() + b.betti.size() - 1, 0);
    for (std::size_t p = 0; p < a.betti.size(); ++p)
        for (std::size_t q = 0; q < b.betti.size(); ++q) out.betti[p + q] += a.betti[p] * b.betti[q];
    out.connected = a.connected && b.connected;
    out.compact = a.compact && b.compact;
    out.oriented = a.oriented && b.oriented;
    return out;
}

std::string to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass:
            return "pass";
        case CheckStatus::Fail:
            return "fail";
        case CheckStatus::Refused:
            return "refused";
    }
    return "?";
}

DualityReport duality_check(const BettiProfile& p) {
    DualityReport r;
    if (!p.compact || !p.oriented) {
        r.status = CheckStatus::Refused;
        r.reason = "duality is only asserted for compact oriented manifolds";
        return r;
    }
    const std::size_t n = p.dimension();
    for (std::size_t k = 0; k <= n && !p.betti.empty(); ++k) {
        const std::string label = "b" + std::to_string(k) + " = b" + std::to_string(n - k);
        r.entries.push_back({label, p.betti[k], p.betti[n - k], p.betti[k] == p.betti[n - k]});
    }
    if (p.connected && !p.betti.empty()) {
        r.entries.push_back({"b0 = 1", p.betti[0], 1, p.betti[0] == 1});
        r.entries.push_back({"b" + std::to_string(n) + " = 1", p.betti[n], 1, p.betti[n] == 1});
    }
    const bool ok = std::all_of(r.entries.begin(), r.entries.end(), [](const auto& e) { return e.ok; });
    r.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
    return r;
}

bool vanishing_check(const BettiProfile& p, std::size_t n) {
    for (std::size_t k = n + 1; k < p.betti.size(); ++k) {
        if (p.betti[k] != 0) return false;
    }
    return true;
}

std::vector<std::size_t> SpaceMarker::profile(std::size_t top) const {
    std::vector<std::size_t> out(top + 1, 0);
    switch (kind) {
        case Kind::Contractible:
            out[0] = 1;
            break;
        case Kind::DisjointContractibles:
            out[0] = pieces;
            break;
        case Kind::Betti:
            for (std::size_t k = 0; k < betti.size(); ++k) {
                if (k > top) {
                    if (betti[k] != 0) {
                        throw ValidationError("Betti list " + list_text(betti) + " exceeds the top degree " +
                                              std::to_string(top));
                    }
                    continue;
                }
                out[k] = betti[k];
            }
            break;
    }
    return out;
}

void validate(const CoverSpec& c) {
    const bool has_cover = c.u && c.v && c.uv;
    if (!has_cover && (c.u || c.v || c.uv)) throw ValidationError("cover spec needs all of U, V and U∩V");
    if (!has_cover && !c.m_equivalent) {
        throw ValidationError("cover spec needs U, V and U∩V, or a declared homotopy type for M");
    }
    if (!has_cover) return;
    const std::size_t bu = c.u->profile(c.top_degree)[0];
    const std::size_t bv = c.v->profile(c.top_degree)[0];
    const std::size_t bw = c.uv->profile(c.top_degree)[0];
    if (c.incidence) {
        const RationalMatrix& m = *c.incidence;
        if (m.rows() != bw || m.cols() != bu + bv) {
            throw ValidationError("incidence matrix must be " + std::to_string(bw) + "x" + std::to_string(bu + bv) +
                                  " (components of U∩V by components of U then V)");
        }
        for (std::size_t i = 0; i < m.rows(); ++i) {
            std::size_t plus = 0, minus = 0;
            for (std::size_t j = 0; j < m.cols(); ++j) {
                const Rational& x = m(i, j);
                if (x == 0) continue;
                if (j < bu && x == 1) {
                    ++plus;
                } else if (j >= bu && x == -1) {
                    ++minus;
                } else {
                    throw ValidationError("incidence row " + std::to_string(i) + " has an entry other than +1 into U or -1 into V");
                }
            }
            if (plus != 1 || minus != 1) {
                throw ValidationError("incidence row " + std::to_string(i) +
                                      " needs exactly one +1 into U and one -1 into V");
            }
        }
    }
    for (const auto& [k, q] : c.j_ranks) {
        if (k == 0) throw ValidationError("the degree-0 rank of j* comes from the incidence matrix");
        if (k > c.top_degree) throw ValidationError("j* rank given above the top degree");
        (void)q;
    }
}

bool MVResult::determined() const {
    return std::all_of(betti.begin(), betti.end(), [](const auto& b) { return b.has_value(); });
}

std::vector<std::size_t> MVResult::values() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < betti.size(); ++k) {
        if (!betti[k]) throw ValidationError("dim H^" + std::to_string(k) + "(M) is underdetermined");
        out.push_back(*betti[k]);
    }
    return out;
}

MVResult mv_solve(const CoverSpec& c) {
    validate(c);
    const std::size_t top = c.top_degree;
    MVResult r;
    if (!c.u) {
        std::vector<std::size_t> m = SpaceMarker::from_betti(*c.m_equivalent).profile(top);
        r.betti.assign(m.begin(), m.end());
        r.j_ranks.assign(top + 1, std::nullopt);
        return r;
    }
    const auto pu = c.u->profile(top), pv = c.v->profile(top), pw = c.uv->profile(top);
    std::vector<std::size_t> a(top + 1), cw = pw;
    for (std::size_t k = 0; k <= top; ++k) a[k] = pu[k] + pv[k];

    // q_k = rank j*_k.  Exactness gives p_k = a_k - q_k (rank i*_k), s_k = c_k - q_k (rank δ_k), h_k = s_{k-1} + p_k.
    std::vector<std::optional<std::size_t>> q(top + 1);
    if (c.incidence) {
        q[0] = rank(*c.incidence);
    } else if (pu[0] == 1 && pv[0] == 1) {
        q[0] = std::min<std::size_t>(1, cw[0]);
    }
    for (const auto& [k, rk] : c.j_ranks) q[k] = rk;
    auto segment = [](std::size_t k) {
        return "segment H^" + std::to_string(k) + "(U)⊕H^" + std::to_string(k) + "(V) -> H^" + std::to_string(k) +
               "(U∩V) -> H^" + std::to_string(k + 1) + "(M)";
    };
    for (std::size_t k = 0; k <= top; ++k) {
        const std::size_t bound = std::min(a[k], cw[k]);
        if (!q[k] && bound == 0) q[k] = 0;
        if (k == top) {
            // H^{top+1}(M) = 0 forces δ_top = 0, so j*_top is onto.
            if (q[k] && *q[k] != cw[k]) {
                throw ValidationError("inconsistent " + segment(k) + ": H^" + std::to_string(k + 1) +
                                      "(M) = 0 needs rank j* = " + std::to_string(cw[k]) + ", got " +
                                      std::to_string(*q[k]));
            }
            q[k] = cw[k];
        }
        if (q[k] && *q[k] > bound) {
            throw ValidationError("inconsistent " + segment(k) + ": rank j* = " + std::to_string(*q[k]) +
                                  " exceeds min(" + std::to_string(a[k]) + ", " + std::to_string(cw[k]) + ")");
        }
    }
    r.j_ranks = q;
    r.betti.assign(top + 1, std::nullopt);
    for (std::size_t k = 0; k <= top; ++k) {
        const bool prev_known = k == 0 || q[k - 1].has_value();
        if (prev_known && q[k]) {
            const std::size_t s_prev = k == 0 ? 0 : cw[k - 1] - *q[k - 1];
            r.betti[k] = s_prev + a[k] - *q[k];
        }
    }
    for (std::size_t k = 0; k <= top; ++k) {
        if (!q[k]) {
            r.missing.push_back("rank of j* : H^" + std::to_string(k) + "(U)⊕H^" + std::to_string(k) + "(V) -> H^" +
                                std::to_string(k) + "(U∩V) (between 0 and " + std::to_string(std::min(a[k], cw[k])) +
                                ") determines dim H^" + std::to_string(k) + " and dim H^" + std::to_string(k + 1));
        }
    }
    if (c.m_equivalent) {
        const auto declared = SpaceMarker::from_betti(*c.m_equivalent).profile(top);
        for (std::size_t k = 0; k <= top; ++k) {
            if (r.betti[k] && *r.betti[k] != declared[k]) {
                throw ValidationError("declared homotopy type of M has b" + std::to_string(k) + " = " +
                                      std::to_string(declared[k]) + " but the cover gives " +
                                      std::to_string(*r.betti[k]));
            }
            r.betti[k] = declared[k];
        }
    }
    return r;
}

SimplicialComplex subcomplex(const SimplicialComplex& s, const std::vector<Simplex>& simplices) {
    SimplicialComplex sub(s.vertex_count(), simplices, SimplicialComplex::Closure::Compute, s.dimension());
    if (!sub.is_subcomplex_of(s)) throw ValidationError("cover piece is not a subcomplex");
    return sub;
}

namespace {

// Restriction of k-cochains from `from` to its subcomplex `to`.
RationalMatrix restriction(const SimplicialComplex& from, const SimplicialComplex& to, std::size_t k) {
    RationalMatrix m(to.count(k), from.count(k));
    const auto& simplices = to.simplices(k);
    for (std::size_t i = 0; i < simplices.size(); ++i) m(i, *from.index_of(simplices[i])) = Rational(1);
    return m;
}

void check_cover(const SimplicialComplex& s, const SimplicialComplex& u, const SimplicialComplex& v) {
    if (!u.is_subcomplex_of(s) || !v.is_subcomplex_of(s)) throw ValidationError("U and V must be subcomplexes");
    for (const auto& simplex : s.all_simplices()) {
        if (!u.contains(simplex) && !v.contains(simplex)) {
            throw ValidationError("cover condition violated: simplex " + simplex_text(simplex) + " is in neither U nor V");
        }
    }
}

}  // namespace

ComplexSES simplicial_mv_ses(const SimplicialComplex& s, const SimplicialComplex& u, const SimplicialComplex& v) {
    check_cover(s, u, v);
    const SimplicialComplex w = u.intersection(v);
    const std::size_t len = std::max(s.dimension(), s.top_simplex_dimension()) + 1;

    ComplexSES out;
    out.a = coboundary_complex(s, len);
    const CochainComplex cu = coboundary_complex(u, len), cv = coboundary_complex(v, len);
    std::vector<std::size_t> dims_b;
    std::vector<RationalMatrix> db;
    for (std::size_t k = 0; k < len; ++k) dims_b.push_back(cu.dims()[k] + cv.dims()[k]);
    for (std::size_t k = 0; k + 1 < len; ++k) db.push_back(block_diagonal(cu.differentials()[k], cv.differentials()[k]));
    out.b = CochainComplex(dims_b, db);
    out.c = coboundary_complex(w, len);
    for (std::size_t k = 0; k < len; ++k) {
        out.f.push_back(vstack(restriction(s, u, k), restriction(s, v, k)));
        const RationalMatrix ru = restriction(u, w, k), rv = restriction(v, w, k);
        RationalMatrix neg_rv = RationalMatrix(rv.rows(), rv.cols()) - rv;
        out.g.push_back(hstack(ru, neg_rv));
    }
    return out;
}

CoverSpec cover_spec_from_simplicial(const SimplicialComplex& s, const SimplicialComplex& u,
                                     const SimplicialComplex& v) {
    check_cover(s, u, v);
    const SimplicialComplex w = u.intersection(v);
    const std::size_t len = std::max(s.dimension(), s.top_simplex_dimension()) + 1;
    const CochainComplex cu = coboundary_complex(u, len), cv = coboundary_complex(v, len),
                         cw = coboundary_complex(w, len);
    CoverSpec spec;
    spec.top_degree = len - 1;
    spec.u = SpaceMarker::from_betti(betti(cu));
    spec.v = SpaceMarker::from_betti(betti(cv));
    spec.uv = SpaceMarker::from_betti(betti(cw));

    // Incidence from component labels: each component of U∩V lies in one component of U and one of V.
    const auto lu = component_labels(u), lv = component_labels(v), lw = component_labels(w);
    const std::size_t bu = spec.u->betti[0], bv = spec.v->betti[0], bw = spec.uv->betti[0];
    RationalMatrix inc(bw, bu + bv);
    const auto& wverts = w.simplices(0);
    for (std::size_t i = 0; i < wverts.size(); ++i) {
        inc(lw[i], lu[*u.index_of(wverts[i])]) = Rational(1);
        inc(lw[i], bu + lv[*v.index_of(wverts[i])]) = Rational(-1);
    }
    spec.incidence = inc;

    // j*_k on cohomology, from restriction of representatives.
    const CohomologyBasis hu = cohomology_basis(cu), hv = cohomology_basis(cv), hw = cohomology_basis(cw);
    for (std::size_t k = 1; k < len; ++k) {
        const RationalMatrix ju = induced_map(hu, hw, k, restriction(u, w, k));
        const RationalMatrix jv = induced_map(hv, hw, k, restriction(v, w, k));
        spec.j_ranks[k] = rank(hstack(ju, RationalMatrix(jv.rows(), jv.cols()) - jv));
    }
    return spec;
}

namespace models {

SimplicialComplex point() { return SimplicialComplex(1, {{0}}); }

SimplicialComplex interval() { return SimplicialComplex(2, {{0, 1}}); }

SimplicialComplex circle() { return SimplicialComplex(3, {{0, 1}, {1, 2}, {0, 2}}); }

SimplicialComplex sphere2() { return SimplicialComplex(4, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}); }

SimplicialComplex torus() {
    auto v = [](std::size_t i, std::size_t j) { return 3 * (i % 3) + (j % 3); };
    std::vector<Simplex> tris;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            tris.push_back({v(i, j), v(i + 1, j), v(i + 1, j + 1)});
            tris.push_back({v(i, j), v(i, j + 1), v(i + 1, j + 1)});
        }
    }
    return SimplicialComplex(9, tris, SimplicialComplex::Closure::Compute, 2);
}

SimplicialComplex disjoint_union(const SimplicialComplex& a, const SimplicialComplex& b) {
    std::vector<Simplex> all = a.maximal_simplices();
    for (Simplex s : b.maximal_simplices()) {
        for (auto& x : s) x += a.vertex_count();
        all.push_back(s);
    }
    return SimplicialComplex(a.vertex_count() + b.vertex_count(), all, SimplicialComplex::Closure::Compute,
                             std::max(a.dimension(), b.dimension()));
}

SimplicialComplex product(const SimplicialComplex& a, const SimplicialComplex& b) {
    const std::size_t nb = b.vertex_count();
    std::vector<Simplex> out;
    for (const auto& sa : a.maximal_simplices()) {
        for (const auto& sb : b.maximal_simplices()) {
            // Every monotone lattice path from (0,0) to (|sa|-1, |sb|-1) gives a top simplex.
            Simplex cur;
            auto walk = [&](auto&& self, std::size_t i, std::size_t j) -> void {
                cur.push_back(sa[i] * nb + sb[j]);
                if (i + 1 == sa.size() && j + 1 == sb.size()) {
                    Simplex s = cur;
                    std::sort(s.begin(), s.end());
                    out.push_back(s);
                }
                if (i + 1 < sa.size()) self(self, i + 1, j);
                if (j + 1 < sb.size()) self(self, i, j + 1);
                cur.pop_back();
            };
            walk(walk, 0, 0);
        }
    }
    return SimplicialComplex(a.vertex_count() * nb, out, SimplicialComplex::Closure::Compute,
                             a.dimension() + b.dimension());
}

}  // namespace models

}  // namespace derham
