#include "derham/chains.hpp"

#include "derham/error.hpp"

namespace derham {

namespace {

std::string degree_text(std::size_t k) { return "degree " + std::to_string(k); }

}  // namespace

CochainComplex::CochainComplex(std::vector<std::size_t> dims, std::vector<RationalMatrix> differentials)
    : dims_(std::move(dims)), differentials_(std::move(differentials)) {
    if (dims_.empty()) throw ValidationError("cochain complex needs at least one degree");
    // A trailing d_N into the zero space is accepted and dropped.
    if (differentials_.size() == dims_.size() && differentials_.back().rows() == 0) differentials_.pop_back();
    if (differentials_.size() + 1 != dims_.size()) {
        throw ValidationError("cochain complex with " + std::to_string(dims_.size()) + " degrees needs " +
                              std::to_string(dims_.size() - 1) + " differentials, got " +
                              std::to_string(differentials_.size()));
    }
    for (std::size_t k = 0; k < differentials_.size(); ++k) {
        const auto& m = differentials_[k];
        if (m.rows() != dims_[k + 1] || m.cols() != dims_[k]) {
            throw ValidationError("d_" + std::to_string(k) + " has shape " + std::to_string(m.rows()) + "x" +
                                  std::to_string(m.cols()) + ", expected " + std::to_string(dims_[k + 1]) + "x" +
                                  std::to_string(dims_[k]));
        }
    }
}

CochainComplex CochainComplex::zero(std::vector<std::size_t> dims) {
    std::vector<RationalMatrix> ds;
    for (std::size_t k = 0; k + 1 < dims.size(); ++k) ds.emplace_back(dims[k + 1], dims[k]);
    return CochainComplex(std::move(dims), std::move(ds));
}

std::size_t CochainComplex::dim(long k) const {
    if (k < 0 || static_cast<std::size_t>(k) >= dims_.size()) return 0;
    return dims_[static_cast<std::size_t>(k)];
}

RationalMatrix CochainComplex::differential(long k) const {
    if (k >= 0 && static_cast<std::size_t>(k) < differentials_.size()) return differentials_[static_cast<std::size_t>(k)];
    return RationalMatrix(dim(k + 1), dim(k));
}

std::optional<std::size_t> CochainComplex::first_square_failure() const {
    for (std::size_t k = 0; k + 1 < differentials_.size(); ++k) {
        if (!(differentials_[k + 1] * differentials_[k]).is_zero()) return k;
    }
    return std::nullopt;
}

std::vector<std::size_t> betti(const CochainComplex& c) {
    if (auto bad = c.first_square_failure()) {
        throw ValidationError("d∘d != 0: d_" + std::to_string(*bad + 1) + " d_" + std::to_string(*bad) +
                              " is nonzero at " + degree_text(*bad));
    }
    std::vector<std::size_t> ranks(c.length());
    for (std::size_t k = 0; k < c.length(); ++k) ranks[k] = rank(c.differential(static_cast<long>(k)));
    std::vector<std::size_t> out(c.length());
    for (std::size_t k = 0; k < c.length(); ++k) {
        out[k] = c.dim(static_cast<long>(k)) - ranks[k] - (k > 0 ? ranks[k - 1] : 0);
    }
    return out;
}

std::vector<std::size_t> homology_betti(const CochainComplex& c) {
    if (auto bad = c.first_square_failure()) {
        throw ValidationError("∂∘∂ != 0 at " + degree_text(*bad));
    }
    std::vector<std::size_t> out(c.length());
    for (std::size_t k = 0; k < c.length(); ++k) {
        // ∂_k = d_{k-1}^T : C_k -> C_{k-1}, ∂_{k+1} = d_k^T.
        const std::size_t cycles = c.dim(static_cast<long>(k)) - rank(c.differential(static_cast<long>(k) - 1).transpose());
        out[k] = cycles - rank(c.differential(static_cast<long>(k)).transpose());
    }
    return out;
}

CohomologyBasis cohomology_basis(const CochainComplex& c) {
    if (auto bad = c.first_square_failure()) {
        throw ValidationError("d∘d != 0 at " + degree_text(*bad));
    }
    CohomologyBasis basis;
    for (std::size_t k = 0; k < c.length(); ++k) {
        const RationalMatrix incoming = c.differential(static_cast<long>(k) - 1);
        const RationalMatrix z = kernel_basis(c.differential(static_cast<long>(k)));
        const RowEchelon img = rref(incoming);
        const RationalMatrix b = incoming.columns(img.pivots);
        const RowEchelon joint = rref(hstack(b, z));
        std::vector<std::size_t> reps;
        for (std::size_t p : joint.pivots) {
            if (p >= b.cols()) reps.push_back(p - b.cols());
        }
        basis.image.push_back(b);
        basis.representatives.push_back(z.columns(reps));
    }
    return basis;
}

RationalVector CohomologyBasis::coordinates(std::size_t k, const RationalVector& z) const {
    const RationalMatrix& b = image.at(k);
    const RationalMatrix& r = representatives.at(k);
    auto x = solve(hstack(b, r), z);
    if (!x) throw ValidationError("vector is not a cocycle representative in " + degree_text(k));
    return RationalVector(x->begin() + static_cast<long>(b.cols()), x->end());
}

RationalMatrix induced_map(const CohomologyBasis& from, const CohomologyBasis& to, std::size_t k,
                           const RationalMatrix& f) {
    const RationalMatrix& reps = from.representatives.at(k);
    std::vector<RationalVector> cols;
    for (std::size_t j = 0; j < reps.cols(); ++j) cols.push_back(to.coordinates(k, f.apply(reps.column(j))));
    return RationalMatrix::from_columns(cols, to.dim(k));
}

ExactnessReport check_exactness(const ExactSequence& s) {
    if (s.maps.size() + 1 != s.dims.size()) {
        throw ValidationError("sequence with " + std::to_string(s.dims.size()) + " nodes needs " +
                              std::to_string(s.dims.size() ? s.dims.size() - 1 : 0) + " maps");
    }
    for (std::size_t i = 0; i < s.maps.size(); ++i) {
        if (s.maps[i].rows() != s.dims[i + 1] || s.maps[i].cols() != s.dims[i]) {
            throw ValidationError("map " + std::to_string(i) + " has shape " + std::to_string(s.maps[i].rows()) +
                                  "x" + std::to_string(s.maps[i].cols()) + ", expected " +
                                  std::to_string(s.dims[i + 1]) + "x" + std::to_string(s.dims[i]));
        }
    }
    ExactnessReport report;
    std::vector<std::size_t> ranks;
    for (const auto& m : s.maps) ranks.push_back(rank(m));
    for (std::size_t i = 1; i + 1 < s.dims.size(); ++i) {
        ExactnessReport::Node node;
        node.index = i;
        node.label = i < s.labels.size() ? s.labels[i] : "V" + std::to_string(i);
        node.dim = s.dims[i];
        node.rank_in = ranks[i - 1];
        node.rank_out = ranks[i];
        node.composite_zero = (s.maps[i] * s.maps[i - 1]).is_zero();
        node.exact = node.composite_zero && node.rank_in + node.rank_out == node.dim;
        report.exact = report.exact && node.exact;
        report.nodes.push_back(std::move(node));
    }
    return report;
}

void validate(const ComplexSES& s) {
    const std::size_t n = s.b.length();
    if (s.a.length() != n || s.c.length() != n) {
        throw ValidationError("short exact sequence: complexes have different degree ranges");
    }
    if (s.f.size() != n || s.g.size() != n) {
        throw ValidationError("short exact sequence: need one f and one g per degree");
    }
    for (const CochainComplex* x : {&s.a, &s.b, &s.c}) {
        if (auto bad = x->first_square_failure()) {
            throw ValidationError("short exact sequence: d∘d != 0 at " + degree_text(*bad));
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        const long lk = static_cast<long>(k);
        const auto& f = s.f[k];
        const auto& g = s.g[k];
        if (f.rows() != s.b.dim(lk) || f.cols() != s.a.dim(lk)) {
            throw ValidationError("f_" + std::to_string(k) + " has the wrong shape");
        }
        if (g.rows() != s.c.dim(lk) || g.cols() != s.b.dim(lk)) {
            throw ValidationError("g_" + std::to_string(k) + " has the wrong shape");
        }
        if (k + 1 < n) {
            if (!(s.b.differential(lk) * f == s.f[k + 1] * s.a.differential(lk))) {
                throw ValidationError("f does not commute with d at " + degree_text(k));
            }
            if (!(s.c.differential(lk) * g == s.g[k + 1] * s.b.differential(lk))) {
                throw ValidationError("g does not commute with d at " + degree_text(k));
            }
        }
        const std::size_t rf = rank(f), rg = rank(g);
        if (rf != f.cols()) throw ValidationError("f is not injective at " + degree_text(k));
        if (rg != g.rows()) throw ValidationError("g is not surjective at " + degree_text(k));
        if (!(g * f).is_zero() || rf + rg != s.b.dim(lk)) {
            throw ValidationError("im f != ker g at " + degree_text(k));
        }
    }
}

ZigzagReport zigzag(const ComplexSES& s) {
    validate(s);
    const std::size_t n = s.b.length();
    const CohomologyBasis ha = cohomology_basis(s.a);
    const CohomologyBasis hb = cohomology_basis(s.b);
    const CohomologyBasis hc = cohomology_basis(s.c);

    ZigzagReport r;
    for (std::size_t k = 0; k < n; ++k) {
        r.betti_a.push_back(ha.dim(k));
        r.betti_b.push_back(hb.dim(k));
        r.betti_c.push_back(hc.dim(k));
    }
    for (std::size_t k = 0; k < n; ++k) {
        r.f_star.push_back(induced_map(ha, hb, k, s.f[k]));
        r.g_star.push_back(induced_map(hb, hc, k, s.g[k]));

        const RationalMatrix& reps = hc.representatives[k];
        const std::size_t target_dim = k + 1 < n ? ha.dim(k + 1) : 0;
        std::vector<RationalVector> cols;
        for (std::size_t j = 0; j < reps.cols(); ++j) {
            auto b = solve(s.g[k], reps.column(j));
            if (!b) throw std::logic_error("zigzag: g is not surjective");
            const RationalVector db = s.b.differential(static_cast<long>(k)).apply(*b);
            if (k + 1 == n) {
                cols.emplace_back();
                continue;
            }
            auto a = solve(s.f[k + 1], db);
            if (!a) throw std::logic_error("zigzag: d b is not in the image of f");
            cols.push_back(ha.coordinates(k + 1, *a));
        }
        r.delta.push_back(RationalMatrix::from_columns(cols, target_dim));
    }

    ExactSequence& seq = r.long_sequence;
    seq.dims.push_back(0);
    seq.labels.emplace_back("0");
    auto node = [&](std::size_t dim, std::string label) {
        seq.dims.push_back(dim);
        seq.labels.push_back(std::move(label));
    };
    seq.maps.emplace_back(r.betti_a[0], 0);
    for (std::size_t k = 0; k < n; ++k) {
        const std::string deg = std::to_string(k);
        node(r.betti_a[k], "H^" + deg + "(A)");
        seq.maps.push_back(r.f_star[k]);
        node(r.betti_b[k], "H^" + deg + "(B)");
        seq.maps.push_back(r.g_star[k]);
        node(r.betti_c[k], "H^" + deg + "(C)");
        seq.maps.push_back(r.delta[k]);
    }
    node(0, "0");
    r.exactness = check_exactness(seq);
    return r;
}

std::vector<std::size_t> ZigzagReport::betti_a_from_sequence() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < betti_b.size(); ++k) {
        const std::size_t from_delta = k > 0 ? rank(delta[k - 1]) : 0;
        out.push_back(from_delta + betti_b[k] - rank(g_star[k]));
    }
    return out;
}

}  // namespace derham
