#include "derham/io.hpp"

#include "derham/error.hpp"

#include <fstream>

namespace derham::io {

namespace {

template <class F>
auto guarded(const std::string& what, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Json::exception& e) {
        throw ValidationError(what + ": " + e.what());
    }
}

const Json& field(const Json& j, const char* name, const std::string& what) {
    if (!j.is_object()) throw ValidationError(what + ": expected an object");
    auto it = j.find(name);
    if (it == j.end()) throw ValidationError(what + ": missing field '" + name + "'");
    return *it;
}

std::vector<std::string> names_from_json(const Json& j, const std::string& what) {
    if (!j.is_array()) throw ValidationError(what + ": expected a list of names");
    std::vector<std::string> out;
    for (const auto& x : j) out.push_back(x.get<std::string>());
    return out;
}

Expr expr_from_json(const Json& j) {
    if (j.is_number_integer()) return Expr(Rational(j.get<long long>()));
    if (!j.is_string()) throw ValidationError("expression must be a string");
    return parse(j.get<std::string>());
}

std::vector<std::size_t> sizes_from_json(const Json& j, const std::string& what) {
    if (!j.is_array()) throw ValidationError(what + ": expected a list of nonnegative integers");
    std::vector<std::size_t> out;
    for (const auto& x : j) {
        if (!x.is_number_integer() || x.get<long long>() < 0) {
            throw ValidationError(what + ": expected nonnegative integers");
        }
        out.push_back(x.get<std::size_t>());
    }
    return out;
}

Json names_to_json(const std::vector<std::string>& v) {
    Json out = Json::array();
    for (const auto& s : v) out.push_back(s);
    return out;
}

std::vector<Simplex> simplices_from_json(const Json& j, const std::string& what) {
    if (!j.is_array()) throw ValidationError(what + ": expected a list of simplices");
    std::vector<Simplex> out;
    for (const auto& s : j) out.push_back(sizes_from_json(s, what));
    return out;
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

Rational rational_from_json(const Json& j) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
    throw ValidationError("rational must be a \"p/q\" string or an integer");
}

Json rational_to_json(const Rational& r) { return to_string(r); }

RationalMatrix matrix_from_json(const Json& j, std::size_t rows, std::size_t cols) {
    if (!j.is_array()) throw ValidationError("matrix must be a list of rows");
    std::vector<std::vector<Rational>> r;
    for (const auto& row : j) {
        if (!row.is_array()) throw ValidationError("matrix row must be a list");
        std::vector<Rational> values;
        for (const auto& x : row) values.push_back(rational_from_json(x));
        r.push_back(std::move(values));
    }
    RationalMatrix m = RationalMatrix::from_rows(r, cols);
    if (m.rows() != rows || m.cols() != cols) {
        throw ValidationError("matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", expected " +
                              std::to_string(rows) + "x" + std::to_string(cols));
    }
    return m;
}

Json matrix_to_json(const RationalMatrix& m) {
    Json out = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(rational_to_json(m(i, j)));
        out.push_back(row);
    }
    return out;
}

DifferentialForm form_from_json(const Json& j) {
    return guarded("form", [&] {
        const auto coords = names_from_json(field(j, "coords", "form"), "form coords");
        const int degree = field(j, "degree", "form").get<int>();
        if (degree < 0) throw ValidationError("form degree must be nonnegative");
        DifferentialForm w(coords, degree);
        for (const auto& term : field(j, "terms", "form")) {
            MultiIndex idx;
            for (const auto& i : field(term, "dx", "form term")) idx.push_back(i.get<int>());
            w.add_term(idx, expr_from_json(field(term, "coeff", "form term")));
        }
        return w;
    });
}

Json form_to_json(const DifferentialForm& w) {
    Json terms = Json::array();
    for (const auto& [idx, c] : w.terms()) {
        Json dx = Json::array();
        for (int i : idx) dx.push_back(i);
        terms.push_back({{"coeff", to_string(c)}, {"dx", dx}});
    }
    return {{"coords", names_to_json(w.coords())}, {"degree", w.degree()}, {"terms", terms}};
}

SmoothMap map_from_json(const Json& j) {
    return guarded("map", [&] {
        std::vector<Expr> comps;
        for (const auto& c : field(j, "components", "map")) comps.push_back(expr_from_json(c));
        return SmoothMap(names_from_json(field(j, "source", "map"), "map source"),
                         names_from_json(field(j, "target", "map"), "map target"), comps);
    });
}

Json map_to_json(const SmoothMap& f) {
    Json comps = Json::array();
    for (const auto& c : f.components()) comps.push_back(to_string(c));
    return {{"source", names_to_json(f.source())}, {"target", names_to_json(f.target())}, {"components", comps}};
}

CochainComplex complex_from_json(const Json& j) {
    return guarded("complex", [&] {
        const auto dims = sizes_from_json(field(j, "dims", "complex"), "complex dims");
        if (dims.empty()) throw ValidationError("complex needs at least one degree");
        std::vector<RationalMatrix> ds;
        const Json& list = field(j, "differentials", "complex");
        if (!list.is_array()) throw ValidationError("complex differentials must be a list");
        for (std::size_t k = 0; k < list.size(); ++k) {
            const std::size_t rows = k + 1 < dims.size() ? dims[k + 1] : 0;
            ds.push_back(matrix_from_json(list[k], rows, dims[k]));
        }
        return CochainComplex(dims, ds);
    });
}

Json complex_to_json(const CochainComplex& c) {
    Json ds = Json::array();
    for (const auto& m : c.differentials()) ds.push_back(matrix_to_json(m));
    Json dims = Json::array();
    for (auto n : c.dims()) dims.push_back(n);
    return {{"dims", dims}, {"differentials", ds}};
}

SpaceDocument space_from_json(const Json& j) {
    return guarded("space", [&] {
        const auto simplices = simplices_from_json(field(j, "simplices", "space"), "space simplices");
        std::size_t vertices = 0;
        for (const auto& s : simplices)
            for (auto v : s) vertices = std::max(vertices, v + 1);
        if (j.contains("vertices")) vertices = std::max(vertices, j["vertices"].get<std::size_t>());
        std::optional<std::size_t> n;
        if (j.contains("n")) n = j["n"].get<std::size_t>();
        SpaceDocument doc{SimplicialComplex(vertices, simplices, SimplicialComplex::Closure::Compute, n)};
        if (j.contains("flags")) {
            doc.compact = j["flags"].value("compact", false);
            doc.oriented = j["flags"].value("oriented", false);
        }
        return doc;
    });
}

Json space_to_json(const SimplicialComplex& s, bool compact, bool oriented) {
    Json simplices = Json::array();
    for (const auto& m : s.maximal_simplices()) simplices.push_back(m);
    return {{"n", s.dimension()}, {"simplices", simplices}, {"flags", {{"compact", compact}, {"oriented", oriented}}}};
}

BettiProfile profile_from_json(const Json& j) {
    return guarded("profile", [&] {
        BettiProfile p = BettiProfile::of(sizes_from_json(field(j, "betti", "profile"), "profile betti"),
                                          j.value("compact", false), j.value("oriented", false));
        if (p.betti.empty()) throw ValidationError("profile needs at least b0");
        if (j.contains("connected")) p.connected = j["connected"].get<bool>();
        return p;
    });
}

Json profile_to_json(const BettiProfile& p) {
    return {{"betti", p.betti}, {"connected", p.connected}, {"compact", p.compact}, {"oriented", p.oriented}};
}

SpaceMarker marker_from_json(const Json& j) {
    return guarded("cover piece", [&] {
        if (j.is_string()) {
            if (j.get<std::string>() == "contractible") return SpaceMarker::contractible();
            throw ValidationError("unknown cover piece marker '" + j.get<std::string>() + "'");
        }
        if (j.is_array()) return SpaceMarker::from_betti(sizes_from_json(j, "cover piece"));
        if (j.contains("contractible") && j["contractible"].get<bool>()) return SpaceMarker::contractible();
        if (j.contains("disjoint_contractibles")) {
            return SpaceMarker::disjoint_contractibles(j["disjoint_contractibles"].get<std::size_t>());
        }
        if (j.contains("homotopy_equivalent")) {
            return SpaceMarker::from_betti(sizes_from_json(j["homotopy_equivalent"], "cover piece"));
        }
        return SpaceMarker::from_betti(sizes_from_json(field(j, "betti", "cover piece"), "cover piece betti"));
    });
}

Json marker_to_json(const SpaceMarker& m) {
    switch (m.kind) {
        case SpaceMarker::Kind::Contractible:
            return {{"contractible", true}};
        case SpaceMarker::Kind::DisjointContractibles:
            return {{"disjoint_contractibles", m.pieces}};
        case SpaceMarker::Kind::Betti:
            break;
    }
    return {{"betti", m.betti}};
}

CoverSpec cover_from_json(const Json& j) {
    return guarded("cover", [&] {
        CoverSpec c;
        c.top_degree = field(j, "top_degree", "cover").get<std::size_t>();
        if (j.contains("u")) c.u = marker_from_json(j["u"]);
        if (j.contains("v")) c.v = marker_from_json(j["v"]);
        if (j.contains("uv")) c.uv = marker_from_json(j["uv"]);
        if (j.contains("m")) {
            c.m_equivalent = sizes_from_json(field(j["m"], "homotopy_equivalent", "cover m"), "cover m");
        }
        if (j.contains("incidence")) {
            const Json& inc = j["incidence"];
            const std::size_t rows = inc.size();
            const std::size_t cols = rows ? inc[0].size() : 0;
            c.incidence = matrix_from_json(inc, rows, cols);
        }
        if (j.contains("j_ranks")) {
            for (const auto& [k, v] : j["j_ranks"].items()) c.j_ranks[std::stoul(k)] = v.get<std::size_t>();
        }
        validate(c);
        return c;
    });
}

Json cover_to_json(const CoverSpec& c) {
    Json out = {{"top_degree", c.top_degree}};
    if (c.u) out["u"] = marker_to_json(*c.u);
    if (c.v) out["v"] = marker_to_json(*c.v);
    if (c.uv) out["uv"] = marker_to_json(*c.uv);
    if (c.m_equivalent) out["m"] = {{"homotopy_equivalent", *c.m_equivalent}};
    if (c.incidence) out["incidence"] = matrix_to_json(*c.incidence);
    if (!c.j_ranks.empty()) {
        Json ranks = Json::object();
        for (const auto& [k, v] : c.j_ranks) ranks[std::to_string(k)] = v;
        out["j_ranks"] = ranks;
    }
    return out;
}

SimplicialCover simplicial_cover_from_json(const Json& j) {
    return guarded("simplicial cover", [&] {
        const SpaceDocument doc = space_from_json(field(j, "space", "simplicial cover"));
        SimplicialCover c{doc.complex, subcomplex(doc.complex, simplices_from_json(field(j, "u", "simplicial cover"), "U")),
                          subcomplex(doc.complex, simplices_from_json(field(j, "v", "simplicial cover"), "V"))};
        return c;
    });
}

ComplexSES ses_from_json(const Json& j) {
    return guarded("short exact sequence", [&] {
        ComplexSES s;
        s.a = complex_from_json(field(j, "a", "ses"));
        s.b = complex_from_json(field(j, "b", "ses"));
        s.c = complex_from_json(field(j, "c", "ses"));
        const Json& f = field(j, "f", "ses");
        const Json& g = field(j, "g", "ses");
        if (f.size() != s.b.length() || g.size() != s.b.length()) {
            throw ValidationError("ses: need one f and one g matrix per degree");
        }
        for (std::size_t k = 0; k < f.size(); ++k) {
            const long lk = static_cast<long>(k);
            s.f.push_back(matrix_from_json(f[k], s.b.dim(lk), s.a.dim(lk)));
            s.g.push_back(matrix_from_json(g[k], s.c.dim(lk), s.b.dim(lk)));
        }
        return s;
    });
}

SmoothSimplex simplex_from_json(const Json& j) {
    return guarded("simplex", [&] {
        const auto degree = field(j, "degree", "simplex").get<std::size_t>();
        std::vector<Expr> comps;
        for (const auto& c : field(j, "components", "simplex")) comps.push_back(expr_from_json(c));
        return SmoothSimplex(degree, names_from_json(field(j, "target", "simplex"), "simplex target"), comps);
    });
}

Json simplex_to_json(const SmoothSimplex& s) {
    Json comps = Json::array();
    for (const auto& c : s.components()) comps.push_back(to_string(c));
    return {{"degree", s.degree()}, {"target", names_to_json(s.target())}, {"components", comps}};
}

SingularChain chain_from_json(const Json& j) {
    return guarded("chain", [&] {
        const Json* terms = &j;
        std::optional<SingularChain> chain;
        if (j.is_object() && j.contains("components")) {
            const SmoothSimplex s = simplex_from_json(j);
            SingularChain single(s.degree(), s.target());
            single.add(1, s);
            return single;
        }
        if (j.is_object()) {
            chain.emplace(field(j, "degree", "chain").get<std::size_t>(),
                          names_from_json(field(j, "target", "chain"), "chain target"));
            terms = &field(j, "terms", "chain");
        }
        if (!terms->is_array()) throw ValidationError("chain must be a list of {coeff, simplex} terms");
        for (const auto& t : *terms) {
            const SmoothSimplex s = simplex_from_json(field(t, "simplex", "chain term"));
            const Rational c = t.contains("coeff") ? rational_from_json(t["coeff"]) : Rational(1);
            if (!chain) chain.emplace(s.degree(), s.target());
            chain->add(c, s);
        }
        if (!chain) throw ValidationError("an empty chain needs the {\"degree\", \"target\", \"terms\"} form");
        return *chain;
    });
}

Json chain_to_json(const SingularChain& c) {
    Json terms = Json::array();
    for (const auto& [coef, s] : c.terms()) terms.push_back({{"coeff", rational_to_json(coef)}, {"simplex", simplex_to_json(s)}});
    return {{"degree", c.degree()}, {"target", names_to_json(c.target())}, {"terms", terms}};
}

CycleDocument cycles_from_json(const Json& j) {
    return guarded("cycles", [&] {
        CycleDocument doc;
        const Json* list = &j;
        if (j.is_object() && j.contains("cycles")) {
            list = &j["cycles"];
            if (j.contains("lattice")) {
                Lattice l;
                for (const auto& v : j["lattice"]) {
                    std::vector<Rational> vec;
                    for (const auto& x : v) vec.push_back(rational_from_json(x));
                    l.basis.push_back(std::move(vec));
                }
                doc.lattice = std::move(l);
            }
        } else if (j.is_object()) {
            doc.cycles.push_back(chain_from_json(j));
            return doc;
        }
        if (!list->is_array()) throw ValidationError("cycles must be a list");
        // A list of terms is a single chain; a list of lists/objects-with-terms is several.
        const bool single = !list->empty() && (*list)[0].is_object() && (*list)[0].contains("simplex");
        if (single) {
            doc.cycles.push_back(chain_from_json(*list));
        } else {
            for (const auto& c : *list) doc.cycles.push_back(chain_from_json(c));
        }
        return doc;
    });
}

std::vector<DifferentialForm> forms_from_json(const Json& j) {
    return guarded("forms", [&] {
        std::vector<DifferentialForm> out;
        if (j.is_object() && j.contains("forms")) return forms_from_json(j["forms"]);
        if (j.is_array()) {
            for (const auto& f : j) out.push_back(form_from_json(f));
        } else {
            out.push_back(form_from_json(j));
        }
        return out;
    });
}

Json mv_to_json(const MVResult& r) {
    Json betti = Json::array(), ranks = Json::array();
    for (const auto& b : r.betti) betti.push_back(b ? Json(*b) : Json("underdetermined"));
    for (const auto& q : r.j_ranks) ranks.push_back(q ? Json(*q) : Json(nullptr));
    return {{"betti", betti}, {"determined", r.determined()}, {"j_ranks", ranks}, {"missing", r.missing}};
}

Json duality_to_json(const DualityReport& r) {
    Json entries = Json::array();
    for (const auto& e : r.entries) entries.push_back({{"check", e.what}, {"lhs", e.lhs}, {"rhs", e.rhs}, {"ok", e.ok}});
    Json out = {{"status", to_string(r.status)}, {"entries", entries}};
    if (!r.reason.empty()) out["reason"] = r.reason;
    return out;
}

Json exactness_to_json(const ExactnessReport& r) {
    Json nodes = Json::array();
    for (const auto& n : r.nodes) {
        nodes.push_back({{"index", n.index},
                         {"label", n.label},
                         {"dim", n.dim},
                         {"rank_in", n.rank_in},
                         {"rank_out", n.rank_out},
                         {"composite_zero", n.composite_zero},
                         {"exact", n.exact}});
    }
    return {{"exact", r.exact}, {"nodes", nodes}};
}

Json zigzag_to_json(const ZigzagReport& r) {
    auto mats = [](const std::vector<RationalMatrix>& ms) {
        Json out = Json::array();
        for (const auto& m : ms) out.push_back(matrix_to_json(m));
        return out;
    };
    return {{"betti_a", r.betti_a},
            {"betti_b", r.betti_b},
            {"betti_c", r.betti_c},
            {"betti_a_from_sequence", r.betti_a_from_sequence()},
            {"f_star", mats(r.f_star)},
            {"g_star", mats(r.g_star)},
            {"delta", mats(r.delta)},
            {"exactness", exactness_to_json(r.exactness)}};
}

Json periods_to_json(const PeriodReport& r) {
    Json out = {{"matrix", r.matrix},
                {"singular_values", r.singular_values},
                {"rank", r.rank},
                {"rank_threshold", r.rank_threshold},
                {"perturbation_ok", r.perturbation_ok}};
    out["cycle_perturbation"] = r.cycle_perturbation ? Json(*r.cycle_perturbation) : Json(nullptr);
    out["form_perturbation"] = r.form_perturbation ? Json(*r.form_perturbation) : Json(nullptr);
    return out;
}

}  // namespace derham::io
