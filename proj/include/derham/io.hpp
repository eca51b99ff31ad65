#ifndef DERHAM_IO_HPP
#define DERHAM_IO_HPP

// JSON documents for every data type, and JSON renderings of reports.
// Malformed documents raise ValidationError with the offending field.

#include "derham/chains.hpp"
#include "derham/forms.hpp"
#include "derham/periods.hpp"
#include "derham/spaces.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace derham::io {

using Json = nlohmann::ordered_json;

Json read_json_file(const std::filesystem::path& path);

/// "p/q" strings or JSON integers.
Rational rational_from_json(const Json& j);
Json rational_to_json(const Rational& r);

RationalMatrix matrix_from_json(const Json& j, std::size_t rows, std::size_t cols);
Json matrix_to_json(const RationalMatrix& m);

/// {"coords": [...], "degree": k, "terms": [{"coeff": "<expr>", "dx": [i, ...]}, ...]}
DifferentialForm form_from_json(const Json& j);
Json form_to_json(const DifferentialForm& w);

/// {"source": [...], "target": [...], "components": ["<expr>", ...]}
SmoothMap map_from_json(const Json& j);
Json map_to_json(const SmoothMap& f);

/// {"dims": [n0, ...], "differentials": [[["p/q", ...], ...], ...]}
CochainComplex complex_from_json(const Json& j);
Json complex_to_json(const CochainComplex& c);

struct SpaceDocument {
    SimplicialComplex complex;
    bool compact = false;
    bool oriented = false;
};
/// {"n": 2, "simplices": [[0], [0, 1], ...], "flags": {"compact": true, "oriented": true}}; faces may be omitted.
SpaceDocument space_from_json(const Json& j);
Json space_to_json(const SimplicialComplex& s, bool compact = false, bool oriented = false);

/// {"betti": [...], "compact": bool, "oriented": bool, "connected": bool}; connected defaults to b0 == 1.
BettiProfile profile_from_json(const Json& j);
Json profile_to_json(const BettiProfile& p);

/// A piece marker: "contractible", {"contractible": true}, {"disjoint_contractibles": p} or {"betti": [...]}.
SpaceMarker marker_from_json(const Json& j);
Json marker_to_json(const SpaceMarker& m);

/**
 * {"top_degree": N, "u": marker, "v": marker, "uv": marker,
 *  "m": {"homotopy_equivalent": [...]}, "incidence": [[1, -1], ...], "j_ranks": {"1": 1}}
 */
CoverSpec cover_from_json(const Json& j);
Json cover_to_json(const CoverSpec& c);

struct SimplicialCover {
    SimplicialComplex space, u, v;
};
/// {"space": space document, "u": [[simplex], ...], "v": [[simplex], ...]}
SimplicialCover simplicial_cover_from_json(const Json& j);

/// Explicit SES: {"a": complex, "b": complex, "c": complex, "f": [matrix per degree], "g": [...]}
ComplexSES ses_from_json(const Json& j);

/// {"degree": k, "target": [...], "components": ["<expr in t1..tk>", ...]}
SmoothSimplex simplex_from_json(const Json& j);
Json simplex_to_json(const SmoothSimplex& s);

/// [{"coeff": "p/q", "simplex": {...}}, ...]; an empty list needs {"degree", "target", "terms"} form.
/// A bare simplex document is read as that simplex with coefficient 1.
SingularChain chain_from_json(const Json& j);
Json chain_to_json(const SingularChain& c);

/// Cycle list: a chain, a list of chains, or {"cycles": [...], "lattice": [[...], ...]}.
struct CycleDocument {
    std::vector<SingularChain> cycles;
    std::optional<Lattice> lattice;
};
CycleDocument cycles_from_json(const Json& j);

/// A form document, a list of them, or {"forms": [...]}.
std::vector<DifferentialForm> forms_from_json(const Json& j);

Json mv_to_json(const MVResult& r);
Json duality_to_json(const DualityReport& r);
Json exactness_to_json(const ExactnessReport& r);
Json zigzag_to_json(const ZigzagReport& r);
Json periods_to_json(const PeriodReport& r);

}  // namespace derham::io

#endif
