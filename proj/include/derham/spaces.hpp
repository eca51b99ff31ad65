#ifndef DERHAM_SPACES_HPP
#define DERHAM_SPACES_HPP

#include "derham/chains.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace derham {

using Simplex = std::vector<std::size_t>;  ///< sorted vertex indices

/// Finite abstract simplicial complex on vertices 0 .. vertex_count-1.
class SimplicialComplex {
public:
    enum class Closure { Compute, Require };

    SimplicialComplex() = default;
    /**
     * With Closure::Compute missing faces are added and duplicates merged.
     * With Closure::Require a missing face or a duplicate is a ValidationError.
     * `dimension` defaults to the largest simplex dimension.
     */
    SimplicialComplex(std::size_t vertex_count, std::vector<Simplex> simplices, Closure closure = Closure::Compute,
                      std::optional<std::size_t> dimension = std::nullopt);

    std::size_t vertex_count() const { return vertex_count_; }
    /// Declared dimension n.
    std::size_t dimension() const { return dimension_; }
    /// Largest k with a k-simplex, or 0 when empty.
    std::size_t top_simplex_dimension() const { return by_degree_.empty() ? 0 : by_degree_.size() - 1; }
    /// k-simplices in lexicographic order; empty for k beyond the top.
    const std::vector<Simplex>& simplices(std::size_t k) const;
    std::size_t count(std::size_t k) const { return simplices(k).size(); }
    std::size_t size() const;
    bool contains(const Simplex& s) const;
    /// Position of a k-simplex inside simplices(k).
    std::optional<std::size_t> index_of(const Simplex& s) const;
    std::vector<Simplex> all_simplices() const;
    /// Simplices not a proper face of another.
    std::vector<Simplex> maximal_simplices() const;

    /// Same vertex set, simplices shared with `other`.
    SimplicialComplex intersection(const SimplicialComplex& other) const;
    bool is_subcomplex_of(const SimplicialComplex& other) const;

private:
    std::size_t vertex_count_ = 0;
    std::size_t dimension_ = 0;
    std::vector<std::vector<Simplex>> by_degree_;
    std::map<Simplex, std::size_t> index_;
};

/// Simplicial coboundary complex padded with zero spaces up to `length` degrees (default top+1).
CochainComplex coboundary_complex(const SimplicialComplex& s, std::optional<std::size_t> length = std::nullopt);

/// Number of connected components by union-find on the 1-skeleton.
std::size_t union_find_components(const SimplicialComplex& s);

/// Component label of every vertex (labels 0..r-1 in order of first appearance).
std::vector<std::size_t> component_labels(const SimplicialComplex& s);

/// b_0 of the coboundary complex; throws std::logic_error if it disagrees with union-find.
std::size_t component_count(const SimplicialComplex& s);

/// Dimension-level description of a space: Betti numbers and geometric flags.
struct BettiProfile {
    std::vector<std::size_t> betti;  ///< b_0 .. b_n
    bool connected = false;
    bool compact = false;
    bool oriented = false;

    std::size_t dimension() const { return betti.empty() ? 0 : betti.size() - 1; }
    static BettiProfile of(std::vector<std::size_t> b, bool compact = false, bool oriented = false);
};

/// Poincaré-polynomial product; flags combine by conjunction.
BettiProfile kunneth(const BettiProfile& a, const BettiProfile& b);

enum class CheckStatus { Pass, Fail, Refused };
std::string to_string(CheckStatus s);

struct DualityReport {
    struct Entry {
        std::string what;  ///< e.g. "b0 = b2" or "b0 = 1"
        std::size_t lhs = 0, rhs = 0;
        bool ok = true;
    };
    CheckStatus status = CheckStatus::Pass;
    std::string reason;  ///< set when refused
    std::vector<Entry> entries;
};

/// b_k = b_{n-k} for compact oriented profiles, and b_0 = b_n = 1 when also connected.
DualityReport duality_check(const BettiProfile& p);

/// True when no Betti number above degree n is nonzero.
bool vanishing_check(const BettiProfile& p, std::size_t n);

/**
 * Homotopy-level description of one piece of a cover. Explicit Betti lists,
 * `contractible` and `disjoint union of p contractibles` markers are all
 * conclusions of the homotopy axiom supplied by the user.
 */
struct SpaceMarker {
    enum class Kind { Betti, Contractible, DisjointContractibles };
    Kind kind = Kind::Betti;
    std::vector<std::size_t> betti;
    std::size_t pieces = 1;

    static SpaceMarker from_betti(std::vector<std::size_t> b) { return {Kind::Betti, std::move(b), 1}; }
    static SpaceMarker contractible() { return {Kind::Contractible, {}, 1}; }
    static SpaceMarker disjoint_contractibles(std::size_t p) { return {Kind::DisjointContractibles, {}, p}; }

    /// b_0 .. b_top.
    std::vector<std::size_t> profile(std::size_t top) const;
};

/// Mayer-Vietoris input for M = U ∪ V.
struct CoverSpec {
    std::size_t top_degree = 0;
    std::optional<SpaceMarker> u, v, uv;
    /// Declared homotopy type of M itself, when known.
    std::optional<std::vector<std::size_t>> m_equivalent;
    /**
     * Matrix of H^0(U) ⊕ H^0(V) -> H^0(U∩V): one row per component of U∩V with
     * a single +1 in the column of the U component containing it and a single
     * -1 in the column of the V component containing it.
     */
    std::optional<RationalMatrix> incidence;
    /// User-supplied ranks of j*_k (k >= 1).
    std::map<std::size_t, std::size_t> j_ranks;
};

void validate(const CoverSpec& c);

struct MVResult {
    std::vector<std::optional<std::size_t>> betti;  ///< nullopt where underdetermined
    std::vector<std::optional<std::size_t>> j_ranks;
    std::vector<std::string> missing;  ///< one message per missing rank datum
    bool determined() const;
    /// Betti numbers, throwing if any degree is underdetermined.
    std::vector<std::size_t> values() const;
};

/// Solves the dimension constraints of the Mayer-Vietoris sequence.
/// Throws ValidationError naming the violated segment when inconsistent.
MVResult mv_solve(const CoverSpec& c);

/// 0 -> C*(s) -> C*(U) ⊕ C*(V) -> C*(U∩V) -> 0 with restriction and difference of restrictions.
ComplexSES simplicial_mv_ses(const SimplicialComplex& s, const SimplicialComplex& u, const SimplicialComplex& v);

/// Dimension-level cover spec computed from a simplicial cover: Betti numbers of the
/// pieces, component incidence, and ranks of j* from restriction on cohomology.
CoverSpec cover_spec_from_simplicial(const SimplicialComplex& s, const SimplicialComplex& u,
                                     const SimplicialComplex& v);

/// Closure of the given simplices inside the vertex set of `s`; throws if not contained in `s`.
SimplicialComplex subcomplex(const SimplicialComplex& s, const std::vector<Simplex>& simplices);

namespace models {

SimplicialComplex point();
/// Single edge.
SimplicialComplex interval();
/// Hollow triangle.
SimplicialComplex circle();
/// Boundary of the tetrahedron.
SimplicialComplex sphere2();
/// 3 x 3 grid torus with diagonal triangulation; vertex (i, j) has index 3i + j.
SimplicialComplex torus();
/// Vertices of b are shifted past those of a.
SimplicialComplex disjoint_union(const SimplicialComplex& a, const SimplicialComplex& b);
/// Staircase triangulation of |a| x |b|; vertex (p, q) has index p * b.vertex_count() + q.
SimplicialComplex product(const SimplicialComplex& a, const SimplicialComplex& b);

}  // namespace models

}  // namespace derham

#endif
