#ifndef DERHAM_CHAINS_HPP
#define DERHAM_CHAINS_HPP

#include "derham/matrix.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace derham {

/**
 * Finite cochain complex 0 -> C^0 -> C^1 -> ... -> C^N -> 0 over Q.
 *
 * `differential(k)` is the n_{k+1} x n_k matrix of d_k. Only d_0 .. d_{N-1}
 * are stored; d_N and d_{-1} are the zero maps to and from the zero space.
 */
class CochainComplex {
public:
    CochainComplex() = default;
    /// Validates shapes. d∘d = 0 is checked by `first_square_failure` / `betti`.
    CochainComplex(std::vector<std::size_t> dims, std::vector<RationalMatrix> differentials);

    /// Complex with the given dimensions and all differentials zero.
    static CochainComplex zero(std::vector<std::size_t> dims);

    std::size_t top_degree() const { return dims_.empty() ? 0 : dims_.size() - 1; }
    std::size_t length() const { return dims_.size(); }
    const std::vector<std::size_t>& dims() const { return dims_; }
    std::size_t dim(long k) const;
    /// d_k for any integer k; zero matrices outside the stored range.
    RationalMatrix differential(long k) const;
    const std::vector<RationalMatrix>& differentials() const { return differentials_; }

    /// Lowest degree k with d_{k+1} d_k != 0, if any.
    std::optional<std::size_t> first_square_failure() const;

private:
    std::vector<std::size_t> dims_;
    std::vector<RationalMatrix> differentials_;
};

/// dim H^k = (n_k - rank d_k) - rank d_{k-1}; throws ValidationError naming the first degree where d∘d != 0.
std::vector<std::size_t> betti(const CochainComplex& c);

/// Betti numbers of the dual chain complex (boundary maps ∂_{k+1} = d_k^T); equal to `betti` over a field.
std::vector<std::size_t> homology_betti(const CochainComplex& c);

/**
 * Echelon representatives of H^k = ker d_k / im d_{k-1}: the kernel basis
 * vectors that are pivots after the image basis in column order.
 */
struct CohomologyBasis {
    std::vector<RationalMatrix> image;            ///< independent columns spanning im d_{k-1}
    std::vector<RationalMatrix> representatives;  ///< n_k x h_k cocycles

    std::size_t dim(std::size_t k) const { return representatives[k].cols(); }

    /// Coordinates of the class of cocycle z in the basis of H^k. Throws if z is not a cocycle.
    RationalVector coordinates(std::size_t k, const RationalVector& z) const;
};

CohomologyBasis cohomology_basis(const CochainComplex& c);

/// Matrix of the map induced on cohomology by a cochain map `f` (per degree) between complexes.
RationalMatrix induced_map(const CohomologyBasis& from, const CohomologyBasis& to, std::size_t k,
                           const RationalMatrix& f);

/// A finite sequence of vector spaces V_0 -> V_1 -> ... with maps[i]: V_i -> V_{i+1}.
struct ExactSequence {
    std::vector<std::size_t> dims;
    std::vector<RationalMatrix> maps;
    std::vector<std::string> labels;  ///< optional, one per node
};

struct ExactnessReport {
    struct Node {
        std::size_t index = 0;
        std::string label;
        std::size_t dim = 0;
        std::size_t rank_in = 0;
        std::size_t rank_out = 0;
        bool composite_zero = true;
        bool exact = true;
    };
    std::vector<Node> nodes;  ///< interior nodes only
    bool exact = true;
};

/// At each interior node: im(in) = ker(out) via out*in = 0 and rank in + rank out = dim.
ExactnessReport check_exactness(const ExactSequence& s);

/// Short exact sequence 0 -> A -> B -> C -> 0 of cochain complexes with maps f: A->B, g: B->C per degree.
struct ComplexSES {
    CochainComplex a, b, c;
    std::vector<RationalMatrix> f, g;
};

/// Throws ValidationError identifying the degree and the violated axiom.
void validate(const ComplexSES& s);

struct ZigzagReport {
    std::vector<std::size_t> betti_a, betti_b, betti_c;
    std::vector<RationalMatrix> f_star;  ///< H^k(A) -> H^k(B)
    std::vector<RationalMatrix> g_star;  ///< H^k(B) -> H^k(C)
    std::vector<RationalMatrix> delta;   ///< H^k(C) -> H^{k+1}(A); the last one maps to 0
    /// 0 -> H^0(A) -> H^0(B) -> H^0(C) -> H^1(A) -> ... -> H^N(C) -> 0
    ExactSequence long_sequence;
    ExactnessReport exactness;

    /// dim H^k(A) recovered from the sequence alone: rank δ_{k-1} + dim H^k(B) - rank g*_k.
    std::vector<std::size_t> betti_a_from_sequence() const;
};

/// Builds the long exact cohomology sequence, constructing δ by the zigzag
/// c -> b with g b = c -> d b -> a with f a = d b -> [a].
ZigzagReport zigzag(const ComplexSES& s);

}  // namespace derham

#endif
