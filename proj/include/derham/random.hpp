#ifndef DERHAM_RANDOM_HPP
#define DERHAM_RANDOM_HPP

// Seeded generators for random instances used by property checks.

#include "derham/chains.hpp"
#include "derham/expr.hpp"
#include "derham/forms.hpp"
#include "derham/periods.hpp"
#include "derham/spaces.hpp"

#include <random>
#include <string>
#include <vector>

namespace derham::gen {

using Rng = std::mt19937_64;

int uniform_int(Rng& rng, int lo, int hi);
Rational small_rational(Rng& rng, int range = 5);

/// Random polynomial of total degree <= `degree` with a few terms.
Expr random_polynomial(Rng& rng, const std::vector<std::string>& vars, int degree, int terms = 3);

/// Random rational-fragment expression; denominators are 1 plus a sum of squares, so never zero on R^n.
Expr random_rational_expr(Rng& rng, const std::vector<std::string>& vars, int depth);

/// Random expression that may contain sin, cos and exp.
Expr random_expr(Rng& rng, const std::vector<std::string>& vars, int depth);

/// All strictly increasing multi-indices of length k drawn from 1..n.
std::vector<MultiIndex> all_indices(int n, int k);

/// Random k-form with polynomial or tame rational coefficients.
DifferentialForm random_form(Rng& rng, const std::vector<std::string>& coords, int k);

/// Random k-form whose coefficients are polynomials of degree <= 3.
DifferentialForm random_polynomial_form(Rng& rng, const std::vector<std::string>& coords, int k);

/// Random affine k-simplex with small rational vertices, optionally bent by quadratic terms in t.
SmoothSimplex random_simplex(Rng& rng, const std::vector<std::string>& target, std::size_t k, bool quadratic);

SmoothMap random_polynomial_map(Rng& rng, const std::vector<std::string>& source,
                                const std::vector<std::string>& target, int degree = 2);

/// Random invertible n x n matrix with small entries.
RationalMatrix random_invertible(Rng& rng, std::size_t n);

/// Random rows x cols matrix with small rational entries.
RationalMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, int range = 3);

/**
 * Random short exact sequence 0 -> A -> B -> C -> 0. B is a direct sum of
 * elementary pieces (a line with zero differential, or an isomorphism between
 * adjacent degrees) in a scrambled basis; A is a d-stable sum of coordinate
 * subspaces and C the quotient. With `acyclic_b` only isomorphism pieces are used.
 */
ComplexSES random_ses(Rng& rng, std::size_t max_top_degree, std::size_t max_dim, bool acyclic_b = false);

/// Random cochain complex built the same way as B above.
CochainComplex random_complex(Rng& rng, std::size_t max_top_degree, std::size_t max_dim);

/// Conjugates every differential by random invertible basis changes.
CochainComplex change_basis(Rng& rng, const CochainComplex& c);

/// Random connected complex on `vertices` vertices (spanning tree plus extra edges and triangles).
SimplicialComplex random_connected_complex(Rng& rng, std::size_t vertices, std::size_t extra);

/// Random complex with at most `max_simplices` simplices, not necessarily connected, dimension <= 2.
SimplicialComplex random_complex_simplicial(Rng& rng, std::size_t max_vertices, std::size_t max_simplices);

/// Random cover of `s` by two subcomplexes: each maximal simplex goes to U, V or both.
std::pair<SimplicialComplex, SimplicialComplex> random_cover(Rng& rng, const SimplicialComplex& s);

}  // namespace derham::gen

#endif
