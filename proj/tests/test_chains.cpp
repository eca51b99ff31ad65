#include "derham/chains.hpp"
#include "derham/error.hpp"
#include "generators.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <numeric>

using namespace derham;
using derham::gen::Rng;
using derham::gen::uniform_int;

namespace {

RationalMatrix mat(std::vector<std::vector<int>> rows, std::size_t cols = 0) {
    std::vector<std::vector<Rational>> r;
    for (const auto& row : rows) r.emplace_back(row.begin(), row.end());
    return RationalMatrix::from_rows(r, cols);
}

// Leibniz-formula determinant; exponential but fine for k <= 5.
Rational permutation_det(const RationalMatrix& m) {
    const std::size_t n = m.rows();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Rational total = 0;
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
        Rational term = inversions % 2 ? -1 : 1;
        for (std::size_t i = 0; i < n; ++i) term *= m(i, perm[i]);
        total += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur;
    auto rec = [&](auto&& self, std::size_t start) -> void {
        if (cur.size() == k) {
            out.push_back(cur);
            return;
        }
        for (std::size_t i = start; i < n; ++i) {
            cur.push_back(i);
            self(self, i + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

// Largest r with a nonzero r x r minor.
std::size_t minor_rank(const RationalMatrix& m) {
    for (std::size_t r = std::min(m.rows(), m.cols()); r > 0; --r) {
        for (const auto& rows : subsets(m.rows(), r)) {
            const RationalMatrix sub = m.transpose().columns(rows).transpose();
            for (const auto& cols : subsets(m.cols(), r)) {
                if (permutation_det(sub.columns(cols)) != 0) return r;
            }
        }
    }
    return 0;
}

long euler(const std::vector<std::size_t>& v) {
    long chi = 0;
    for (std::size_t k = 0; k < v.size(); ++k) chi += (k % 2 ? -1 : 1) * static_cast<long>(v[k]);
    return chi;
}

// Hollow triangle: vertices 0,1,2 and edges 01, 12, 02; d0 maps vertex values to edge differences.
CochainComplex hollow_triangle() {
    return CochainComplex({3, 3}, {mat({{-1, 1, 0}, {0, -1, 1}, {-1, 0, 1}})});
}

}  // namespace

TEST_CASE("rank examples", "[chains]") {
    CHECK(rank(RationalMatrix::identity(3)) == 3);
    CHECK(rank(mat({{1, -1}, {1, -1}})) == 1);
    CHECK(rank(RationalMatrix(3, 4)) == 0);
    CHECK(rank(RationalMatrix(0, 4)) == 0);
}

TEST_CASE("rank agrees with the minor oracle", "[chains][property]") {
    Rng rng(11);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t r = uniform_int(rng, 1, 5), c = uniform_int(rng, 1, 5);
        RationalMatrix m = gen::random_matrix(rng, r, c);
        if (trial % 2) {
            // Force low rank through a thin factorization.
            const std::size_t inner = uniform_int(rng, 0, 3);
            m = gen::random_matrix(rng, r, inner) * gen::random_matrix(rng, inner, c);
        }
        if (trial % 5 == 0) m(0, 0) = Rational(uniform_int(rng, 1, 7), uniform_int(rng, 2, 9));
        INFO(to_string(m));
        CHECK(rank(m) == minor_rank(m));
    }
}

TEST_CASE("kernel, solve and inverse", "[chains]") {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t r = uniform_int(rng, 1, 4), c = uniform_int(rng, 1, 5);
        const RationalMatrix m = gen::random_matrix(rng, r, c, 2);
        const RationalMatrix k = kernel_basis(m);
        CHECK(k.cols() == c - rank(m));
        CHECK((m * k).is_zero());
        CHECK(rank(k) == k.cols());

        RationalVector x(c);
        for (auto& v : x) v = gen::small_rational(rng);
        const RationalVector b = m.apply(x);
        auto sol = solve(m, b);
        REQUIRE(sol);
        CHECK(m.apply(*sol) == b);

        const RationalMatrix inv_src = gen::random_invertible(rng, r);
        auto inv = inverse(inv_src);
        REQUIRE(inv);
        CHECK(inv_src * *inv == RationalMatrix::identity(r));
    }
    CHECK_FALSE(solve(mat({{1, 1}, {1, 1}}), {Rational(0), Rational(1)}));
    CHECK_FALSE(inverse(mat({{1, 2}, {2, 4}})));
}

TEST_CASE("betti examples", "[chains]") {
    CHECK(betti(CochainComplex::zero({1, 1})) == std::vector<std::size_t>{1, 1});
    CHECK(betti(hollow_triangle()) == std::vector<std::size_t>{1, 1});
    CHECK(betti(CochainComplex({1, 1}, {mat({{1}})})) == std::vector<std::size_t>{0, 0});
    CHECK(homology_betti(hollow_triangle()) == std::vector<std::size_t>{1, 1});
}

TEST_CASE("complex validation", "[chains]") {
    CHECK_THROWS_AS(CochainComplex({2, 1}, {mat({{1, 1}, {0, 1}})}), ValidationError);
    CHECK_THROWS_AS(CochainComplex({2, 1}, {}), ValidationError);
    // d1 d0 != 0 in degree 0.
    CochainComplex bad({1, 1, 1}, {mat({{1}}), mat({{1}})});
    REQUIRE(bad.first_square_failure() == std::optional<std::size_t>(0));
    CHECK_THROWS_WITH(betti(bad), Catch::Matchers::ContainsSubstring("degree 0"));
}

TEST_CASE("Euler characteristic and basis-change invariance", "[chains][property]") {
    Rng rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        const CochainComplex c = gen::random_complex(rng, 4, 5);
        const auto b = betti(c);
        CHECK(euler(b) == euler(c.dims()));
        CHECK(betti(gen::change_basis(rng, c)) == b);
        CHECK(homology_betti(c) == b);
        const CohomologyBasis basis = cohomology_basis(c);
        for (std::size_t k = 0; k < c.length(); ++k) {
            CHECK(basis.dim(k) == b[k]);
            CHECK((c.differential(static_cast<long>(k)) * basis.representatives[k]).is_zero());
        }
    }
}

TEST_CASE("exactness checker", "[chains]") {
    ExactSequence id{{0, 1, 1, 0}, {RationalMatrix(1, 0), mat({{1}}), RationalMatrix(0, 1)}, {}};
    CHECK(check_exactness(id).exact);

    ExactSequence zero{{0, 1, 1, 0}, {RationalMatrix(1, 0), mat({{0}}), RationalMatrix(0, 1)}, {}};
    const auto rz = check_exactness(zero);
    CHECK_FALSE(rz.exact);
    REQUIRE(rz.nodes.size() == 2);
    CHECK_FALSE(rz.nodes[0].exact);
    CHECK_FALSE(rz.nodes[1].exact);

    // 0 -> R -> R^2 -> R^2 -> H^1 -> 0 with H^1 one-dimensional.
    ExactSequence circle{{0, 1, 2, 2, 1, 0},
                         {RationalMatrix(1, 0), mat({{1}, {1}}), mat({{1, -1}, {1, -1}}), mat({{1, -1}}),
                          RationalMatrix(0, 1)},
                         {}};
    CHECK(check_exactness(circle).exact);
    circle.dims[4] = 2;
    circle.maps[3] = mat({{1, -1}, {0, 0}});
    circle.maps[4] = RationalMatrix(0, 2);
    CHECK_FALSE(check_exactness(circle).exact);

    ExactSequence bad_shape{{1, 2}, {mat({{1, 1}})}, {}};
    CHECK_THROWS_AS(check_exactness(bad_shape), ValidationError);
}

TEST_CASE("zigzag with zero-differential outer complexes", "[chains]") {
    // B = A (+) C with every differential zero: delta vanishes and H(B) = B.
    ComplexSES s;
    s.a = CochainComplex::zero({1, 2});
    s.c = CochainComplex::zero({2, 1});
    s.b = CochainComplex::zero({3, 3});
    s.f = {mat({{1}, {0}, {0}}), mat({{1, 0}, {0, 1}, {0, 0}})};
    s.g = {mat({{0, 1, 0}, {0, 0, 1}}), mat({{0, 0, 1}})};
    const ZigzagReport r = zigzag(s);
    CHECK(r.betti_b == std::vector<std::size_t>{3, 3});
    for (const auto& m : r.delta) CHECK(m.is_zero());
    CHECK(r.exactness.exact);
}

TEST_CASE("short exact sequence validation names the axiom", "[chains]") {
    ComplexSES s;
    s.a = CochainComplex::zero({1});
    s.b = CochainComplex::zero({1});
    s.c = CochainComplex::zero({1});
    s.f = {mat({{1}})};
    s.g = {mat({{1}})};
    CHECK_THROWS_WITH(validate(s), Catch::Matchers::ContainsSubstring("im f != ker g"));

    s.c = CochainComplex::zero({0});
    s.g = {RationalMatrix(0, 1)};
    s.f = {mat({{0}})};
    CHECK_THROWS_WITH(validate(s), Catch::Matchers::ContainsSubstring("injective"));

    // f does not commute with d: A has d = 1, B has d = 0.
    ComplexSES t;
    t.a = CochainComplex({1, 1}, {mat({{1}})});
    t.b = CochainComplex::zero({1, 1});
    t.c = CochainComplex::zero({0, 0});
    t.f = {mat({{1}}), mat({{1}})};
    t.g = {RationalMatrix(0, 1), RationalMatrix(0, 1)};
    CHECK_THROWS_WITH(validate(t), Catch::Matchers::ContainsSubstring("commute") &&
                                       Catch::Matchers::ContainsSubstring("degree 0"));
}

TEST_CASE("zigzag yields exact long sequences", "[chains][property]") {
    Rng rng(4242);
    for (int trial = 0; trial < 60; ++trial) {
        const ComplexSES s = gen::random_ses(rng, 4, 5);
        REQUIRE_NOTHROW(validate(s));
        const ZigzagReport r = zigzag(s);
        CHECK(r.exactness.exact);
        CHECK(r.betti_a == betti(s.a));
        CHECK(r.betti_b == betti(s.b));
        CHECK(r.betti_c == betti(s.c));
        CHECK(r.betti_a_from_sequence() == r.betti_a);
    }
}

TEST_CASE("acyclic middle complex makes delta bijective", "[chains][property]") {
    Rng rng(8);
    for (int trial = 0; trial < 40; ++trial) {
        const ComplexSES s = gen::random_ses(rng, 4, 4, true);
        const auto hb = betti(s.b);
        REQUIRE(std::all_of(hb.begin(), hb.end(), [](std::size_t h) { return h == 0; }));
        const auto ha = betti(s.a), hc = betti(s.c);
        const ZigzagReport r = zigzag(s);
        REQUIRE(r.exactness.exact);
        CHECK(ha[0] == 0);
        for (std::size_t k = 0; k < hc.size(); ++k) {
            const std::size_t next = k + 1 < ha.size() ? ha[k + 1] : 0;
            CHECK(r.delta[k].rows() == next);
            CHECK(r.delta[k].cols() == hc[k]);
            CHECK(rank(r.delta[k]) == hc[k]);
            CHECK(hc[k] == next);
        }
    }
}
