#include "derham/error.hpp"
#include "derham/spaces.hpp"
#include "generators.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace derham;
using derham::gen::Rng;
using derham::gen::uniform_int;
using Betti = std::vector<std::size_t>;

namespace {

Betti betti_of(const SimplicialComplex& s) { return betti(coboundary_complex(s)); }

RationalMatrix mat(std::vector<std::vector<int>> rows) {
    std::vector<std::vector<Rational>> r;
    for (const auto& row : rows) r.emplace_back(row.begin(), row.end());
    return RationalMatrix::from_rows(r);
}

// Two arcs covering the hollow triangle; they meet in two points.
std::pair<SimplicialComplex, SimplicialComplex> circle_arcs(const SimplicialComplex& c) {
    return {subcomplex(c, {{0, 1}, {1, 2}}), subcomplex(c, {{0, 2}})};
}

// Torus cut along two vertex rows into two bands.
std::pair<SimplicialComplex, SimplicialComplex> torus_bands(const SimplicialComplex& t) {
    std::vector<Simplex> u, v;
    for (const auto& tri : t.maximal_simplices()) {
        // Triangles of square row i contain vertices from rows i and i+1 only.
        std::set<std::size_t> rows;
        for (auto x : tri) rows.insert(x / 3);
        const bool last_band = rows.count(2) && rows.count(0);
        (last_band ? v : u).push_back(tri);
    }
    return {subcomplex(t, u), subcomplex(t, v)};
}

Betti trimmed(Betti b) {
    while (b.size() > 1 && b.back() == 0) b.pop_back();
    return b;
}

}  // namespace

TEST_CASE("coboundary complexes of small models", "[spaces]") {
    CHECK(betti_of(models::point()) == Betti{1});
    CHECK(betti_of(models::circle()) == Betti{1, 1});
    CHECK(betti_of(SimplicialComplex(2, {{0}, {1}})) == Betti{2});
    CHECK(betti_of(models::sphere2()) == Betti{1, 0, 1});
    CHECK(betti_of(models::interval()) == Betti{1, 0});
    CHECK(betti_of(models::torus()) == Betti{1, 2, 1});
    const SimplicialComplex t = models::torus();
    CHECK(t.count(0) == 9);
    CHECK(t.count(1) == 27);
    CHECK(t.count(2) == 18);
}

TEST_CASE("simplicial complex validation", "[spaces]") {
    using C = SimplicialComplex::Closure;
    CHECK_THROWS_WITH(SimplicialComplex(3, {{0, 1}}, C::Require), Catch::Matchers::ContainsSubstring("missing"));
    CHECK_THROWS_AS(SimplicialComplex(3, {{0}, {0}}, C::Require), ValidationError);
    CHECK_THROWS_AS(SimplicialComplex(2, {{0, 2}}), ValidationError);
    CHECK_THROWS_AS(SimplicialComplex(2, {{1, 1}}), ValidationError);
    CHECK(SimplicialComplex(3, {{2, 0, 1}}).size() == 7);
}

TEST_CASE("coboundary squares to zero on random complexes", "[spaces][property]") {
    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const auto s = gen::random_complex_simplicial(rng, 8, 40);
        CHECK_FALSE(coboundary_complex(s).first_square_failure());
    }
}

TEST_CASE("component counts", "[spaces]") {
    const auto c = models::circle();
    const auto three = models::disjoint_union(models::disjoint_union(c, c), c);
    CHECK(component_count(three) == 3);
    CHECK(component_count(models::torus()) == 1);
    CHECK(component_count(SimplicialComplex(0, {})) == 0);

    Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const auto s = gen::random_complex_simplicial(rng, 12, 40);
        CHECK(betti_of(s)[0] == union_find_components(s));
    }
}

TEST_CASE("disjoint unions of connected pieces", "[spaces][property]") {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const int r = uniform_int(rng, 1, 6);
        SimplicialComplex s = gen::random_connected_complex(rng, uniform_int(rng, 1, 5), uniform_int(rng, 0, 4));
        for (int i = 1; i < r; ++i) {
            s = models::disjoint_union(s, gen::random_connected_complex(rng, uniform_int(rng, 1, 5), uniform_int(rng, 0, 4)));
        }
        CHECK(component_count(s) == static_cast<std::size_t>(r));
    }
}

TEST_CASE("Mayer-Vietoris dimension solver", "[spaces]") {
    CoverSpec circle;
    circle.top_degree = 1;
    circle.u = SpaceMarker::contractible();
    circle.v = SpaceMarker::contractible();
    circle.uv = SpaceMarker::disjoint_contractibles(2);
    circle.incidence = mat({{1, -1}, {1, -1}});
    CHECK(mv_solve(circle).values() == Betti{1, 1});

    CoverSpec punctured;
    punctured.top_degree = 2;
    punctured.m_equivalent = Betti{1, 1};
    CHECK(mv_solve(punctured).values() == Betti{1, 1, 0});

    CoverSpec ball;
    ball.top_degree = 3;
    ball.u = ball.v = ball.uv = SpaceMarker::contractible();
    CHECK(mv_solve(ball).values() == Betti{1, 0, 0, 0});

    // Torus from two bands: j*_1 is needed.
    CoverSpec torus;
    torus.top_degree = 2;
    torus.u = torus.v = SpaceMarker::from_betti({1, 1});
    torus.uv = SpaceMarker::from_betti({2, 2});
    torus.incidence = mat({{1, -1}, {1, -1}});
    const MVResult partial = mv_solve(torus);
    CHECK_FALSE(partial.determined());
    CHECK(partial.betti[0] == std::optional<std::size_t>(1));
    CHECK_FALSE(partial.betti[1]);
    CHECK_FALSE(partial.betti[2]);
    REQUIRE(partial.missing.size() == 1);
    CHECK_THAT(partial.missing[0], Catch::Matchers::ContainsSubstring("H^1(U)"));
    torus.j_ranks[1] = 1;
    CHECK(mv_solve(torus).values() == Betti{1, 2, 1});

    // A rank above both dimensions is impossible.
    torus.j_ranks[1] = 3;
    CHECK_THROWS_WITH(mv_solve(torus), Catch::Matchers::ContainsSubstring("segment H^1"));

    CoverSpec bad = circle;
    bad.incidence = mat({{1, 1}, {1, -1}});
    CHECK_THROWS_AS(mv_solve(bad), ValidationError);
    bad.incidence = mat({{1, -1}});
    CHECK_THROWS_AS(mv_solve(bad), ValidationError);

    // Top degree forces j* onto: a circle cover with top degree 0 is inconsistent.
    CoverSpec flat = circle;
    flat.top_degree = 0;
    CHECK_THROWS_AS(mv_solve(flat), ValidationError);

    CoverSpec lying = circle;
    lying.m_equivalent = Betti{1, 0};
    CHECK_THROWS_WITH(mv_solve(lying), Catch::Matchers::ContainsSubstring("declared"));
}

TEST_CASE("Kunneth products", "[spaces]") {
    const auto s1 = BettiProfile::of({1, 1}, true, true);
    const auto pt = BettiProfile::of({1}, true, true);
    const auto line = BettiProfile::of({1, 0});
    const auto t2 = kunneth(s1, s1);
    CHECK(t2.betti == Betti{1, 2, 1});
    CHECK(t2.compact);
    CHECK(t2.connected);
    CHECK(kunneth(s1, pt).betti == s1.betti);
    const auto cyl = kunneth(s1, line);
    CHECK(trimmed(cyl.betti) == Betti{1, 1});
    CHECK_FALSE(cyl.compact);
    CHECK(trimmed(betti_of(models::product(models::circle(), models::interval()))) == Betti{1, 1});
}

TEST_CASE("Kunneth is commutative and associative", "[spaces][property]") {
    Rng rng(1);
    auto random_profile = [&] {
        Betti b(static_cast<std::size_t>(uniform_int(rng, 1, 4)));
        for (auto& x : b) x = static_cast<std::size_t>(uniform_int(rng, 0, 3));
        return BettiProfile::of(b, uniform_int(rng, 0, 1), uniform_int(rng, 0, 1));
    };
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = random_profile(), b = random_profile(), c = random_profile();
        CHECK(kunneth(a, b).betti == kunneth(b, a).betti);
        CHECK(kunneth(kunneth(a, b), c).betti == kunneth(a, kunneth(b, c)).betti);
    }
}

TEST_CASE("simplicial products match Kunneth", "[spaces][property]") {
    const std::vector<SimplicialComplex> corpus{models::point(), models::interval(), models::circle()};
    for (const auto& a : corpus) {
        for (const auto& b : corpus) {
            const auto expected = kunneth(BettiProfile::of(betti_of(a)), BettiProfile::of(betti_of(b)));
            CHECK(betti_of(models::product(a, b)) == expected.betti);
        }
    }
}

TEST_CASE("duality and vanishing checks", "[spaces]") {
    CHECK(duality_check(BettiProfile::of({1, 2, 1}, true, true)).status == CheckStatus::Pass);
    CHECK(duality_check(BettiProfile::of(betti_of(models::sphere2()), true, true)).status == CheckStatus::Pass);

    const auto bad = duality_check(BettiProfile::of({1, 1, 0}, true, true));
    CHECK(bad.status == CheckStatus::Fail);
    REQUIRE_FALSE(bad.entries.empty());
    CHECK(bad.entries[0].what == "b0 = b2");
    CHECK_FALSE(bad.entries[0].ok);
    CHECK(bad.entries[1].ok);

    const auto refused = duality_check(BettiProfile::of({1, 1}, false, true));
    CHECK(refused.status == CheckStatus::Refused);

    CHECK(vanishing_check(BettiProfile::of({1, 0}), 1));
    CHECK(vanishing_check(BettiProfile::of({1, 1, 0}), 1));
    CHECK_FALSE(vanishing_check(BettiProfile::of({1, 0, 1}), 1));
}

TEST_CASE("simplicial Mayer-Vietoris sequences", "[spaces]") {
    const auto c = models::circle();
    const auto [u, v] = circle_arcs(c);
    const ComplexSES ses = simplicial_mv_ses(c, u, v);
    REQUIRE_NOTHROW(validate(ses));
    const ZigzagReport r = zigzag(ses);
    CHECK(r.exactness.exact);
    CHECK(r.betti_a == Betti{1, 1});
    CHECK(rank(r.delta[0]) == 1);
    CHECK(r.delta[0].rows() == 1);
    CHECK(mv_solve(cover_spec_from_simplicial(c, u, v)).values() == Betti{1, 1});
    CHECK(*cover_spec_from_simplicial(c, u, v).incidence == mat({{1, -1}, {1, -1}}));

    // V empty: i is the identity onto U, j maps onto the zero space.
    const SimplicialComplex empty(c.vertex_count(), {}, SimplicialComplex::Closure::Compute, c.dimension());
    const ComplexSES trivial = simplicial_mv_ses(c, c, empty);
    REQUIRE_NOTHROW(validate(trivial));
    CHECK(zigzag(trivial).betti_a == Betti{1, 1});

    const auto t = models::torus();
    const auto [tu, tv] = torus_bands(t);
    CHECK(betti_of(tu) == Betti{1, 1, 0});
    CHECK(betti_of(tu.intersection(tv)) == Betti{2, 2, 0});
    const ZigzagReport rt = zigzag(simplicial_mv_ses(t, tu, tv));
    CHECK(rt.exactness.exact);
    CHECK(rt.betti_a == betti_of(t));
    CHECK(rt.betti_a_from_sequence() == Betti{1, 2, 1});
    CHECK(mv_solve(cover_spec_from_simplicial(t, tu, tv)).values() == Betti{1, 2, 1});

    CHECK_THROWS_WITH(simplicial_mv_ses(c, u, empty), Catch::Matchers::ContainsSubstring("cover condition"));
}

TEST_CASE("Mayer-Vietoris solver, zigzag and direct Betti numbers agree", "[spaces][property]") {
    Rng rng(2718);
    for (int trial = 0; trial < 80; ++trial) {
        const auto s = trial % 10 == 0 ? models::torus() : gen::random_complex_simplicial(rng, 7, 30);
        const auto [u, v] = gen::random_cover(rng, s);
        const Betti direct = betti_of(s);
        const ZigzagReport z = zigzag(simplicial_mv_ses(s, u, v));
        CHECK(z.exactness.exact);
        CHECK(z.betti_a_from_sequence() == direct);
        const CoverSpec spec = cover_spec_from_simplicial(s, u, v);
        CHECK(mv_solve(spec).values() == direct);
        CHECK(rank(*spec.incidence) == rank(z.g_star[0]));
    }
}
