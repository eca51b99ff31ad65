#include "derham/error.hpp"
#include "derham/forms.hpp"
#include "generators.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace derham;
using derham::testing::Rng;
using derham::testing::uniform_int;

namespace {

const std::vector<std::string> kPlane{"x", "y"};

DifferentialForm one_form(const std::string& p, const std::string& q) {
    DifferentialForm w(kPlane, 1);
    w.add_term({1}, parse(p));
    w.add_term({2}, parse(q));
    return w;
}

DifferentialForm omega0() { return one_form("-y/(x^2 + y^2)", "x/(x^2 + y^2)"); }

std::vector<std::string> coordinate_names(int n) {
    static const std::vector<std::string> names{"x", "y", "z", "w"};
    return {names.begin(), names.begin() + n};
}

using derham::gen::random_form;
using derham::gen::random_polynomial_map;

}  // namespace

TEST_CASE("wedge signs and repeated differentials", "[forms]") {
    auto dx = DifferentialForm::monomial(kPlane, {1});
    auto dy = DifferentialForm::monomial(kPlane, {2});
    CHECK(wedge(dx, dy) == DifferentialForm::monomial(kPlane, {1, 2}));
    CHECK(wedge(dy, dx) == DifferentialForm::monomial(kPlane, {1, 2}, Expr(-1)));
    CHECK(wedge(dx, dx).is_zero());
    CHECK(wedge(dx, dx).degree() == 2);

    auto a = DifferentialForm::monomial(kPlane, {2}, parse("x"));
    auto b = DifferentialForm::monomial(kPlane, {1}, parse("y"));
    // Permutation (2,1) is odd, so x dy ^ y dx = -xy dx^dy.
    CHECK(wedge(a, b) == DifferentialForm::monomial(kPlane, {1, 2}, parse("-x*y")));
    CHECK(to_string(wedge(a, b)) == "-x*y dx∧dy");

    CHECK_THROWS_AS(wedge(dx, DifferentialForm::monomial({"u", "v"}, {1})), ValidationError);
}

TEST_CASE("forms above the ambient dimension vanish", "[forms]") {
    auto area = DifferentialForm::monomial(kPlane, {1, 2});
    auto dx = DifferentialForm::monomial(kPlane, {1});
    DifferentialForm top = wedge(area, dx);
    CHECK(top.degree() == 3);
    CHECK(top.is_zero());
    CHECK(to_string(top) == "0");
    CHECK(d(area).is_zero());
}

TEST_CASE("exterior derivative examples", "[forms]") {
    auto f = DifferentialForm::function(kPlane, parse("x*y"));
    CHECK(d(f) == one_form("y", "x"));
    CHECK(to_string(d(f)) == "y dx + x dy");
    CHECK(d(omega0()).is_zero());
    CHECK(d(DifferentialForm::monomial(kPlane, {2}, parse("x"))) == DifferentialForm::monomial(kPlane, {1, 2}));
}

TEST_CASE("pullback examples", "[forms]") {
    SmoothMap circle({"t"}, kPlane, {parse("cos(t)"), parse("sin(t)")});
    auto dx = DifferentialForm::monomial(kPlane, {1});
    CHECK(pullback(circle, dx) == DifferentialForm::monomial({"t"}, {1}, parse("-sin(t)")));

    DifferentialForm pulled = pullback(circle, omega0());
    REQUIRE(pulled.terms().size() == 1);
    const Expr coef = pulled.coefficient({1});
    CHECK(is_zero(coef - Expr(1)) == ZeroTest::Zero);
    // Independent check: evaluate the coefficient at 32 points.
    Rng rng(1);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int i = 0; i < 32; ++i) {
        CHECK(std::abs(eval(coef, {{"t", u(rng)}}) - 1.0) < 1e-9);
    }

    DifferentialForm w = one_form("x^2*y", "exp(x) - y");
    CHECK(pullback(SmoothMap::identity(kPlane), w) == w);
    CHECK_THROWS_AS(pullback(circle, DifferentialForm::monomial({"u", "v"}, {1})), ValidationError);
}

TEST_CASE("closedness and exactness witnesses", "[forms]") {
    CHECK(is_closed(DifferentialForm::monomial(kPlane, {1, 2})) == ZeroTest::Zero);
    CHECK(is_closed(omega0()) == ZeroTest::Zero);
    CHECK(is_closed(one_form("y", "-x")) == ZeroTest::NonZero);
    CHECK(check_exact_witness(one_form("y", "x"), DifferentialForm::function(kPlane, parse("x*y"))) ==
          ZeroTest::Zero);
    CHECK(check_exact_witness(one_form("y", "2*x"), DifferentialForm::function(kPlane, parse("x*y"))) ==
          ZeroTest::NonZero);
    CHECK_THROWS_AS(check_exact_witness(one_form("y", "x"), one_form("y", "x")), ValidationError);
}

TEST_CASE("form construction validates its invariants", "[forms]") {
    DifferentialForm w(kPlane, 1);
    CHECK_THROWS_AS(w.add_term({3}, Expr(1)), ValidationError);
    CHECK_THROWS_AS(w.add_term({1, 2}, Expr(1)), ValidationError);
    CHECK_THROWS_AS(w.add_term({1}, parse("z")), ValidationError);
    DifferentialForm v(kPlane, 2);
    CHECK_THROWS_AS(v.add_term({2, 1}, Expr(1)), ValidationError);
    w.add_term({1}, parse("x"));
    w.add_term({1}, parse("-x"));
    CHECK(w.is_zero());
    CHECK_THROWS_AS(SmoothMap({"t"}, kPlane, {parse("t")}), ValidationError);
    CHECK_THROWS_AS(SmoothMap({"t"}, kPlane, {parse("t"), parse("s")}), ValidationError);

    DifferentialForm constant({}, 0);
    constant.add_term({}, Expr(3));
    CHECK(d(constant).is_zero());
}

TEST_CASE("exterior algebra identities on random forms", "[forms][property]") {
    Rng rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = uniform_int(rng, 1, 4);
        const auto coords = coordinate_names(n);
        const int p = uniform_int(rng, 0, n);
        const int q = uniform_int(rng, 0, n - p);
        DifferentialForm a = random_form(rng, coords, p);
        DifferentialForm b = random_form(rng, coords, q);
        INFO(to_string(a) << " | " << to_string(b));

        CHECK(d(d(a)).is_zero());
        DifferentialForm lhs = d(wedge(a, b));
        DifferentialForm rhs = wedge(d(a), b) + (p % 2 ? -wedge(a, d(b)) : wedge(a, d(b)));
        CHECK((lhs - rhs).is_zero());
        DifferentialForm ab = wedge(a, b);
        DifferentialForm ba = wedge(b, a);
        CHECK(((p * q) % 2 ? ab + ba : ab - ba).is_zero());
    }
}

TEST_CASE("pullback is natural and functorial", "[forms][property]") {
    Rng rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        const int m = uniform_int(rng, 1, 3), n = uniform_int(rng, 1, 3), l = uniform_int(rng, 1, 3);
        const std::vector<std::string> src = {"s", "t", "u"};
        const std::vector<std::string> mid = {"x", "y", "z"};
        const std::vector<std::string> dst = {"p", "q", "r"};
        SmoothMap f = random_polynomial_map(rng, {src.begin(), src.begin() + m}, {mid.begin(), mid.begin() + n});
        SmoothMap g = random_polynomial_map(rng, {mid.begin(), mid.begin() + n}, {dst.begin(), dst.begin() + l});
        DifferentialForm w = random_form(rng, {mid.begin(), mid.begin() + n}, uniform_int(rng, 0, n));
        CHECK((pullback(f, d(w)) - d(pullback(f, w))).is_zero());

        DifferentialForm v = random_form(rng, {dst.begin(), dst.begin() + l}, uniform_int(rng, 0, l));
        CHECK((pullback(compose(g, f), v) - pullback(f, pullback(g, v))).is_zero());
    }
}

TEST_CASE("wedge of closed forms is closed", "[forms][property]") {
    Rng rng(5);
    const std::vector<std::string> coords{"x", "y", "z"};
    for (int trial = 0; trial < 30; ++trial) {
        // d of anything is closed; add constant-coefficient forms for variety.
        DifferentialForm a = d(random_form(rng, coords, uniform_int(rng, 0, 1)));
        DifferentialForm b = d(random_form(rng, coords, 0)) + DifferentialForm::monomial(coords, {3}, Expr(2));
        REQUIRE(is_closed(a) == ZeroTest::Zero);
        REQUIRE(is_closed(b) == ZeroTest::Zero);
        CHECK(is_closed(wedge(a, b)) == ZeroTest::Zero);
    }
    // omega0 pulled into R^3 and wedged with dz.
    DifferentialForm w0(coords, 1);
    w0.add_term({1}, parse("-y/(x^2 + y^2)"));
    w0.add_term({2}, parse("x/(x^2 + y^2)"));
    CHECK(is_closed(wedge(w0, DifferentialForm::monomial(coords, {3}))) == ZeroTest::Zero);
}
