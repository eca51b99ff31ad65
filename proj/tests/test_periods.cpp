#include "derham/error.hpp"
#include "derham/periods.hpp"
#include "generators.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace derham;
using derham::gen::Rng;
using derham::gen::uniform_int;

namespace {

const std::vector<std::string> kPlane{"x", "y"};
constexpr double kTwoPi = 2.0 * std::numbers::pi;

DifferentialForm omega0(const std::string& dx = "x", const std::string& dy = "y") {
    DifferentialForm w(kPlane, 1);
    const std::string r2 = "((" + dx + ")^2 + (" + dy + ")^2)";
    w.add_term({1}, parse("-(" + dy + ")/" + r2));
    w.add_term({2}, parse("(" + dx + ")/" + r2));
    return w;
}

SmoothSimplex circle(int winding, const std::string& radius = "1", const std::string& cx = "0",
                     const std::string& cy = "0") {
    const std::string arg = "2*pi*" + std::to_string(winding) + "*t1";
    return SmoothSimplex(1, kPlane, {parse(cx + " + " + radius + "*cos(" + arg + ")"),
                                     parse(cy + " + " + radius + "*sin(" + arg + ")")});
}

SingularChain chain_of(const SmoothSimplex& s, const Rational& c = 1) {
    SingularChain out(s.degree(), s.target());
    out.add(c, s);
    return out;
}

// Total turning of the curve around the origin, from atan2 of successive points.
double winding_angle(const SmoothSimplex& s, int steps = 20000) {
    double total = 0.0;
    std::vector<double> prev = s.evaluate(std::vector<double>{0.0});
    for (int i = 1; i <= steps; ++i) {
        const std::vector<double> cur = s.evaluate(std::vector<double>{static_cast<double>(i) / steps});
        total += std::atan2(prev[0] * cur[1] - prev[1] * cur[0], prev[0] * cur[0] + prev[1] * cur[1]);
        prev = cur;
    }
    return total;
}

double factorial(int n) {
    double f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// Exact ∫_{Δ_k} p for a polynomial p, from Taylor coefficients at 0 and ∫ t^α = α!/(k+|α|)!.
Rational exact_polynomial_integral(const Expr& p, std::size_t k, int max_degree = 12) {
    const auto t = simplex_coordinates(k);
    EvalPoint origin;
    for (const auto& v : t) origin.set(v, Rational(0));
    Rational total = 0;
    // Walk multi-indices α with nondecreasing variable order so each ∂^α is formed once.
    auto rec = [&](auto&& self, const Expr& e, std::size_t start, int order) -> void {
        if (normalize(e).kind() == ExprKind::Constant && to_string(normalize(e)) == "0") return;
        // ∂^α p(0) / (k + |α|)!
        Rational term = eval_exact(e, origin);
        Rational f = 1;
        for (int i = 2; i <= static_cast<int>(k) + order; ++i) f *= i;
        total += term / f;
        if (order == max_degree) return;
        for (std::size_t v = start; v < k; ++v) self(self, normalize(diff(e, t[v])), v, order + 1);
    };
    rec(rec, normalize(p), 0, 0);
    return total;
}

using gen::random_polynomial_form;
using gen::random_simplex;

std::vector<std::string> coords(std::size_t n) {
    static const std::vector<std::string> names{"x", "y", "z"};
    return {names.begin(), names.begin() + static_cast<long>(n)};
}

}  // namespace

TEST_CASE("symmetric simplex rule integrates monomials exactly", "[periods]") {
    for (std::size_t k = 1; k <= 3; ++k) {
        for (int s = 0; s <= 4; ++s) {
            const auto rule = grundmann_moller(k, s);
            // All α with |α| <= 2s+1.
            std::vector<int> alpha(k, 0);
            auto rec = [&](auto&& self, std::size_t i, int left) -> void {
                if (i == k) {
                    double approx = 0;
                    for (const auto& node : rule) {
                        double v = node.weight;
                        for (std::size_t j = 0; j < k; ++j) v *= std::pow(node.barycentric[j + 1], alpha[j]);
                        approx += v;
                    }
                    double exact = 1;
                    int total = 0;
                    for (int a : alpha) {
                        exact *= factorial(a);
                        total += a;
                    }
                    exact /= factorial(static_cast<int>(k) + total);
                    CHECK(approx == Catch::Approx(exact).epsilon(1e-12).margin(1e-15));
                    return;
                }
                for (int a = 0; a <= left; ++a) {
                    alpha[i] = a;
                    self(self, i + 1, left - a);
                }
                alpha[i] = 0;
            };
            rec(rec, 0, 2 * s + 1);
        }
    }
}

TEST_CASE("subdivided quadrature converges on smooth integrands", "[periods]") {
    // ∫_{Δ_2} exp(t1 + t2) = ∫_0^1 u e^u du = 1.
    const Integral r = integrate_simplex([](std::span<const double> t) { return std::exp(t[0] + t[1]); }, 2);
    CHECK(std::abs(r.value - 1.0) < 1e-9);
    // ∫_{Δ_1} cos(20 t) = sin(20)/20.
    const Integral osc = integrate_simplex([](std::span<const double> t) { return std::cos(20 * t[0]); }, 1);
    CHECK(std::abs(osc.value - std::sin(20.0) / 20.0) < 1e-9);
    QuadratureSpec tight;
    tight.max_depth = 2;
    tight.tolerance = 1e-15;
    CHECK_THROWS_AS(integrate_simplex([](std::span<const double> t) { return std::sqrt(t[0]); }, 1, tight),
                    ConvergenceError);
    QuadratureSpec bad;
    bad.tolerance = 0;
    CHECK_THROWS_AS(integrate_simplex([](std::span<const double>) { return 1.0; }, 1, bad), ValidationError);
}

TEST_CASE("integration examples", "[periods]") {
    const Integral full = integrate(omega0(), circle(1));
    CHECK(std::abs(full.value - kTwoPi) < 1e-9);
    CHECK(std::abs(full.value - winding_angle(circle(1))) < 1e-9);

    const SmoothSimplex p(0, kPlane, {parse("1/2"), parse("3")});
    CHECK(integrate(DifferentialForm::function(kPlane, parse("x^2 + y")), p).value == Catch::Approx(3.25));

    const SmoothSimplex tri = SmoothSimplex::affine(kPlane, {{0, 0}, {1, 0}, {0, 1}});
    CHECK(std::abs(integrate(DifferentialForm::monomial(kPlane, {1, 2}), tri).value - 0.5) < 1e-12);

    CHECK_THROWS_AS(integrate(DifferentialForm::monomial(kPlane, {1}), tri), ValidationError);
    CHECK_THROWS_AS(integrate(DifferentialForm::monomial({"u", "v"}, {1}), circle(1)), ValidationError);
    // A segment through the origin meets the singularity of ω0 even though the pulled-back coefficient is zero.
    const SmoothSimplex through = SmoothSimplex::affine(kPlane, {{-1, 0}, {1, 0}});
    CHECK_THROWS_AS(integrate(omega0(), through), EvalError);
}

TEST_CASE("chains integrate linearly and cancel exactly", "[periods]") {
    const SmoothSimplex s = circle(1);
    CHECK(std::abs(integrate_chain(omega0(), chain_of(s, 2)).value - 2 * kTwoPi) < 1e-9);
    SingularChain zero = chain_of(s) + chain_of(s, -1);
    CHECK(zero.empty());
    CHECK(integrate_chain(omega0(), zero).value == 0.0);
    for (int k = 1; k <= 3; ++k) {
        const double oracle = winding_angle(circle(k));
        CHECK(std::abs(oracle - kTwoPi * k) < 1e-9);
        CHECK(std::abs(integrate(omega0(), circle(k)).value - oracle) < 1e-8);
    }
}

TEST_CASE("boundary operator", "[periods]") {
    const SmoothSimplex seg = SmoothSimplex::affine(kPlane, {{1, 2}, {3, 5}});
    const SingularChain b = boundary(seg);
    REQUIRE(b.terms().size() == 2);
    CHECK(b.terms()[0].first == 1);
    CHECK(b.terms()[0].second.evaluate({}) == std::vector<double>{3, 5});
    CHECK(b.terms()[1].first == -1);
    CHECK(b.terms()[1].second.evaluate({}) == std::vector<double>{1, 2});

    Rng rng(12);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = uniform_int(rng, 1, 3), k = uniform_int(rng, 2, 3);
        const SmoothSimplex s = random_simplex(rng, coords(n), k, trial % 2 == 1);
        CHECK(boundary(boundary(s)).empty());
    }

    // Fan disk around (0,0): interior spokes cancel and the rim remains.
    const int m = 6;
    std::vector<std::vector<Rational>> rim;
    for (int i = 0; i < m; ++i) {
        const double a = kTwoPi * i / m;
        rim.push_back({Rational(static_cast<long>(std::lround(8 * std::cos(a))), 8),
                       Rational(static_cast<long>(std::lround(8 * std::sin(a))), 8)});
    }
    SingularChain disk(2, kPlane), expected(1, kPlane);
    for (int i = 0; i < m; ++i) {
        disk.add(1, SmoothSimplex::affine(kPlane, {{0, 0}, rim[i], rim[(i + 1) % m]}));
        expected.add(1, SmoothSimplex::affine(kPlane, {rim[i], rim[(i + 1) % m]}));
    }
    const SingularChain db = boundary(disk);
    CHECK(db.terms().size() == static_cast<std::size_t>(m));
    CHECK((db + expected.scaled(-1)).empty());
    CHECK(is_cycle(db));
    CHECK_FALSE(is_cycle(chain_of(seg)));
    CHECK(is_cycle(chain_of(circle(2))));
}

TEST_CASE("Stokes examples", "[periods]") {
    SingularChain tri(2, kPlane);
    tri.add(1, SmoothSimplex::affine(kPlane, {{0, 0}, {1, 0}, {0, 1}}));
    const DifferentialForm xdy = DifferentialForm::monomial(kPlane, {2}, parse("x"));
    CHECK(std::abs(integrate_chain(xdy, boundary(tri)).value - 0.5) < 1e-9);
    CHECK(stokes_residual(xdy, tri) < 1e-8);

    // Exact form over a closed chain.
    const DifferentialForm exact = d(DifferentialForm::function(kPlane, parse("x^2*y + sin(x)")));
    CHECK(std::abs(integrate_chain(exact, chain_of(circle(1))).value) < 1e-9);

    // Disk centered at (3,0) avoiding the origin.
    SingularChain disk(2, kPlane);
    const int m = 8;
    for (int i = 0; i < m; ++i) {
        auto pt = [&](int j) {
            const double a = kTwoPi * j / m;
            return std::vector<Rational>{Rational(3) + Rational(static_cast<long>(std::lround(64 * std::cos(a))), 64),
                                         Rational(static_cast<long>(std::lround(64 * std::sin(a))), 64)};
        };
        disk.add(1, SmoothSimplex::affine(kPlane, {{3, 0}, pt(i), pt((i + 1) % m)}));
    }
    CHECK(stokes_residual(omega0(), disk) < 1e-8);
    CHECK(std::abs(integrate_chain(omega0(), boundary(disk)).value) < 1e-8);
}

TEST_CASE("Stokes residual on generated polynomial instances", "[periods][property]") {
    Rng rng(606);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = uniform_int(rng, 1, 3);
        const std::size_t k = uniform_int(rng, 1, static_cast<int>(n));
        const auto c = coords(n);
        SingularChain chain(k, c);
        const int pieces = uniform_int(rng, 1, 2);
        for (int i = 0; i < pieces; ++i) chain.add(gen::small_rational(rng, 3) + 4, random_simplex(rng, c, k, trial % 2 == 0));
        const DifferentialForm w = random_polynomial_form(rng, c, static_cast<int>(k) - 1);
        INFO(to_string(w) << " over " << to_string(chain));
        CHECK(stokes_residual(w, chain) < 1e-8);
    }
}

TEST_CASE("periods are homotopy invariant and linear", "[periods][property]") {
    const double r1 = integrate(omega0(), circle(1)).value;
    const double r2 = integrate(omega0(), circle(1, "2")).value;
    CHECK(std::abs(r1 - r2) < 1e-8);

    Rng rng(9);
    const auto c = coords(2);
    for (int trial = 0; trial < 10; ++trial) {
        const SmoothSimplex s = random_simplex(rng, c, 1, true);
        const SmoothSimplex u = random_simplex(rng, c, 1, false);
        const DifferentialForm a = random_polynomial_form(rng, c, 1), b = random_polynomial_form(rng, c, 1);
        const Rational p = gen::small_rational(rng), q = gen::small_rational(rng);
        SingularChain chain(1, c);
        chain.add(p, s);
        chain.add(q, u);
        const double lhs = integrate_chain(a + b.scaled(Expr(3)), chain).value;
        const double rhs = to_double(p) * (integrate(a, s).value + 3 * integrate(b, s).value) +
                           to_double(q) * (integrate(a, u).value + 3 * integrate(b, u).value);
        CHECK(std::abs(lhs - rhs) < 1e-8);
    }
}

TEST_CASE("period matrices", "[periods]") {
    const PeriodReport circle_report = period_matrix({omega0()}, {chain_of(circle(1))});
    REQUIRE(circle_report.matrix.size() == 1);
    CHECK(std::abs(circle_report.matrix[0][0] - winding_angle(circle(1))) < 1e-9);
    CHECK(circle_report.rank == 1);
    CHECK(circle_report.perturbation_ok);
    REQUIRE(circle_report.cycle_perturbation);
    CHECK(*circle_report.cycle_perturbation < 1e-8);
    CHECK(*circle_report.form_perturbation < 1e-8);

    // Torus R^2 / Z^2: the two generators are unit segments, closed modulo the lattice.
    PeriodOptions torus;
    torus.lattice = Lattice{{{1, 0}, {0, 1}}};
    const auto a = chain_of(SmoothSimplex::affine(kPlane, {{0, 0}, {1, 0}}));
    const auto b = chain_of(SmoothSimplex::affine(kPlane, {{0, 0}, {0, 1}}));
    CHECK_FALSE(is_cycle(a));
    CHECK(is_cycle(a, &*torus.lattice));
    const PeriodReport t = period_matrix({DifferentialForm::monomial(kPlane, {1}), DifferentialForm::monomial(kPlane, {2})},
                                         {a, b}, {}, torus);
    CHECK(std::abs(t.matrix[0][0] - 1) < 1e-12);
    CHECK(std::abs(t.matrix[0][1]) < 1e-12);
    CHECK(std::abs(t.matrix[1][0]) < 1e-12);
    CHECK(std::abs(t.matrix[1][1] - 1) < 1e-12);
    CHECK(t.rank == 2);
    CHECK(t.perturbation_ok);

    // Exact forms pair to zero with every cycle.
    const DifferentialForm df = d(DifferentialForm::function(kPlane, parse("x*y^2 + cos(x)")));
    const PeriodReport z = period_matrix({omega0(), df}, {chain_of(circle(1)), chain_of(circle(3, "1/2"))});
    CHECK(std::abs(z.matrix[1][0]) < 1e-9);
    CHECK(std::abs(z.matrix[1][1]) < 1e-9);
    CHECK(z.rank == 1);

    CHECK_THROWS_WITH(period_matrix({DifferentialForm::monomial(kPlane, {1}, parse("y"))}, {chain_of(circle(1))}),
                      Catch::Matchers::ContainsSubstring("not closed"));
    CHECK_THROWS_WITH(period_matrix({omega0()}, {a}), Catch::Matchers::ContainsSubstring("not a cycle"));
}

TEST_CASE("naturality of integration", "[periods]") {
    CHECK(naturality_check(SmoothMap::identity(kPlane), omega0(), circle(1)) < 1e-12);

    // Translation x -> x - p carries a circle around p to one around the origin.
    const SmoothMap shift(kPlane, kPlane, {parse("x - 2"), parse("y + 1")});
    CHECK(naturality_check(shift, omega0(), circle(1, "1", "2", "-1")) < 1e-8);
    CHECK(std::abs(integrate(pullback(shift, omega0()), circle(1, "1", "2", "-1")).value - kTwoPi) < 1e-8);

    Rng rng(31337);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t m = uniform_int(rng, 1, 3), n = uniform_int(rng, 1, 3);
        const std::size_t k = uniform_int(rng, 1, static_cast<int>(std::min(m, n)));
        const auto src = coords(m);
        const std::vector<std::string> dst{"p", "q", "r"};
        const std::vector<std::string> tgt(dst.begin(), dst.begin() + static_cast<long>(n));
        const SmoothMap f = gen::random_polynomial_map(rng, src, tgt, 1);
        const DifferentialForm w = random_polynomial_form(rng, tgt, static_cast<int>(k));
        const SmoothSimplex s = random_simplex(rng, src, k, false);
        MultiIndex top;
        for (std::size_t i = 1; i <= k; ++i) top.push_back(static_cast<int>(i));
        const double oracle = to_double(exact_polynomial_integral(pullback(compose(f, s).map(), w).coefficient(top), k));
        CHECK(std::abs(integrate(pullback(f, w), s).value - oracle) < 1e-8);
        CHECK(naturality_check(f, w, s) < 1e-8);
    }
}
