#include "derham/acceptance.hpp"

#include "derham/error.hpp"
#include "derham/random.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

namespace derham {

namespace {

using io::Json;
using Betti = std::vector<std::size_t>;

std::string text(const Betti& b) {
    std::string out = "(";
    for (std::size_t i = 0; i < b.size(); ++i) out += (i ? "," : "") + std::to_string(b[i]);
    return out + ")";
}

std::string num(double x) {
    std::ostringstream s;
    s.precision(12);
    s << x;
    return s.str();
}

// Collects failed expectations and a short summary for one item.
class Outcome {
public:
    void expect(bool ok, const std::string& message) {
        if (!ok) failures_.push_back(message);
    }
    void note(const std::string& s) { notes_.push_back(s); }
    bool passed() const { return failures_.empty(); }
    std::string detail() const {
        const auto& list = failures_.empty() ? notes_ : failures_;
        std::string out;
        for (std::size_t i = 0; i < list.size() && i < 4; ++i) out += (i ? "; " : "") + list[i];
        if (list.size() > 4) out += "; ... (" + std::to_string(list.size() - 4) + " more)";
        return out;
    }

private:
    std::vector<std::string> failures_;
    std::vector<std::string> notes_;
};

struct Context {
    std::filesystem::path examples;
    std::uint64_t seed;
    QuadratureSpec q;
    Json example(const Json& name) const { return io::read_json_file(examples / name.get<std::string>()); }
};

Betti sizes(const Json& j) { return j.get<Betti>(); }

Betti betti_of(const SimplicialComplex& s) { return betti(coboundary_complex(s)); }

// Total turning angle around the origin along the curve, accumulated from atan2 of successive points.
double winding_oracle(const SmoothSimplex& s, int steps = 20000) {
    double total = 0.0;
    std::vector<double> prev = s.evaluate(std::vector<double>{0.0});
    for (int i = 1; i <= steps; ++i) {
        const std::vector<double> cur = s.evaluate(std::vector<double>{static_cast<double>(i) / steps});
        total += std::atan2(prev[0] * cur[1] - prev[1] * cur[0], prev[0] * cur[0] + prev[1] * cur[1]);
        prev = cur;
    }
    return total;
}

void circle_item(const Json& g, const Context& ctx, Outcome& out) {
    const auto space = io::space_from_json(ctx.example(g.at("space")));
    const Betti b = betti_of(space.complex);
    out.expect(b == sizes(g.at("betti")), "betti " + text(b) + ", expected " + text(sizes(g.at("betti"))));
    const Betti mv = mv_solve(io::cover_from_json(ctx.example(g.at("cover")))).values();
    out.expect(mv == sizes(g.at("mv")), "mv " + text(mv) + ", expected " + text(sizes(g.at("mv"))));
    const auto cover = io::simplicial_cover_from_json(ctx.example(g.at("simplicial_cover")));
    const ZigzagReport z = zigzag(simplicial_mv_ses(cover.space, cover.u, cover.v));
    out.expect(z.exactness.exact, "zigzag long sequence is not exact");
    const std::size_t h1 = z.betti_a_from_sequence().at(1);
    out.expect(h1 == g.at("h1").get<std::size_t>(), "dim H^1 from the sequence is " + std::to_string(h1));
    out.expect(rank(z.delta.at(0)) == g.at("delta0_rank").get<std::size_t>(), "rank of delta_0 differs");
    out.note("betti " + text(b) + ", mv " + text(mv) + ", zigzag exact with dim H^1 = " + std::to_string(h1));
}

void torus_item(const Json& g, const Context& ctx, Outcome& out) {
    const BettiProfile s1 = io::profile_from_json(ctx.example(g.at("factor")));
    const BettiProfile t2 = kunneth(s1, s1);
    out.expect(t2.betti == sizes(g.at("kunneth")), "kunneth " + text(t2.betti));
    const Betti b = betti_of(io::space_from_json(ctx.example(g.at("space"))).complex);
    out.expect(b == sizes(g.at("betti")), "triangulated torus betti " + text(b));
    const DualityReport d = duality_check(t2);
    out.expect(to_string(d.status) == g.at("duality").get<std::string>(), "duality " + to_string(d.status));
    const bool b0_b2 = !d.entries.empty() && d.entries.front().what == "b0 = b2" && d.entries.front().ok;
    out.expect(b0_b2, "b0 = b2 not confirmed");
    out.note("kunneth " + text(t2.betti) + ", simplicial " + text(b) + ", duality " + to_string(d.status));
}

void contractible_item(const Json& g, const Context& ctx, Outcome& out) {
    const Betti b = betti_of(io::space_from_json(ctx.example(g.at("space"))).complex);
    out.expect(b == sizes(g.at("point_betti")), "point betti " + text(b));
    const BettiProfile line = io::profile_from_json(ctx.example(g.at("profile")));
    const bool vanishes = vanishing_check(line, g.at("vanishing_dimension").get<std::size_t>());
    out.expect(vanishes, "vanishing check failed for " + text(line.betti));
    out.note("point " + text(b) + ", profile " + text(line.betti) + " vanishes above n = 1");
}

void components_item(const Json& g, const Context& ctx, Outcome& out) {
    gen::Rng rng(ctx.seed + 4);
    const int instances = g.at("instances").get<int>();
    const int max_pieces = g.at("max_pieces").get<int>();
    for (int trial = 0; trial < instances; ++trial) {
        const int r = gen::uniform_int(rng, 1, max_pieces);
        SimplicialComplex s = gen::random_connected_complex(rng, gen::uniform_int(rng, 1, 5), gen::uniform_int(rng, 0, 4));
        for (int i = 1; i < r; ++i) {
            s = models::disjoint_union(s, gen::random_connected_complex(rng, gen::uniform_int(rng, 1, 5),
                                                                        gen::uniform_int(rng, 0, 4)));
        }
        const std::size_t b0 = betti_of(s)[0];
        out.expect(b0 == static_cast<std::size_t>(r), "instance " + std::to_string(trial) + ": b0 = " +
                                                           std::to_string(b0) + " for r = " + std::to_string(r));
        out.expect(union_find_components(s) == b0, "union-find disagrees on instance " + std::to_string(trial));
    }
    out.note(std::to_string(instances) + " disjoint unions with b0 = r");
}

void punctured_plane_item(const Json& g, const Context& ctx, Outcome& out) {
    const DifferentialForm w = io::form_from_json(ctx.example(g.at("form")));
    const io::CycleDocument cycles = io::cycles_from_json(ctx.example(g.at("cycles")));
    const auto windings = g.at("windings").get<std::vector<int>>();
    const auto golden = g.at("periods").get<std::vector<double>>();
    const double tol = g.at("period_tolerance").get<double>();
    const double exact_tol = g.at("exact_tolerance").get<double>();
    if (cycles.cycles.size() != windings.size() || golden.size() != windings.size()) {
        throw ValidationError("golden windings, periods and cycles have different lengths");
    }
    // The exact form df for a fixed nonpolynomial f.
    const DifferentialForm df = d(DifferentialForm::function(w.coords(), parse("x^2*y - 3*x + sin(x*y)")));
    const PeriodReport p = period_matrix({w, df}, cycles.cycles, ctx.q);
    for (std::size_t j = 0; j < windings.size(); ++j) {
        const double analytic = 2.0 * std::numbers::pi * windings[j];
        const double oracle = winding_oracle(cycles.cycles[j].terms().front().second);
        const double got = p.matrix[0][j];
        out.expect(std::abs(got - analytic) < tol && std::abs(got - oracle) < tol && std::abs(got - golden[j]) < tol,
                   "winding " + std::to_string(windings[j]) + ": period " + num(got) + ", expected " + num(analytic));
        out.expect(std::abs(p.matrix[1][j]) < exact_tol, "period of df over winding " + std::to_string(windings[j]) +
                                                              " is " + num(p.matrix[1][j]));
    }
    const Betti profile = mv_solve(io::cover_from_json(ctx.example(g.at("cover")))).values();
    const std::size_t b1 = profile.at(1);
    out.expect(b1 == g.at("b1").get<std::size_t>(), "declared profile has b1 = " + std::to_string(b1));
    out.expect(p.rank == b1, "period matrix rank " + std::to_string(p.rank) + " != b1 = " + std::to_string(b1));
    out.expect(p.perturbation_ok, "period perturbation checks failed");
    out.note("periods " + num(p.matrix[0][0]) + ", " + num(p.matrix[0][1]) + ", " + num(p.matrix[0][2]) +
             "; rank " + std::to_string(p.rank) + " = b1 of " + text(profile));
}

void stokes_item(const Json& g, const Context& ctx, Outcome& out) {
    gen::Rng rng(ctx.seed + 6);
    const double tol = g.at("tolerance").get<double>();
    const int instances = g.at("instances").get<int>();
    const std::vector<std::string> names{"x", "y", "z"};
    double worst = 0.0;
    for (int trial = 0; trial < instances; ++trial) {
        const auto n = static_cast<std::size_t>(gen::uniform_int(rng, 1, 3));
        const auto k = static_cast<std::size_t>(gen::uniform_int(rng, 1, static_cast<int>(n)));
        const std::vector<std::string> coords(names.begin(), names.begin() + static_cast<long>(n));
        SingularChain chain(k, coords);
        const int pieces = gen::uniform_int(rng, 1, 2);
        for (int i = 0; i < pieces; ++i) {
            chain.add(gen::small_rational(rng, 3) + 4, gen::random_simplex(rng, coords, k, trial % 2 == 0));
        }
        const DifferentialForm w = gen::random_polynomial_form(rng, coords, static_cast<int>(k) - 1);
        const double r = stokes_residual(w, chain, ctx.q);
        worst = std::max(worst, r);
        out.expect(r < tol, "instance " + std::to_string(trial) + ": residual " + num(r));
    }
    // Exact form over a closed loop: both sides vanish.
    const std::vector<std::string> plane{"x", "y"};
    SingularChain loop(1, plane);
    loop.add(1, SmoothSimplex(1, plane, {parse("2 + cos(2*pi*t1)"), parse("sin(2*pi*t1)")}));
    const DifferentialForm tau = DifferentialForm::function(plane, parse("x^3*y - exp(y)"));
    const double closed = std::abs(integrate_chain(d(tau), loop, ctx.q).value);
    out.expect(closed < tol, "exact form over a closed loop gives " + num(closed));
    const double exact_residual = stokes_residual(tau, loop, ctx.q);
    out.expect(exact_residual < tol, "exact/closed residual " + num(exact_residual));
    out.note(std::to_string(instances + 1) + " instances, worst residual " + num(std::max(worst, exact_residual)));
}

void algebra_item(const Json& g, const Context& ctx, Outcome& out) {
    gen::Rng rng(ctx.seed + 7);
    const int cases = g.at("cases").get<int>();
    const std::vector<std::string> names{"x", "y", "z", "w"};
    int failures[5] = {0, 0, 0, 0, 0};
    for (int trial = 0; trial < cases; ++trial) {
        const int n = gen::uniform_int(rng, 1, 4);
        const std::vector<std::string> coords(names.begin(), names.begin() + n);
        const int p = gen::uniform_int(rng, 0, n);
        const int q = gen::uniform_int(rng, 0, n);
        const DifferentialForm a = gen::random_form(rng, coords, p);
        const DifferentialForm b = gen::random_form(rng, coords, q);
        failures[0] += !d(d(a)).is_zero();
        const DifferentialForm lhs = d(wedge(a, b));
        const DifferentialForm rhs = wedge(d(a), b) + (p % 2 ? -wedge(a, d(b)) : wedge(a, d(b)));
        failures[1] += !(lhs - rhs).is_zero();
        const DifferentialForm ab = wedge(a, b), ba = wedge(b, a);
        failures[2] += !((p * q) % 2 ? ab + ba : ab - ba).is_zero();

        const std::vector<std::string> src{"s", "t", "u"}, dst{"p", "q", "r"};
        const int m = gen::uniform_int(rng, 1, 3), l = gen::uniform_int(rng, 1, 3);
        const SmoothMap f = gen::random_polynomial_map(rng, {src.begin(), src.begin() + m}, coords);
        failures[3] += !(pullback(f, d(a)) - d(pullback(f, a))).is_zero();
        const SmoothMap h = gen::random_polynomial_map(rng, coords, {dst.begin(), dst.begin() + l});
        const DifferentialForm v = gen::random_form(rng, {dst.begin(), dst.begin() + l}, gen::uniform_int(rng, 0, l));
        failures[4] += !(pullback(compose(h, f), v) - pullback(f, pullback(h, v))).is_zero();
    }
    const char* labels[5] = {"d∘d = 0", "antiderivation", "graded anticommutativity", "pullback commutes with d",
                             "functoriality"};
    for (int i = 0; i < 5; ++i) {
        out.expect(failures[i] == 0, std::string(labels[i]) + ": " + std::to_string(failures[i]) + " failures");
    }
    out.note(std::to_string(cases) + " cases for each of 5 identities, 0 failures");
}

void zigzag_item(const Json& g, const Context& ctx, Outcome& out) {
    gen::Rng rng(ctx.seed + 8);
    const auto max_dim = g.at("max_dim").get<std::size_t>();
    const auto max_top = g.at("max_top_degree").get<std::size_t>();
    const int instances = g.at("instances").get<int>();
    for (int trial = 0; trial < instances; ++trial) {
        const ComplexSES s = gen::random_ses(rng, max_top, max_dim);
        const ZigzagReport z = zigzag(s);
        out.expect(z.exactness.exact, "instance " + std::to_string(trial) + ": long sequence not exact");
        out.expect(z.betti_a == betti(s.a) && z.betti_c == betti(s.c), "instance " + std::to_string(trial) + ": Betti mismatch");
    }
    const int acyclic = g.at("acyclic_instances").get<int>();
    for (int trial = 0; trial < acyclic; ++trial) {
        const ComplexSES s = gen::random_ses(rng, max_top, max_dim, true);
        const Betti ha = betti(s.a), hc = betti(s.c);
        const ZigzagReport z = zigzag(s);
        for (std::size_t k = 0; k < hc.size(); ++k) {
            const std::size_t next = k + 1 < ha.size() ? ha[k + 1] : 0;
            const bool bijective = hc[k] == next && rank(z.delta[k]) == hc[k];
            out.expect(bijective, "acyclic instance " + std::to_string(trial) + ": delta_" + std::to_string(k) +
                                      " is not bijective");
        }
    }
    out.note(std::to_string(instances) + " exact long sequences; delta bijective on " + std::to_string(acyclic) +
             " acyclic instances");
}

void cross_oracle_item(const Json& g, const Context& ctx, Outcome& out) {
    std::vector<io::SimplicialCover> covers;
    for (const auto& name : g.at("simplicial_covers")) covers.push_back(io::simplicial_cover_from_json(ctx.example(name)));
    gen::Rng rng(ctx.seed + 9);
    const int extra = g.at("random_instances").get<int>();
    for (int i = 0; i < extra; ++i) {
        const SimplicialComplex s = gen::random_complex_simplicial(rng, 7, 30);
        auto [u, v] = gen::random_cover(rng, s);
        covers.push_back({s, u, v});
    }
    for (std::size_t i = 0; i < covers.size(); ++i) {
        const auto& c = covers[i];
        const Betti direct = betti_of(c.space);
        const ZigzagReport z = zigzag(simplicial_mv_ses(c.space, c.u, c.v));
        const Betti from_zigzag = z.betti_a_from_sequence();
        const MVResult mv = mv_solve(cover_spec_from_simplicial(c.space, c.u, c.v));
        const bool ok = mv.determined() && mv.values() == direct && from_zigzag == direct && z.exactness.exact;
        out.expect(ok, "instance " + std::to_string(i) + ": direct " + text(direct) + ", zigzag " + text(from_zigzag) +
                           (mv.determined() ? ", mv " + text(mv.values()) : ", mv underdetermined"));
    }
    out.note(std::to_string(covers.size()) + " covered complexes agree degree by degree");
}

void homotopy_item(const Json& g, const Context& ctx, Outcome& out) {
    const DifferentialForm w = io::form_from_json(ctx.example(g.at("form")));
    const double tol = g.at("tolerance").get<double>();
    const std::vector<std::string> plane = w.coords();
    const SmoothSimplex r1(1, plane, {parse("cos(2*pi*t1)"), parse("sin(2*pi*t1)")});
    const SmoothSimplex r2(1, plane, {parse("2*cos(2*pi*t1)"), parse("2*sin(2*pi*t1)")});
    const double diff = std::abs(integrate(w, r1, ctx.q).value - integrate(w, r2, ctx.q).value);
    out.expect(diff < tol, "radius 1 and 2 periods differ by " + num(diff));
    // x -> x - p with p = (3/2, -1) carries a circle around p to a circle around the origin.
    const SmoothMap shift(plane, plane, {parse("x - 3/2"), parse("y + 1")});
    const SmoothSimplex around_p(1, plane, {parse("3/2 + cos(2*pi*t1)"), parse("-1 + sin(2*pi*t1)")});
    const double residual = naturality_check(shift, w, around_p, ctx.q);
    out.expect(residual < tol, "translation naturality residual " + num(residual));
    out.note("period difference " + num(diff) + ", naturality residual " + num(residual));
}

using ItemFn = void (*)(const Json&, const Context&, Outcome&);

struct Item {
    int id;
    const char* key;
    const char* name;
    ItemFn run;
    const char* budget_key;  ///< golden key holding a time budget, or nullptr
};

const Item kItems[] = {
    {1, "circle", "circle cohomology by betti, mv and zigzag", circle_item, "max_seconds"},
    {2, "torus", "torus by Kunneth, triangulation and duality", torus_item, "max_seconds"},
    {3, "contractible", "point and line profiles", contractible_item, nullptr},
    {4, "components", "b0 counts components", components_item, nullptr},
    {5, "punctured_plane", "punctured plane periods", punctured_plane_item, "max_seconds"},
    {6, "stokes", "Stokes residuals", stokes_item, nullptr},
    {7, "algebra", "exterior algebra identities", algebra_item, nullptr},
    {8, "zigzag", "zigzag long exact sequences", zigzag_item, nullptr},
    {9, "cross_oracle", "mv, zigzag and direct Betti numbers agree", cross_oracle_item, nullptr},
    {10, "homotopy", "homotopy invariance and naturality of periods", homotopy_item, nullptr},
};

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
    std::vector<CriterionResult> results;
    Json golden;
    std::string golden_error;
    try {
        golden = io::read_json_file(options.data_dir / "golden" / "acceptance.json");
    } catch (const std::exception& e) {
        golden_error = e.what();
    }
    const Context ctx{options.data_dir / "examples", options.seed, options.quadrature};
    for (const Item& item : kItems) {
        CriterionResult r;
        r.id = item.id;
        r.name = item.name;
        const auto start = std::chrono::steady_clock::now();
        try {
            if (!golden_error.empty()) throw ValidationError("golden file: " + golden_error);
            if (!golden.contains(item.key)) throw ValidationError(std::string("golden file has no entry '") + item.key + "'");
            const Json& section = golden.at(item.key);
            Outcome outcome;
            item.run(section, ctx, outcome);
            r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            if (item.budget_key && section.contains(item.budget_key)) {
                const double budget = section.at(item.budget_key).get<double>();
                outcome.expect(r.seconds < budget, "took " + num(r.seconds) + " s, budget " + num(budget) + " s");
            }
            r.passed = outcome.passed();
            r.detail = outcome.detail();
        } catch (const std::exception& e) {
            r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            r.passed = false;
            r.detail = std::string("error: ") + e.what();
        }
        results.push_back(std::move(r));
    }
    return results;
}

io::Json acceptance_to_json(const std::vector<CriterionResult>& results) {
    io::Json items = io::Json::array();
    bool all = true;
    for (const auto& r : results) {
        all = all && r.passed;
        items.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}, {"seconds", r.seconds}});
    }
    return {{"command", "reproduce"}, {"passed", all}, {"items", items}};
}

}  // namespace derham
