// derham: command-line front end over the JSON document formats.
//
// Exit codes: 0 success, 1 failing reproduce items, 2 invalid input or usage,
// 3 inconclusive verdict (Unknown zero test or underdetermined profile).

#include "derham/acceptance.hpp"
#include "derham/chains.hpp"
#include "derham/error.hpp"
#include "derham/forms.hpp"
#include "derham/io.hpp"
#include "derham/periods.hpp"
#include "derham/quadrature.hpp"
#include "derham/spaces.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace derham;
using io::Json;

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kInvalid = 2;
constexpr int kInconclusive = 3;

struct Config {
    std::uint64_t seed = 0;
    bool json = false;
    std::optional<double> tol;
    std::optional<int> order;
    std::optional<int> max_depth;
    std::string out;

    QuadratureSpec quadrature() const {
        QuadratureSpec q;
        if (const char* env = std::getenv("DERHAM_TOL"); env && *env) {
            try {
                q.tolerance = std::stod(env);
            } catch (const std::exception&) {
                throw ValidationError(std::string("DERHAM_TOL is not a number: ") + env);
            }
        }
        if (tol) q.tolerance = *tol;
        if (order) q.order = *order;
        if (max_depth) q.max_depth = *max_depth;
        validate(q);
        return q;
    }

    ZeroTestOptions zero_test() const {
        ZeroTestOptions z;
        z.seed = seed;
        if (tol) z.tolerance = *tol;
        return z;
    }
};

// Writes either the human text or the JSON document, to stdout or --out.
void emit(const Config& cfg, const std::string& command, Json doc, const std::string& human) {
    std::ostringstream text;
    if (cfg.json) {
        Json full = {{"command", command}};
        for (auto& [k, v] : doc.items()) full[k] = v;
        text << full.dump(2) << '\n';
    } else {
        text << human;
        if (!human.empty() && human.back() != '\n') text << '\n';
    }
    if (cfg.out.empty()) {
        std::cout << text.str();
        return;
    }
    std::ofstream file(cfg.out);
    if (!file) throw ValidationError("cannot write " + cfg.out);
    file << text.str();
}

std::string list(const std::vector<std::size_t>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + "]";
}

std::string number(double x) {
    std::ostringstream s;
    s.precision(15);
    s << x;
    return s.str();
}

int verdict_code(ZeroTest z) { return z == ZeroTest::Unknown ? kInconclusive : kOk; }

const char* yes_no(ZeroTest z) {
    switch (z) {
        case ZeroTest::Zero: return "yes";
        case ZeroTest::NonZero: return "no";
        default: return "unknown";
    }
}

// ---- forms ----

int forms_d(const Config& cfg, const std::string& in) {
    const DifferentialForm w = d(io::form_from_json(io::read_json_file(in)));
    emit(cfg, "forms d", {{"form", io::form_to_json(w)}, {"text", to_string(w)}}, to_string(w));
    return kOk;
}

int forms_wedge(const Config& cfg, const std::string& a, const std::string& b) {
    const DifferentialForm w =
        wedge(io::form_from_json(io::read_json_file(a)), io::form_from_json(io::read_json_file(b)));
    emit(cfg, "forms wedge", {{"form", io::form_to_json(w)}, {"text", to_string(w)}}, to_string(w));
    return kOk;
}

int forms_pullback(const Config& cfg, const std::string& map, const std::string& in) {
    const DifferentialForm w =
        pullback(io::map_from_json(io::read_json_file(map)), io::form_from_json(io::read_json_file(in)));
    emit(cfg, "forms pullback", {{"form", io::form_to_json(w)}, {"text", to_string(w)}}, to_string(w));
    return kOk;
}

int forms_is_closed(const Config& cfg, const std::string& in) {
    const ZeroTest z = is_closed(io::form_from_json(io::read_json_file(in)), cfg.zero_test());
    emit(cfg, "forms is-closed", {{"closed", yes_no(z)}, {"verdict", to_string(z)}}, std::string("closed: ") + yes_no(z));
    return verdict_code(z);
}

// ---- spaces and complexes ----

int cmd_betti(const Config& cfg, const std::string& in) {
    const Json doc = io::read_json_file(in);
    const std::vector<std::size_t> b = doc.contains("dims") ? betti(io::complex_from_json(doc))
                                                            : betti(coboundary_complex(io::space_from_json(doc).complex));
    emit(cfg, "betti", {{"betti", b}}, list(b));
    return kOk;
}

int cmd_mv(const Config& cfg, const std::string& in) {
    const Json doc = io::read_json_file(in);
    CoverSpec spec;
    if (doc.contains("space")) {
        const auto c = io::simplicial_cover_from_json(doc);
        spec = cover_spec_from_simplicial(c.space, c.u, c.v);
    } else {
        spec = io::cover_from_json(doc);
    }
    const MVResult r = mv_solve(spec);
    std::string human;
    if (r.determined()) {
        human = list(r.values());
    } else {
        human = "underdetermined:";
        for (std::size_t k = 0; k < r.betti.size(); ++k) {
            human += " b" + std::to_string(k) + "=" + (r.betti[k] ? std::to_string(*r.betti[k]) : "?");
        }
        for (const auto& m : r.missing) human += "\n  missing: " + m;
    }
    emit(cfg, "mv", io::mv_to_json(r), human);
    return r.determined() ? kOk : kInconclusive;
}

// A model name or a profile/space document.
BettiProfile profile_argument(const std::string& arg) {
    static const std::map<std::string, BettiProfile> named = {
        {"point", {{1}, true, true, true}},   {"interval", {{1}, true, true, true}},
        {"line", {{1, 0}, true, false, true}}, {"circle", {{1, 1}, true, true, true}},
        {"sphere2", {{1, 0, 1}, true, true, true}}, {"torus", {{1, 2, 1}, true, true, true}},
    };
    if (auto it = named.find(arg); it != named.end()) return it->second;
    if (!std::filesystem::exists(arg)) {
        throw ValidationError("'" + arg + "' is neither a model name (point, interval, line, circle, sphere2, torus) "
                              "nor an existing file");
    }
    const Json doc = io::read_json_file(arg);
    if (doc.contains("betti")) return io::profile_from_json(doc);
    const auto space = io::space_from_json(doc);
    return BettiProfile::of(betti(coboundary_complex(space.complex)), space.compact, space.oriented);
}

int cmd_kunneth(const Config& cfg, const std::string& a, const std::string& b) {
    const BettiProfile p = kunneth(profile_argument(a), profile_argument(b));
    emit(cfg, "kunneth", {{"betti", p.betti}, {"profile", io::profile_to_json(p)}}, list(p.betti));
    return kOk;
}

int cmd_duality(const Config& cfg, const std::string& in) {
    const DualityReport r = duality_check(profile_argument(in));
    std::string human = "duality: " + to_string(r.status);
    if (!r.reason.empty()) human += " (" + r.reason + ")";
    for (const auto& e : r.entries) {
        human += "\n  " + e.what + ": " + std::to_string(e.lhs) + " vs " + std::to_string(e.rhs) + (e.ok ? " ok" : " FAIL");
    }
    emit(cfg, "duality", io::duality_to_json(r), human);
    return kOk;
}

int cmd_zigzag(const Config& cfg, const std::string& in) {
    const Json doc = io::read_json_file(in);
    ComplexSES ses = [&] {
        if (!doc.contains("space")) return io::ses_from_json(doc);
        const auto c = io::simplicial_cover_from_json(doc);
        return simplicial_mv_ses(c.space, c.u, c.v);
    }();
    const ZigzagReport z = zigzag(ses);
    std::ostringstream human;
    human << "H(A) " << list(z.betti_a) << "  H(B) " << list(z.betti_b) << "  H(C) " << list(z.betti_c) << '\n';
    for (std::size_t k = 0; k < z.delta.size(); ++k) human << "rank delta_" << k << " = " << rank(z.delta[k]) << '\n';
    human << "long sequence: " << (z.exactness.exact ? "exact" : "NOT exact");
    for (const auto& n : z.exactness.nodes) {
        if (!n.exact) human << "\n  fails at " << n.label;
    }
    emit(cfg, "zigzag", io::zigzag_to_json(z), human.str());
    return kOk;
}

// ---- integration ----

SingularChain chain_argument(const std::string& path) { return io::chain_from_json(io::read_json_file(path)); }

int cmd_integrate(const Config& cfg, const std::string& form, const std::string& chain) {
    const Integral r = integrate_chain(io::form_from_json(io::read_json_file(form)), chain_argument(chain), cfg.quadrature());
    emit(cfg, "integrate", {{"value", r.value}, {"error", r.error}, {"depth", r.depth}}, number(r.value));
    return kOk;
}

int cmd_stokes(const Config& cfg, const std::string& form, const std::string& chain) {
    const auto q = cfg.quadrature();
    const DifferentialForm w = io::form_from_json(io::read_json_file(form));
    const SingularChain c = chain_argument(chain);
    const double lhs = integrate_chain(d(w), c, q).value;
    const double rhs = integrate_chain(w, boundary(c), q).value;
    const double residual = stokes_residual(w, c, q);
    emit(cfg, "stokes", {{"integral_dw", lhs}, {"integral_boundary", rhs}, {"residual", residual}},
         "int_c dw = " + number(lhs) + "\nint_dc w = " + number(rhs) + "\nresidual = " + number(residual));
    return kOk;
}

int cmd_periods(const Config& cfg, const std::string& forms, const std::string& cycles) {
    const auto ws = io::forms_from_json(io::read_json_file(forms));
    const io::CycleDocument cs = io::cycles_from_json(io::read_json_file(cycles));
    PeriodOptions options;
    options.lattice = cs.lattice;
    options.zero_test = cfg.zero_test();
    const PeriodReport r = period_matrix(ws, cs.cycles, cfg.quadrature(), options);
    std::string human = "[";
    for (std::size_t i = 0; i < r.matrix.size(); ++i) {
        human += i ? ",[" : "[";
        for (std::size_t j = 0; j < r.matrix[i].size(); ++j) human += (j ? "," : "") + number(r.matrix[i][j]);
        human += "]";
    }
    human += "]\nrank " + std::to_string(r.rank);
    if (!r.perturbation_ok) human += "\nwarning: periods changed under perturbation";
    emit(cfg, "periods", io::periods_to_json(r), human);
    return kOk;
}

int cmd_reproduce(const Config& cfg, const std::string& data_dir) {
    AcceptanceOptions options;
    options.data_dir = data_dir;
    options.seed = cfg.seed;
    options.quadrature = cfg.quadrature();
    const auto results = run_acceptance(options);
    std::ostringstream human;
    bool all = true;
    for (const auto& r : results) {
        all = all && r.passed;
        human << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << ": " << r.detail << '\n';
    }
    human << (all ? "all items passed" : "some items failed");
    Json doc = acceptance_to_json(results);
    doc.erase("command");
    emit(cfg, "reproduce", doc, human.str());
    return all ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"De Rham cohomology toolkit: forms, Betti numbers, Mayer-Vietoris, periods"};
    app.require_subcommand(1);
    app.fallthrough();
    Config cfg;
    app.add_option("--seed", cfg.seed, "Seed for probabilistic zero tests and generated instances")->default_val(0);
    app.add_flag("--json", cfg.json, "Emit a JSON document instead of text");
    app.add_option("--tol", cfg.tol, "Quadrature and zero-test tolerance (default from DERHAM_TOL, else 1e-9)");
    app.add_option("--order", cfg.order, "Grundmann-Moller rule parameter");
    app.add_option("--max-depth", cfg.max_depth, "Maximum subdivision level");
    app.add_option("-o,--out", cfg.out, "Write output to this file");

    std::function<int()> action;
    std::string in, a, b, map, form, chain, forms, cycles;
    std::string data_dir = DERHAM_DEFAULT_DATA_DIR;

    auto* f = app.add_subcommand("forms", "Exterior algebra on form documents");
    f->require_subcommand(1);
    auto* fd = f->add_subcommand("d", "Exterior derivative");
    fd->add_option("--in", in, "Form document")->required();
    fd->callback([&] { action = [&] { return forms_d(cfg, in); }; });
    auto* fw = f->add_subcommand("wedge", "Wedge product a ^ b");
    fw->add_option("--a", a, "Left form")->required();
    fw->add_option("--b", b, "Right form")->required();
    fw->callback([&] { action = [&] { return forms_wedge(cfg, a, b); }; });
    auto* fp = f->add_subcommand("pullback", "Pullback along a map");
    fp->add_option("--map", map, "Map document")->required();
    fp->add_option("--in", in, "Form on the map's target")->required();
    fp->callback([&] { action = [&] { return forms_pullback(cfg, map, in); }; });
    auto* fc = f->add_subcommand("is-closed", "Decide dw = 0");
    fc->add_option("--in", in, "Form document")->required();
    fc->callback([&] { action = [&] { return forms_is_closed(cfg, in); }; });

    auto* sb = app.add_subcommand("betti", "Betti numbers of a simplicial space or cochain complex");
    sb->add_option("--in", in, "Space or complex document")->required();
    sb->callback([&] { action = [&] { return cmd_betti(cfg, in); }; });

    auto* sm = app.add_subcommand("mv", "Mayer-Vietoris solver on a cover");
    sm->add_option("--in", in, "Cover specification or simplicial cover")->required();
    sm->callback([&] { action = [&] { return cmd_mv(cfg, in); }; });

    auto* sk = app.add_subcommand("kunneth", "Betti numbers of a product");
    sk->add_option("--a", a, "Model name or profile/space document")->required();
    sk->add_option("--b", b, "Model name or profile/space document")->required();
    sk->callback([&] { action = [&] { return cmd_kunneth(cfg, a, b); }; });

    auto* sd = app.add_subcommand("duality", "Poincare duality check");
    sd->add_option("--in", in, "Model name or profile/space document")->required();
    sd->callback([&] { action = [&] { return cmd_duality(cfg, in); }; });

    auto* sz = app.add_subcommand("zigzag", "Long exact sequence of a short exact sequence of complexes");
    sz->add_option("--in", in, "SES document or simplicial cover")->required();
    sz->callback([&] { action = [&] { return cmd_zigzag(cfg, in); }; });

    auto* si = app.add_subcommand("integrate", "Integrate a form over a chain");
    si->add_option("--form", form, "Form document")->required();
    si->add_option("--chain", chain, "Chain or simplex document")->required();
    si->callback([&] { action = [&] { return cmd_integrate(cfg, form, chain); }; });

    auto* ss = app.add_subcommand("stokes", "Compare the two sides of Stokes' theorem");
    ss->add_option("--form", form, "Form document of degree k-1")->required();
    ss->add_option("--chain", chain, "k-chain or k-simplex document")->required();
    ss->callback([&] { action = [&] { return cmd_stokes(cfg, form, chain); }; });

    auto* sp = app.add_subcommand("periods", "Period matrix of closed forms over cycles");
    sp->add_option("--forms", forms, "Form list document")->required();
    sp->add_option("--cycles", cycles, "Cycle list document")->required();
    sp->callback([&] { action = [&] { return cmd_periods(cfg, forms, cycles); }; });

    auto* sr = app.add_subcommand("reproduce", "Run the acceptance suite");
    sr->add_option("--data-dir", data_dir, "Directory holding golden/ and examples/")->default_val(data_dir);
    sr->callback([&] { action = [&] { return cmd_reproduce(cfg, data_dir); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInvalid;
    }

    try {
        return action();
    } catch (const derham::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
    }
}
