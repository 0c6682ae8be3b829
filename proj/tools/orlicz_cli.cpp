#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "orlicz/io.hpp"
#include "orlicz/orlicz.hpp"

using namespace orlicz;
using io::json;

namespace {

struct Args {
    std::string function, perturbation, weight = "constant", measure, body, grid, out, plot_data;
    std::string format = "json";
    std::string g = "1";
    std::vector<double> ladder;
    int dim = 1;
    double t = 0.5, s = 0.5, alpha = 0.5, kkt_tol = 1e-4, bin = 0;
    int levels = 200, max_iterations = 5000;
    bool force = false;
};

/// Exit codes: 1 parse/IO, 2 precondition, 3 non-convergence.
int exit_code(ErrorCode c) {
    switch (c) {
    case ErrorCode::Parse: return 1;
    case ErrorCode::NoProgress:
    case ErrorCode::QuadratureFailure: return 3;
    default: return 2;
    }
}

json defaults_table() {
    json j;
    j["grid"] = {{"dim1", io::grid_to_json(default_grid(1))}, {"dim2", io::grid_to_json(default_grid(2))}};
    j["moment"] = {{"truncation_flag_relative", 0.01}, {"outer_shell", 0.9}, {"outer_shell_max_fraction", 0.01}};
    j["variation"] = {{"ladder", default_ladder()},
                      {"regularity_alpha", 0.5},
                      {"pointwise_nodes", 100},
                      {"pointwise_t", 1e-3},
                      {"pointwise_seed", 12345}};
    j["geometric_variation"] = {{"directions", 256}};
    j["coarea"] = {{"levels", 200}};
    j["measure"] = {{"drop_relative", 1e-12}, {"sliced_w1_angles", 32}};
    const SolveOptions so;
    j["solver"] = {{"kkt_tol", so.kkt_tol},
                   {"max_iterations", so.max_iterations},
                   {"stall_limit", so.stall_limit},
                   {"armijo", so.armijo},
                   {"backtrack", so.backtrack},
                   {"initial_step", 1.0},
                   {"zeta_sweep_angles", 1024},
                   {"condition_probe_t", "2^-k, k = 1..10"},
                   {"verify_grid", {{"dim1", io::grid_to_json(Grid(1, 12.0, 1025))},
                                    {"dim2", io::grid_to_json(Grid(2, 12.0, 257))}}}};
    return j;
}

LogConcaveFunction load_function(const std::string& spec) {
    require(!spec.empty(), ErrorCode::Parse, "missing --function");
    if (spec.front() == '{') return io::function_from_json(io::parse_json(spec, "function spec"));
    return io::load_function(spec);
}

LogConcaveFunction maybe_grid(const LogConcaveFunction& f, const Args& a) {
    if (a.grid.empty()) return f;
    return LogConcaveFunction(f.to_grid(io::parse_grid(a.grid, f.dim())));
}

json moment_json(const MomentValue& m) {
    return json{{"value", m.value},
                {"route", m.route},
                {"truncation_estimate", m.truncation_estimate},
                {"quadrature_estimate", m.quadrature_estimate},
                {"inner_value", m.inner_value},
                {"outer_shell_fraction", m.outer_shell_fraction},
                {"truncation_flag", m.truncation_flag}};
}

json ladder_json(const std::vector<LadderPoint>& pts) {
    json arr = json::array();
    for (const auto& p : pts) arr.push_back(json{{"t", p.t}, {"value", p.value}, {"quotient", p.quotient}});
    return arr;
}

void write_plot(const Args& a, const std::string& name, const std::string& csv) {
    if (a.plot_data.empty()) return;
    io::write_text(std::filesystem::path(a.plot_data) / name, csv);
}

bool out_is_csv(const Args& a) {
    return a.out.size() > 4 && a.out.substr(a.out.size() - 4) == ".csv";
}

struct Outcome {
    json result;
    std::vector<std::string> warnings;
    int code = 0;
    std::optional<std::string> csv;  // written to --out when it names a .csv file
};

// ---- subcommands -------------------------------------------------------------------------

Outcome cmd_check_weight(const Args& a) {
    const auto w = io::parse_weight(a.weight, a.dim);
    const auto r = classify_weight(w);
    Outcome o;
    o.result = {{"weight", w.name()},
                {"A1", to_string(r.a1)},
                {"A2", to_string(r.a2)},
                {"A3", to_string(r.a3)},
                {"all_pass", r.all_pass()},
                {"admissible", r.admissible()},
                {"F_growth", to_string(w.F_growth())},
                {"probes", {{"A1", r.a1_probe}, {"A2", r.a2_probe}, {"A3", r.a3_probe}}}};
    if (!r.admissible()) {
        o.warnings.push_back(r.failed_conditions());
        o.code = 2;
    }
    if (!a.plot_data.empty() && r.admissible()) {
        std::string csv = "t,F_omega\n";
        for (int k = -6; k <= 6; ++k) {
            const double t = std::ldexp(1.0, k);
            csv += io::format_number(t) + "," + io::format_number(F_omega(w, t)) + "\n";
        }
        write_plot(a, "F_omega.csv", csv);
    }
    return o;
}

Outcome cmd_moment(const Args& a) {
    const auto f = maybe_grid(load_function(a.function), a);
    const auto w = io::parse_weight(a.weight, f.dim());
    MomentOptions opt;
    opt.throw_on_truncation = true;
    const auto m = moment(f, w, opt);
    Outcome o;
    o.result = moment_json(m);
    o.result["function"] = f.description();
    o.result["weight"] = w.name();
    if (m.truncation_flag) o.warnings.push_back("truncation flag: V_R and V_{R/2} differ by more than 1%");
    return o;
}

Outcome cmd_legendre(const Args& a) {
    const auto f = load_function(a.function);
    const Grid grid = a.grid.empty() ? default_grid(f.dim()) : io::parse_grid(a.grid, f.dim());
    const auto phi = f.is_prototype() ? f.to_grid(grid) : f.sampled();
    const auto star = legendre_transform(phi);
    const auto bi = biconjugate(phi);
    double involution = 0;
    for (std::size_t k = 0; k < phi.values().size(); ++k)
        if (phi.finite(k) && bi.finite(k)) involution = std::max(involution, std::abs(phi.value(k) - bi.value(k)));
    Outcome o;
    o.result = {{"function", f.description()},
                {"primal_grid", io::grid_to_json(phi.grid())},
                {"dual_grid", io::grid_to_json(star.grid())},
                {"finite_dual_nodes", star.finite_count()},
                {"involution_max_error", involution}};
    if (f.is_prototype() && f.prototype().has_conjugate()) {
        // compare where the dual node is the gradient of an interior primal node
        double err = 0;
        const auto s = max_slopes(phi);
        for (std::size_t k = 0; k < star.values().size(); ++k) {
            if (!star.finite(k)) continue;
            const Vec y = star.grid().node(k);
            if (std::abs(y[0]) > 0.5 * s[0] || (f.dim() == 2 && std::abs(y[1]) > 0.5 * s[1])) continue;
            err = std::max(err, std::abs(star.value(k) - f.prototype().conjugate(y)));
        }
        o.result["max_abs_error"] = err;
    } else {
        o.result["max_abs_error"] = nullptr;
    }
    o.csv = io::values_to_csv(star);
    return o;
}

Outcome cmd_asplund(const Args& a) {
    const auto f = load_function(a.function);
    const auto g = load_function(a.perturbation);
    const Grid grid = a.grid.empty() ? working_grid(f, &g) : io::parse_grid(a.grid, f.dim());
    const auto sum = asplund_sum(f, a.t, g, grid);
    Outcome o;
    MomentOptions opt;
    opt.throw_on_truncation = false;
    const auto m = moment(sum, WeightFunction::constant(f.dim()), opt);
    o.result = {{"function", f.description()},
                {"perturbation", g.description()},
                {"t", a.t},
                {"grid", io::grid_to_json(grid)},
                {"min_phi", sum.min_phi()},
                {"moment", moment_json(m)}};
    if (m.truncation_flag) o.warnings.push_back("truncation flag on the Asplund sum");
    o.csv = io::values_to_csv(sum.sampled());
    if (!out_is_csv(a)) o.result["sum"] = io::function_to_json(sum);
    return o;
}

Outcome cmd_level_set(const Args& a) {
    const auto f = maybe_grid(load_function(a.function), a);
    const auto k = superlevel_set(f, a.s);
    Outcome o;
    o.result = {{"function", f.description()}, {"s", a.s}, {"volume", k.volume()}, {"body", io::body_to_json(k)}};
    return o;
}

Outcome cmd_curvature_euclidean(const Args& a) {
    const auto f = maybe_grid(load_function(a.function), a);
    const auto w = io::parse_weight(a.weight, f.dim());
    const auto c = euclidean_curvature_measure(f, w, a.bin);
    Outcome o;
    o.result = io::measure_to_json(c.measure);
    o.result["source_function"] = f.description();
    o.result["weight"] = w.name();
    o.result["boundary_grade_mass"] = c.boundary_grade_mass;
    o.result["degenerate_gradient"] = c.degenerate_gradient;
    if (!f.is_prototype()) o.result["grid"] = io::grid_to_json(f.sampled().grid());
    if (c.degenerate_gradient) o.warnings.push_back("boundary-grade gradient mass exceeds 5% of the interior mass");
    o.csv = io::measure_to_csv(c.measure);
    return o;
}

Outcome cmd_curvature_spherical(const Args& a) {
    const auto f = maybe_grid(load_function(a.function), a);
    const auto w = io::parse_weight(a.weight, f.dim());
    const auto c = spherical_curvature_measure(f, w);
    Outcome o;
    o.result = io::measure_to_json(c.measure);
    o.result["source_function"] = f.description();
    o.result["weight"] = w.name();
    o.result["note"] = c.note;
    o.csv = io::measure_to_csv(c.measure);
    return o;
}

Outcome cmd_curvature_body(const Args& a) {
    const auto k = io::parse_body(a.body);
    const auto w = io::parse_weight(a.weight, k.dim());
    const auto c = body_curvature_measure(k, w);
    Outcome o;
    o.result = io::measure_to_json(c);
    o.result["weight"] = w.name();
    o.result["dual_orlicz_volume"] = dual_orlicz_volume(k, w).value;
    o.csv = io::measure_to_csv(c);
    return o;
}

Outcome cmd_tv(const Args& a) {
    const auto f = maybe_grid(load_function(a.function), a);
    const auto l = io::parse_body(a.body);
    const auto w = io::parse_weight(a.weight, f.dim());
    Outcome o;
    o.result = {{"function", f.description()}, {"weight", w.name()}, {"total_variation", weighted_total_variation(f, l, w)}};
    return o;
}

Outcome cmd_coarea(const Args& a) {
    const auto f = maybe_grid(load_function(a.function), a);
    const auto l = io::parse_body(a.body);
    const auto w = io::parse_weight(a.weight, f.dim());
    const auto r = coarea_check(f, l, w, a.levels);
    Outcome o;
    o.result = {{"function", f.description()},
                {"weight", w.name()},
                {"level_integral", r.level_integral},
                {"total_variation", r.total_variation},
                {"relative_gap", r.relative_gap},
                {"levels", r.levels}};
    return o;
}

Outcome cmd_variation(const Args& a) {
    const auto f = load_function(a.function);
    const auto g = load_function(a.perturbation);
    const auto w = io::parse_weight(a.weight, f.dim());
    const Grid grid = a.grid.empty() ? (f.dim() == 1 ? Grid(1, 8.0, 4097) : Grid(2, 8.0, 513))
                                     : io::parse_grid(a.grid, f.dim());
    const auto ladder = a.ladder.empty() ? default_ladder() : a.ladder;
    const auto r = variation_check(f, g, w, ladder, grid, a.alpha);
    Outcome o;
    o.result = {{"function", f.description()},
                {"perturbation", g.description()},
                {"weight", w.name()},
                {"grid", io::grid_to_json(grid)},
                {"numeric", r.numeric_derivative},
                {"closed_form", r.closed_form},
                {"gap", r.relative_gap},
                {"base_value", r.base_value},
                {"ladder", ladder_json(r.ladder)},
                {"richardson", r.richardson},
                {"regularity", {{"alpha", r.regularity_alpha}, {"pass", r.regularity_pass}}},
                {"note", r.note}};
    if (!r.regularity_pass) o.warnings.push_back("origin regularity check failed: outside theorem hypotheses");
    std::string csv = "t,value,quotient\n";
    for (const auto& p : r.ladder)
        csv += io::format_number(p.t) + "," + io::format_number(p.value) + "," + io::format_number(p.quotient) + "\n";
    write_plot(a, "variation_ladder.csv", csv);
    o.csv = csv;
    return o;
}

Outcome cmd_geometric_variation(const Args& a) {
    const auto k = io::parse_body(a.body);
    const auto w = io::parse_weight(a.weight, k.dim());
    std::function<double(const Vec&)> g;
    if (a.g == "h") g = [k](const Vec& u) { return k.support(u); };
    else {
        const double c = io::parse_number(a.g);
        g = [c](const Vec&) { return c; };
    }
    const auto ladder = a.ladder.empty() ? default_ladder() : a.ladder;
    const auto r = geometric_variation(k, g, w, ladder);
    Outcome o;
    o.result = {{"weight", w.name()},
                {"g", a.g},
                {"numeric", r.numeric_derivative},
                {"closed_form", r.closed_form},
                {"gap", r.relative_gap},
                {"ladder", ladder_json(r.ladder)}};
    std::string csv = "t,value,quotient\n";
    for (const auto& p : r.ladder)
        csv += io::format_number(p.t) + "," + io::format_number(p.value) + "," + io::format_number(p.quotient) + "\n";
    write_plot(a, "geometric_ladder.csv", csv);
    o.csv = csv;
    return o;
}

Outcome cmd_solve(const Args& a) {
    require(!a.measure.empty(), ErrorCode::Parse, "missing --measure");
    const TargetMeasure mu(io::load_measure(a.measure));
    const auto w = io::parse_weight(a.weight, mu.dim());
    SolveOptions opt;
    opt.kkt_tol = a.kkt_tol;
    opt.force = a.force;
    opt.max_iterations = a.max_iterations;
    opt.throw_on_failure = false;
    const auto r = solve(mu, w, opt);
    Outcome o;
    json trace = json::array();
    for (const auto& it : r.trace)
        trace.push_back({{"iteration", it.iteration}, {"objective", it.objective}, {"kkt", it.kkt_residual}, {"step", it.step}});
    json lemma = json::array();
    for (const auto& l : r.lemma55) lemma.push_back({{"a", l.a}, {"bound", l.bound}, {"holds", l.holds}});
    o.result = {{"weight", w.name()},
                {"atoms", io::measure_to_json(mu.measure())},
                {"dropped_atoms", mu.dropped()},
                {"converged", r.converged},
                {"stop_reason", r.stop_reason},
                {"iterations", r.iterations},
                {"kkt_residual", r.kkt_residual},
                {"v", r.v},
                {"V", r.V},
                {"masses", r.masses},
                {"per_atom_mass_errors", r.per_atom_mass_errors},
                {"W1", r.w1_to_target},
                {"mass_gap", r.mass_gap},
                {"zeta", r.zeta},
                {"condition_113", to_string(r.condition_113.verdict)},
                {"solution", io::function_to_json(LogConcaveFunction(*r.solution))},
                {"recovered_measure", io::measure_to_json(r.recovered_measure)},
                {"diagnostics",
                 {{"lemma55_all_hold", r.lemma55_all_hold},
                  {"lemma55", lemma},
                  {"concavity_ok", r.concavity_ok},
                  {"concavity_defect", r.concavity_defect},
                  {"phi0_origin", r.phi0_origin},
                  {"positivity_ok", r.positivity_ok},
                  {"grid_crosscheck_gap", r.grid_crosscheck_gap}}},
                {"trace", trace}};
    if (!a.grid.empty()) {
        const auto cmp = verify_solution(LogConcaveFunction(*r.solution), mu, w, io::parse_grid(a.grid, mu.dim()));
        o.result["verification"] = {{"w1_distance", cmp.w1_distance}, {"mass_gap", cmp.mass_gap}};
    }
    if (!r.positivity_ok) o.warnings.push_back("positivity diagnostic: phi_0(o) <= 0");
    if (!r.concavity_ok) o.warnings.push_back("objective not concave along iterate segments");
    if (!r.converged) {
        o.warnings.push_back("solver stopped (" + r.stop_reason + ") before reaching the KKT tolerance");
        o.code = 3;
    }
    std::string kkt = "iteration,kkt_residual\n";
    for (const auto& it : r.trace) kkt += std::to_string(it.iteration) + "," + io::format_number(it.kkt_residual) + "\n";
    write_plot(a, "kkt_residual.csv", kkt);
    if (!r.condition_113.t.empty()) {
        std::string c = "t,log_product\n";
        for (std::size_t i = 0; i < r.condition_113.t.size(); ++i)
            c += io::format_number(r.condition_113.t[i]) + "," + io::format_number(r.condition_113.log_product[i]) + "\n";
        write_plot(a, "condition_113.csv", c);
    }
    o.csv = io::measure_to_csv(r.recovered_measure);
    return o;
}

Outcome cmd_verify(const Args& a) {
    const auto f = load_function(a.function);
    require(!a.measure.empty(), ErrorCode::Parse, "missing --measure");
    const TargetMeasure mu(io::load_measure(a.measure));
    const auto w = io::parse_weight(a.weight, f.dim());
    std::optional<Grid> grid;
    if (!a.grid.empty()) grid = io::parse_grid(a.grid, f.dim());
    const auto cmp = verify_solution(f, mu, w, grid);
    Outcome o;
    o.result = {{"function", f.description()}, {"weight", w.name()}, {"w1_distance", cmp.w1_distance}, {"mass_gap", cmp.mass_gap}};
    return o;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Orlicz moments, curvature measures and the functional dual Orlicz Minkowski problem"};
    Args a;
    bool show_defaults = false;
    app.add_flag("--show-defaults", show_defaults, "Print the table of numeric defaults and exit");

    auto add_common = [&](CLI::App* sc) {
        sc->add_option("--out", a.out, "Write the report (.json) or the CSV series (.csv) here");
        sc->add_option("--format", a.format, "Report format on stdout")->check(CLI::IsMember({"json", "csv"}));
        sc->add_option("--plot-data", a.plot_data, "Directory for CSV plot series");
    };
    auto add_function = [&](CLI::App* sc) {
        sc->add_option("--function", a.function, "Function spec (JSON file or inline JSON)")->required();
        sc->add_option("--grid", a.grid, "Grid override R,m");
    };
    auto add_weight = [&](CLI::App* sc) {
        sc->add_option("--weight", a.weight, "Weight spec, e.g. constant, power:q=2, stretched_exp:alpha=0.5");
    };

    std::vector<std::pair<CLI::App*, std::function<Outcome(const Args&)>>> commands;
    auto sub = [&](const char* name, const char* help, std::function<Outcome(const Args&)> fn) {
        auto* sc = app.add_subcommand(name, help);
        add_common(sc);
        commands.emplace_back(sc, std::move(fn));
        return sc;
    };

    auto* cw = sub("check-weight", "Classify a weight against A1-A3", cmd_check_weight);
    add_weight(cw);
    cw->add_option("--dim", a.dim, "Dimension (1 or 2)");

    auto* mo = sub("moment", "Orlicz moment of a log-concave function", cmd_moment);
    add_function(mo);
    add_weight(mo);

    auto* le = sub("legendre", "Discrete Legendre transform of a potential", cmd_legendre);
    add_function(le);

    auto* as = sub("asplund", "Asplund sum f (+) t.g", cmd_asplund);
    add_function(as);
    as->add_option("--perturbation", a.perturbation, "Second function spec")->required();
    as->add_option("--t", a.t, "Scalar t > 0");

    auto* ls = sub("level-set", "Superlevel set {f >= s}", cmd_level_set);
    add_function(ls);
    ls->add_option("--s", a.s, "Level s > 0");

    auto* ce = sub("curvature-euclidean", "Euclidean dual Orlicz curvature measure", cmd_curvature_euclidean);
    add_function(ce);
    add_weight(ce);
    ce->add_option("--bin", a.bin, "Bin width (default: grid spacing, 1/64 for closed forms)");

    auto* cs = sub("curvature-spherical", "Spherical dual Orlicz curvature measure", cmd_curvature_spherical);
    add_function(cs);
    add_weight(cs);

    auto* cb = sub("curvature-body", "Dual Orlicz curvature measure of a polytope", cmd_curvature_body);
    cb->add_option("--body", a.body, "Body spec (JSON file or inline JSON)")->required();
    add_weight(cb);

    auto* tv = sub("tv", "Anisotropic weighted total variation", cmd_tv);
    add_function(tv);
    add_weight(tv);
    tv->add_option("--body", a.body, "Body L")->required();

    auto* co = sub("coarea-check", "Coarea cross-check of the weighted total variation", cmd_coarea);
    add_function(co);
    add_weight(co);
    co->add_option("--body", a.body, "Body L")->required();
    co->add_option("--levels", a.levels, "Number of levels");

    auto* va = sub("variation-check", "First variation: difference quotients against the closed form", cmd_variation);
    add_function(va);
    add_weight(va);
    va->add_option("--perturbation", a.perturbation, "Perturbation g (compact support)")->required();
    va->add_option("--ladder", a.ladder, "Decreasing t values");
    va->add_option("--alpha", a.alpha, "Exponent for the origin regularity check");

    auto* gv = sub("geometric-variation", "Wulff-shape variation of a polytope", cmd_geometric_variation);
    gv->add_option("--body", a.body, "Body K")->required();
    add_weight(gv);
    gv->add_option("--g", a.g, "Constant perturbation value, or h for g = h_K");
    gv->add_option("--ladder", a.ladder, "Decreasing t values");

    auto* so = sub("solve", "Functional dual Orlicz Minkowski problem for an even discrete measure", cmd_solve);
    so->add_option("--measure", a.measure, "Measure CSV (mass,x1[,x2])")->required();
    add_weight(so);
    so->add_option("--kkt-tol", a.kkt_tol, "KKT tolerance");
    so->add_option("--grid", a.grid, "Verification grid R,m");
    so->add_option("--max-iterations", a.max_iterations, "Iteration cap");
    so->add_flag("--force", a.force, "Proceed when the solvability condition is unverified");

    auto* ve = sub("verify", "Compare C^e of a function with a target measure", cmd_verify);
    add_function(ve);
    add_weight(ve);
    ve->add_option("--measure", a.measure, "Target measure CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }
    if (show_defaults) {
        std::cout << defaults_table().dump(2) << "\n";
        return 0;
    }
    for (auto& [sc, fn] : commands) {
        if (!sc->parsed()) continue;
        const auto start = std::chrono::steady_clock::now();
        json report;
        report["command"] = sc->get_name();
        int code = 0;
        Outcome o;
        try {
            o = fn(a);
            code = o.code;
        } catch (const Error& e) {
            std::cerr << "error: " << e.what() << "\n";
            report["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
            std::cout << report.dump(2) << "\n";
            return exit_code(e.code());
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
        report["result"] = o.result;
        report["warnings"] = o.warnings;
        for (const auto& wmsg : o.warnings) std::cerr << "warning: " << wmsg << "\n";
        report["timing"] = {{"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()}};
        try {
            if (!a.out.empty()) {
                if (out_is_csv(a)) io::write_text(a.out, o.csv.value_or(io::flatten_csv(report)));
                else io::write_text(a.out, report.dump(2) + "\n");
            }
        } catch (const Error& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
        if (a.format == "csv") std::cout << io::flatten_csv(report);
        else std::cout << report.dump(2) << "\n";
        return code;
    }
    std::cerr << app.help();
    return 1;
}
