// Command-line driver: solves the single-company and merged problems,
// runs the curve-strategy pipeline, evaluates and simulates strategies,
// and exports CSV/JSON-lines data for plotting and CI checks.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "collab/config.hpp"
#include "collab/evaluate.hpp"
#include "collab/iterate.hpp"
#include "collab/parallel.hpp"
#include "collab/simulate.hpp"
#include "collab/verify.hpp"
#include "json.hpp"

using namespace collab;
namespace fs = std::filesystem;

namespace {

struct Cli {
    std::string config_path;
    std::string out_dir = "out";
    int threads = 0;
    std::uint64_t seed = 0;  // 0: use the config's seed
    std::string v0_convention;  // empty: use the config's
    std::string spec_path;      // evaluate-curve / simulate curve policy
    std::vector<std::string> states;  // simulate: "x,y" pairs
};

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::ofstream open_csv(const Cli& cli, const RunConfig& cfg, const std::string& name) {
    fs::create_directories(cli.out_dir);
    std::ofstream out(fs::path(cli.out_dir) / name);
    if (!out) throw std::runtime_error("cannot open output file: " + name);
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(cfg.hash()));
    out << "# config_hash=" << hash << " seed=" << cfg.seed << "\n";
    return out;
}

RunConfig load_config(Cli& cli) {
    RunConfig cfg = RunConfig::load(cli.config_path);
    if (cli.seed != 0) cfg.seed = cli.seed;
    if (!cli.v0_convention.empty()) {
        if (cli.v0_convention == "paper" || cli.v0_convention == "payoff")
            cfg.v0_convention = cli.v0_convention;
        else
            throw std::runtime_error("--v0-convention must be 'paper' or 'payoff'");
    }
    thread_cap() = cli.threads;
    return cfg;
}

void write_grid_csv(std::ofstream& out, const GridFunction& v) {
    out << "x,y,value\n";
    const Grid2D& g = v.grid();
    for (std::size_t j = 0; j < g.ny; ++j)
        for (std::size_t i = 0; i < g.nx; ++i)
            out << fmt12(g.x(i)) << ',' << fmt12(g.y(j)) << ',' << fmt12(v.at(i, j)) << '\n';
}

void write_curve_csv(std::ofstream& out, const MonotoneCurve& c, const char* abscissa) {
    out << abscissa << ",height\n";
    for (std::size_t k = 0; k < c.size(); ++k)
        out << fmt12(c.u_at(k)) << ',' << fmt12(c.z_at(k)) << '\n';
}

CurveSpec load_spec_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open curve spec file: " + path);
    nlohmann::json j;
    in >> j;
    CurveSpec s;
    s.xbar = j.at("xbar").get<double>();
    s.ybar = j.at("ybar").get<double>();
    auto curve = [](const nlohmann::json& c) {
        return MonotoneCurve(c.at("u").get<std::vector<double>>(),
                             c.at("z").get<std::vector<double>>());
    };
    s.xi1 = curve(j.at("xi1"));
    s.xi2 = curve(j.at("xi2"));
    return s;
}

void write_spec_json(const Cli& cli, const CurveSpec& s, const std::string& name) {
    nlohmann::json j;
    j["xbar"] = s.xbar;
    j["ybar"] = s.ybar;
    auto dump = [](const MonotoneCurve& c) {
        nlohmann::json o;
        std::vector<double> u(c.size()), z(c.size());
        for (std::size_t k = 0; k < c.size(); ++k) {
            u[k] = c.u_at(k);
            z[k] = c.z_at(k);
        }
        o["u"] = u;
        o["z"] = z;
        return o;
    };
    j["xi1"] = dump(s.xi1);
    j["xi2"] = dump(s.xi2);
    std::ofstream out(fs::path(cli.out_dir) / name);
    out << j.dump(2) << '\n';
}

int cmd_solve_univariate(Cli& cli) {
    RunConfig cfg = load_config(cli);
    ModelParams p = cfg.make_params();
    UnivariateValue v1 = solve_standalone(p.p1, p.lambda1, p.law1, p.delta);
    UnivariateValue v2 = solve_standalone(p.p2, p.lambda2, p.law2, p.delta);
    std::ofstream out = open_csv(cli, cfg, "univariate.csv");
    out << "x,value_company1,value_company2\n";
    for (double x = 0.0; x <= cfg.x_max + 1e-12; x += cfg.step)
        out << fmt12(x) << ',' << fmt12(v1.value(x)) << ',' << fmt12(v2.value(x)) << '\n';
    std::cout << "barrier_company1 " << fmt12(v1.barrier()) << "\n"
              << "barrier_company2 " << fmt12(v2.barrier()) << "\n";
    return 0;
}

int cmd_solve_merger(Cli& cli) {
    RunConfig cfg = load_config(cli);
    ModelParams p = cfg.make_params();
    UnivariateValue vm = merger_value(p);
    std::ofstream out = open_csv(cli, cfg, "merger.csv");
    out << "s,value\n";
    for (double s = 0.0; s <= 2.0 * cfg.x_max + 1e-12; s += cfg.step)
        out << fmt12(s) << ',' << fmt12(vm.value(s)) << '\n';
    std::cout << "merger_barrier " << fmt12(vm.barrier()) << "\n";
    return 0;
}

int cmd_evaluate_curve(Cli& cli) {
    RunConfig cfg = load_config(cli);
    ModelParams p = cfg.make_params();
    BoundaryPayoffs bp = make_boundary_payoffs(p);
    CurveSpec spec = load_spec_json(cli.spec_path);
    auto bad = validate(spec, p);
    if (!bad.empty()) {
        for (const auto& m : bad) std::cerr << "curve spec: " << m << "\n";
        return 2;
    }
    Grid2D g = cfg.make_grid();
    FixedPointResult fp = fixed_point_value(spec, p, bp, g, cfg.fixed_point_tol);
    std::ofstream out = open_csv(cli, cfg, "curve_value.csv");
    write_grid_csv(out, fp.value);
    // Monte Carlo cross-check at a handful of states.
    std::ofstream mc = open_csv(cli, cfg, "curve_value_mc.csv");
    mc << "x,y,analytic,mc_mean,mc_se,paths\n";
    double states[][2] = {{spec.xbar, spec.ybar},
                          {spec.xbar + 1.0, spec.ybar + 1.0},
                          {spec.xbar * 0.5, spec.ybar * 0.5}};
    for (auto& q : states) {
        SimEstimate e =
            estimate(p, bp, CurvePolicy{spec}, q[0], q[1], cfg.paths, cfg.seed);
        mc << fmt12(q[0]) << ',' << fmt12(q[1]) << ',' << fmt12(fp.value(q[0], q[1])) << ','
           << fmt12(e.mean) << ',' << fmt12(e.std_error) << ',' << e.paths << '\n';
    }
    std::cout << "sweeps " << fp.sweeps << " converged " << (fp.converged ? 1 : 0) << "\n";
    return fp.converged ? 0 : 3;
}

int cmd_iterate(Cli& cli) {
    RunConfig cfg = load_config(cli);
    ModelParams p = cfg.make_params();
    BoundaryPayoffs bp = make_boundary_payoffs(p);
    Grid2D g = cfg.make_grid();
    fs::create_directories(cli.out_dir);
    std::ofstream log(fs::path(cli.out_dir) / "iterations.jsonl");
    IterateResult r = run(p, bp, g, cfg.iterations, cfg.fixed_point_tol,
                          cfg.make_convention(), &log);
    std::ofstream out = open_csv(cli, cfg, "value.csv");
    write_grid_csv(out, r.final_value.value);
    std::ofstream c1 = open_csv(cli, cfg, "curve1.csv");
    write_curve_csv(c1, r.final_spec.xi1, "u");
    std::ofstream c2 = open_csv(cli, cfg, "curve2.csv");
    write_curve_csv(c2, r.final_spec.xi2, "v");
    write_spec_json(cli, r.final_spec, "final_spec.json");
    std::cout << "vertex " << fmt12(r.final_spec.xbar) << ' ' << fmt12(r.final_spec.ybar)
              << "\nfixed_point_sweeps " << r.final_value.sweeps << "\n";
    return 0;
}

int cmd_simulate(Cli& cli) {
    RunConfig cfg = load_config(cli);
    ModelParams p = cfg.make_params();
    BoundaryPayoffs bp = make_boundary_payoffs(p);
    StrategyPolicy policy = TakeRunPolicy{};
    if (!cli.spec_path.empty()) policy = CurvePolicy{load_spec_json(cli.spec_path)};
    std::vector<std::pair<double, double>> pts;
    for (const std::string& s : cli.states) {
        auto comma = s.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("--state expects x,y");
        pts.emplace_back(std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1)));
    }
    if (pts.empty()) pts = {{0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}};
    std::ofstream out = open_csv(cli, cfg, "simulate.csv");
    out << "x,y,mean,se,paths\n";
    for (auto& [x, y] : pts) {
        SimEstimate e = estimate(p, bp, policy, x, y, cfg.paths, cfg.seed);
        out << fmt12(x) << ',' << fmt12(y) << ',' << fmt12(e.mean) << ','
            << fmt12(e.std_error) << ',' << e.paths << '\n';
    }
    return 0;
}

int cmd_verify(Cli& cli) {
    RunConfig cfg = load_config(cli);
    ModelParams p = cfg.make_params();
    BoundaryPayoffs bp = make_boundary_payoffs(p);
    Grid2D g = cfg.make_grid();
    IterateResult r = run(p, bp, g, cfg.iterations, cfg.fixed_point_tol, cfg.make_convention());
    const GridFunction& v = r.final_value.value;
    EnvelopeReport env = check_envelope(v, p);
    LipschitzReport lip = check_lipschitz(v, p);
    ResidualReport res =
        check_supersolution(v, p, bp, supersolution_tol(v, p), &r.final_spec);
    std::cout << "envelope " << (env.pass ? "pass" : "fail") << " worst_lower "
              << fmt12(env.worst_lower) << " worst_upper " << fmt12(env.worst_upper) << "\n";
    std::cout << "lipschitz " << (lip.pass ? "pass" : "fail") << " worst_lower "
              << fmt12(lip.worst_lower) << " worst_upper " << fmt12(lip.worst_upper) << "\n";
    std::cout << "supersolution " << (res.pass ? "pass" : "fail") << " max_l "
              << fmt12(res.max_l_residual) << " max_dx " << fmt12(res.max_dx_residual)
              << " max_dy " << fmt12(res.max_dy_residual) << " tol " << fmt12(res.tol)
              << " worst_region " << res.worst_region << "\n";
    return (env.pass && lip.pass && res.pass) ? 0 : 1;
}

int cmd_compare(Cli& cli) {
    RunConfig cfg = load_config(cli);
    ModelParams p = cfg.make_params();
    BoundaryPayoffs bp = make_boundary_payoffs(p);
    Grid2D g = cfg.make_grid();
    IterateResult r = run(p, bp, g, cfg.iterations, cfg.fixed_point_tol, cfg.make_convention());
    TripleComparison t = compare_triple(r.final_value.value, p, bp);
    std::ofstream out = open_csv(cli, cfg, "compare.csv");
    out << "x,y,collaboration,stand_alone,merger_half\n";
    for (std::size_t j = 0; j < g.ny; ++j)
        for (std::size_t i = 0; i < g.nx; ++i)
            out << fmt12(g.x(i)) << ',' << fmt12(g.y(j)) << ','
                << fmt12(r.final_value.value.at(i, j)) << ',' << fmt12(t.stand_alone.at(i, j))
                << ',' << fmt12(t.merger_half.at(i, j)) << '\n';
    std::cout << "min_gap_merger " << fmt12(t.min_gap_merger) << "\nmin_gap_stand_alone "
              << fmt12(t.min_gap_stand_alone) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical solver for optimal dividend strategies of two collaborating "
                 "insurance companies"};
    app.require_subcommand(1);
    Cli cli;

    auto add_common = [&](CLI::App* sub, bool needs_spec = false) {
        sub->add_option("--config", cli.config_path, "run configuration file")->required();
        sub->add_option("--out", cli.out_dir, "output directory");
        sub->add_option("--threads", cli.threads, "worker thread cap (0 = hardware)");
        sub->add_option("--seed", cli.seed, "override the config seed (0 = keep)");
        sub->add_option("--v0-convention", cli.v0_convention,
                        "base-case weight pairing: payoff | paper");
        if (needs_spec)
            sub->add_option("--spec", cli.spec_path, "curve spec JSON file");
    };

    CLI::App* su = app.add_subcommand("solve-univariate", "single-company values and barriers");
    add_common(su);
    CLI::App* sm = app.add_subcommand("solve-merger", "merged-company value and barrier");
    add_common(sm);
    CLI::App* ec = app.add_subcommand("evaluate-curve", "fixed-point value of a curve spec");
    add_common(ec, true);
    ec->get_option("--spec")->required();
    CLI::App* it = app.add_subcommand("iterate", "full iterative pipeline");
    add_common(it);
    CLI::App* si = app.add_subcommand("simulate", "Monte Carlo estimates for a policy");
    add_common(si, true);
    si->add_option("--state", cli.states, "evaluation state x,y (repeatable)");
    CLI::App* ve = app.add_subcommand("verify", "invariant checks on the converged value");
    add_common(ve);
    CLI::App* co = app.add_subcommand("compare", "collaboration vs stand-alone vs half-merger");
    add_common(co);

    CLI11_PARSE(app, argc, argv);
    try {
        if (su->parsed()) return cmd_solve_univariate(cli);
        if (sm->parsed()) return cmd_solve_merger(cli);
        if (ec->parsed()) return cmd_evaluate_curve(cli);
        if (it->parsed()) return cmd_iterate(cli);
        if (si->parsed()) return cmd_simulate(cli);
        if (ve->parsed()) return cmd_verify(cli);
        if (co->parsed()) return cmd_compare(cli);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
