/// Command-line driver: scenario validation, quasistatic runs, the
/// exhaustive-vs-greedy oracle check, grid-refinement convergence studies and
/// the Riemann-sum subdivision demo.

#include "griffith/scenario.hpp"
#include "griffith/trace_io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

using namespace griffith;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;
constexpr int kExitAudit = 3;

std::function<double(double)> named_function(const std::string& name) {
    if (name == "linear") return [](double t) { return t; };
    if (name == "square") return [](double t) { return t * t; };
    if (name == "sin") return [](double t) { return std::sin(3.0 * t); };
    if (name == "kink") return [](double t) { return std::abs(t - 1.0 / 3.0); };
    if (name == "step") return [](double t) { return t < 1.0 / std::acos(-1.0) ? 1.0 : 0.0; };
    throw std::runtime_error("unknown function '" + name +
                             "' (use linear|square|sin|kink|step)");
}

int cmd_validate(const std::string& path) {
    Scenario s = load_scenario_file(path);
    Simulation sim = build_simulation(s);
    auto violations = validate_partition(sim.mesh);
    std::cout << "mesh: dim " << sim.mesh.dim << ", " << sim.mesh.n_vertices() << " vertices, "
              << sim.mesh.n_elements() << " elements, " << sim.mesh.n_facets() << " facets\n";
    std::cout << "brittle facets:";
    for (int f : sim.mesh.brittle_facet_ids()) std::cout << " " << f;
    std::cout << "\nsurface facets:";
    for (int f : sim.mesh.surface_facet_ids()) std::cout << " " << f;
    std::cout << "\ndirichlet nodes:";
    for (int v : sim.boundary.nodes) std::cout << " " << v;
    std::cout << "\ntime grid: " << sim.grid.steps() << " steps, max step "
              << sim.grid.max_step() << "\n";
    if (violations.empty()) {
        std::cout << "partition: ok\n";
        return kExitOk;
    }
    for (const auto& v : violations) std::cout << "violation: " << v << "\n";
    return kExitAudit;
}

int cmd_run(const std::string& path, const std::string& outdir) {
    Scenario s = load_scenario_file(path);
    Simulation sim = build_simulation(s);
    Problem prob = sim.problem();
    EvolutionTrace trace =
        run_evolution(prob, sim.grid, sim.gamma0, sim.u0 ? &*sim.u0 : nullptr);
    AuditReport audit = energy_audit(prob, sim.grid, trace);

    std::filesystem::create_directories(outdir);
    write_trace(trace, outdir + "/trace");
    write_trace(audit, outdir + "/audit");

    for (const auto& w : trace.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "steps: " << trace.steps.size() - 1 << "\n";
    std::cout << "final crack facets:";
    for (int f : trace.steps.back().crack.facet_list()) std::cout << " " << f;
    std::cout << "\nfinal total energy: " << trace.steps.back().energy.total << "\n";
    std::cout << "balance defect: " << audit.balance_defect << "\n";
    std::cout << "min competitor gap: " << audit.min_competitor_gap << "\n";

    if (audit.certified && audit.min_competitor_gap < -1e-12) {
        std::cerr << "audit: minimality violated on an oracle-certified run\n";
        return kExitAudit;
    }
    if (!audit.certified && audit.min_competitor_gap < -1e-12)
        std::cerr << "warning: minimality gap on a greedy run (not a certified failure)\n";
    return kExitOk;
}

int cmd_oracle_check(const std::string& path) {
    Scenario s = load_scenario_file(path);
    Simulation sim = build_simulation(s);
    Problem exhaustive = sim.problem();
    exhaustive.settings.strategy = SolveSettings::Strategy::exhaustive;
    Problem greedy = sim.problem();
    greedy.settings.strategy = SolveSettings::Strategy::greedy;

    EvolutionTrace te = run_evolution(exhaustive, sim.grid, sim.gamma0);
    EvolutionTrace tg = run_evolution(greedy, sim.grid, sim.gamma0);
    double max_gap = 0.0;
    bool cracks_match = true;
    std::cout << "step,time,exhaustive_total,greedy_total,gap\n";
    for (std::size_t i = 0; i < te.steps.size(); ++i) {
        double ge = te.steps[i].energy.total, gg = tg.steps[i].energy.total;
        std::cout << i << "," << te.steps[i].time << "," << ge << "," << gg << "," << gg - ge
                  << "\n";
        max_gap = std::max(max_gap, gg - ge);
        cracks_match = cracks_match && te.steps[i].crack == tg.steps[i].crack;
        if (gg < ge - 1e-9) {
            std::cerr << "greedy beat the exhaustive oracle: broken enumeration\n";
            return kExitAudit;
        }
    }
    std::cout << "max energy gap (greedy - exhaustive): " << max_gap << "\n";
    std::cout << "crack sequences " << (cracks_match ? "identical" : "differ") << "\n";
    return kExitOk;
}

int cmd_converge(const std::string& path, int refinements, const std::vector<double>& probes,
                 const std::string& out) {
    Scenario s = load_scenario_file(path);
    Simulation sim = build_simulation(s);
    Problem prob = sim.problem();
    std::vector<double> probe_times = probes;
    if (probe_times.empty()) probe_times = default_probe_times(prob, sim.grid, sim.gamma0);
    ConvergenceReport rep =
        convergence_study(prob, sim.grid, refinements, probe_times, sim.gamma0);
    std::string csv = convergence_to_csv(rep);
    if (out.empty())
        std::cout << csv;
    else
        write_file(out, csv);
    return kExitOk;
}

int cmd_riemann(const std::string& fname, const std::vector<int>& ms, int shifts,
                int oversample, const std::string& out) {
    auto f = named_function(fname);
    std::ostringstream os;
    os << "griffith-riemann-csv v1\n";
    os << "m,best_shift,strong_defect\n";
    for (int m : ms) {
        ShiftSearchResult r = best_shift(f, m, 0.0, 1.0, shifts, oversample);
        os << m << "," << r.best_shift << "," << r.strong_defect << "\n";
    }
    if (out.empty())
        std::cout << os.str();
    else
        write_file(out, os.str());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quasistatic brittle-fracture evolution engine"};
    app.require_subcommand(1);

    std::string scenario_path, outdir = "out", outfile;
    int refinements = 3, shifts = 64, oversample = 10;
    std::vector<double> probes;
    std::vector<int> ms = {8, 16, 32, 64};
    std::string function_name = "step";

    CLI::App* validate = app.add_subcommand("validate", "parse a scenario and check the mesh");
    validate->add_option("scenario", scenario_path)->required();

    CLI::App* run = app.add_subcommand("run", "run the quasistatic evolution");
    run->add_option("scenario", scenario_path)->required();
    run->add_option("-o,--out", outdir, "output directory");

    CLI::App* oracle = app.add_subcommand("oracle-check", "exhaustive vs greedy on one scenario");
    oracle->add_option("scenario", scenario_path)->required();

    CLI::App* conv = app.add_subcommand("converge", "grid-refinement convergence study");
    conv->add_option("scenario", scenario_path)->required();
    conv->add_option("--refinements", refinements);
    conv->add_option("--probes", probes)->delimiter(',');
    conv->add_option("-o,--out", outfile);

    CLI::App* riemann = app.add_subcommand("riemann-demo", "shifted-grid Riemann sum defects");
    riemann->add_option("--function", function_name);
    riemann->add_option("--m-list", ms)->delimiter(',');
    riemann->add_option("--shifts", shifts);
    riemann->add_option("--oversample", oversample, "reference-quadrature density factor");
    riemann->add_option("-o,--out", outfile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (validate->parsed()) return cmd_validate(scenario_path);
        if (run->parsed()) return cmd_run(scenario_path, outdir);
        if (oracle->parsed()) return cmd_oracle_check(scenario_path);
        if (conv->parsed()) return cmd_converge(scenario_path, refinements, probes, outfile);
        if (riemann->parsed()) return cmd_riemann(function_name, ms, shifts, oversample, outfile);
    } catch (const ScenarioError& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const MeshError& e) {
        std::cerr << "mesh error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
