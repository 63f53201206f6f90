#include "griffith/scenario.hpp"
#include "griffith/trace_io.hpp"

#include <doctest.h>

#include <clocale>
#include <cstdlib>

using namespace griffith;

namespace {

const char* kBarScenario = R"(griffith-scenario v1

[mesh]
dim = 1
interval = 0 1
segments = 5
dirichlet = left right
brittle_range = 1e-9 1

[bulk]
p = 2
a = 2

[toughness]
mode = isotropic
k = 1

[boundary]
knots = 0 2
psi = 0 0
psi = 0 2

[time]
T = 2
steps = 40

[settings]
strategy = exhaustive
allow_floating = true
)";

std::string replace_line(const std::string& text, const std::string& from,
                         const std::string& to) {
    std::string out = text;
    auto pos = out.find(from);
    REQUIRE(pos != std::string::npos);
    out.replace(pos, from.size(), to);
    return out;
}

} // namespace

TEST_CASE("minimal bar scenario parses and builds") {
    Scenario s = parse_scenario(kBarScenario);
    Simulation sim = build_simulation(s);
    CHECK(sim.mesh.n_elements() == 5);
    CHECK(sim.boundary.nodes.size() == 2);
    CHECK(sim.model.toughness.k[1] == 1.0);
    CHECK(sim.grid.steps() == 40);
    CHECK(sim.settings.elastic_tol == 1e-10); // defaulted from p = 2
    CHECK(sim.settings.allow_floating);
    CHECK(sim.mesh.brittle_facet_ids().size() == 5); // everything except x = 0
}

TEST_CASE("parse errors carry line numbers and cite the requirement") {
    SUBCASE("q = 1 violates the coercivity requirement") {
        std::string text = replace_line(kBarScenario, "[bulk]", "[body_force]\nq = 1\n\n[bulk]");
        try {
            parse_scenario(text);
            FAIL("expected ScenarioError");
        } catch (const ScenarioError& e) {
            CHECK(std::string(e.what()).find("q must be > 1") != std::string::npos);
            CHECK(e.line > 0);
        }
    }
    SUBCASE("brittle facet adjacent to a surface-force facet") {
        std::string text = replace_line(kBarScenario, "dirichlet = left right",
                                        "dirichlet = left\nsurface = right");
        try {
            parse_scenario(text);
            FAIL("expected ScenarioError");
        } catch (const ScenarioError& e) {
            CHECK(std::string(e.what()).find("surface-force facet") != std::string::npos);
        }
    }
    SUBCASE("unknown key") {
        std::string text = replace_line(kBarScenario, "p = 2", "p = 2\nwobble = 3");
        CHECK_THROWS_AS(parse_scenario(text), ScenarioError);
    }
    SUBCASE("non-increasing knots") {
        std::string text = replace_line(kBarScenario, "knots = 0 2", "knots = 0 0");
        CHECK_THROWS_AS(parse_scenario(text), ScenarioError);
    }
    SUBCASE("bulk exponent at the boundary of its range") {
        std::string text = replace_line(kBarScenario, "p = 2", "p = 1");
        CHECK_THROWS_AS(parse_scenario(text), ScenarioError);
    }
    SUBCASE("missing header") {
        CHECK_THROWS_AS(parse_scenario("[mesh]\ndim = 1\n"), ScenarioError);
    }
}

TEST_CASE("scenario writer round-trips") {
    Scenario s = parse_scenario(kBarScenario);
    std::string once = write_scenario(s);
    Scenario s2 = parse_scenario(once);
    std::string twice = write_scenario(s2);
    CHECK(once == twice);

    SUBCASE("anisotropic and loaded variants round-trip too") {
        Scenario a = s;
        a.anisotropic = true;
        a.A = {{1.0, 0.25, 4.0}};
        a.k.clear();
        a.f_knots = {0.0, 2.0};
        a.f_rows = {{0.125}, {-0.5}};
        a.eps = 0.75;
        a.q = 4.0;
        a.gamma0 = {2};
        std::string w1 = write_scenario(a);
        std::string w2 = write_scenario(parse_scenario(w1));
        CHECK(w1 == w2);
    }
}

TEST_CASE("trace CSV has the documented layout") {
    Scenario s = parse_scenario(kBarScenario);
    Simulation sim = build_simulation(s);
    Problem prob = sim.problem();
    EvolutionTrace tr = run_evolution(prob, sim.grid, sim.gamma0);
    std::string csv = trace_to_csv(tr);
    CHECK(csv.rfind("griffith-trace-csv v1\n", 0) == 0);
    CHECK(csv.find("step,time,crack_facets,bulk,crack") != std::string::npos);
    // the nucleation row carries one facet and total energy k_c = 1
    bool nucleation_row = csv.find(",1,") != std::string::npos;
    CHECK(nucleation_row);
    std::size_t rows = 0;
    for (char c : csv)
        if (c == '\n') ++rows;
    CHECK(rows == 2 + tr.steps.size());
}

TEST_CASE("JSON trace round-trips bit-exactly") {
    Scenario s = parse_scenario(kBarScenario);
    Simulation sim = build_simulation(s);
    Problem prob = sim.problem();
    EvolutionTrace tr = run_evolution(prob, TimeGrid::uniform(2.0, 12), sim.gamma0);
    std::string json = trace_to_json(tr);
    EvolutionTrace back = trace_from_json(json, sim.mesh);
    REQUIRE(back.steps.size() == tr.steps.size());
    for (std::size_t i = 0; i < tr.steps.size(); ++i) {
        CHECK(back.steps[i].time == tr.steps[i].time);
        CHECK(back.steps[i].energy.total == tr.steps[i].energy.total);
        CHECK(back.steps[i].theta == tr.steps[i].theta);
        CHECK(back.steps[i].cumulative_work == tr.steps[i].cumulative_work);
        CHECK(back.steps[i].competitor_gap == tr.steps[i].competitor_gap);
        CHECK(back.steps[i].euler_residual == tr.steps[i].euler_residual);
        CHECK(back.steps[i].crack == tr.steps[i].crack);
        REQUIRE(back.steps[i].u_values.size() == tr.steps[i].u_values.size());
        for (std::size_t k = 0; k < tr.steps[i].u_values.size(); ++k)
            CHECK(back.steps[i].u_values[k] == tr.steps[i].u_values[k]);
    }
    CHECK(trace_to_json(back) == json);
}

TEST_CASE("explicit time points and shifted grids build correctly") {
    SUBCASE("points") {
        std::string text = replace_line(kBarScenario, "steps = 40", "points = 0 0.5 1.25 2");
        Simulation sim = build_simulation(parse_scenario(text));
        CHECK(sim.grid.points.size() == 4);
        CHECK(sim.grid.points[2] == 1.25);
    }
    SUBCASE("shifted grid from the Riemann lemma construction") {
        std::string text = replace_line(kBarScenario, "steps = 40", "shifted = 4 0.1");
        Simulation sim = build_simulation(parse_scenario(text));
        REQUIRE(sim.grid.points.size() == 10); // {0, .1, .35, .6, .85, 1.1, 1.35, 1.6, 1.85, 2}
        CHECK(sim.grid.points[1] == doctest::Approx(0.1));
    }
    SUBCASE("initial crack from facet ids") {
        std::string text = replace_line(kBarScenario, "[time]", "[initial]\ngamma0 = 2\n\n[time]");
        Simulation sim = build_simulation(parse_scenario(text));
        CHECK(sim.gamma0.count == 1);
        CHECK(sim.gamma0.contains(2));
    }
    SUBCASE("gamma0 must be brittle") {
        std::string text = replace_line(kBarScenario, "[time]", "[initial]\ngamma0 = 0\n\n[time]");
        CHECK_THROWS_AS(parse_scenario(text), ScenarioError);
    }
}

TEST_CASE("u0 rows build an admissible initial deformation") {
    std::string text = replace_line(kBarScenario, "[time]",
                                    "[initial]\ngamma0 = 3\n"
                                    "u0 = 0 0\nu0 = 0 0\nu0 = 0 0\nu0 = 0 1\nu0 = 1 1\n\n[time]");
    // facet 3 sits between elements 2 and 3: a jump there is representable
    Simulation sim = build_simulation(parse_scenario(text));
    REQUIRE(sim.u0.has_value());
    CHECK(jump(*sim.u0, 3) == doctest::Approx(0.0)); // 0 -> 0 at the split vertex
    SUBCASE("a jump across an uncracked facet is rejected") {
        std::string bad = replace_line(kBarScenario, "[time]",
                                       "[initial]\n"
                                       "u0 = 0 0\nu0 = 0 0\nu0 = 0 1\nu0 = 2 1\nu0 = 1 1\n\n[time]");
        CHECK_THROWS_AS(parse_scenario(bad), ScenarioError);
    }
}

TEST_CASE("number formats are locale independent") {
    // if a comma-decimal locale exists, switching to it must change nothing
    const char* old = std::setlocale(LC_ALL, nullptr);
    std::string saved = old ? old : "C";
    bool have_locale = std::setlocale(LC_ALL, "de_DE.UTF-8") != nullptr;
    Scenario s = parse_scenario(kBarScenario);
    CHECK(s.time.T == 2.0);
    CHECK(s.stiffness[0] == 2.0);
    std::string w = write_scenario(s);
    CHECK(w.find("T = 2") != std::string::npos);
    CHECK(w.find(',') == std::string::npos);
    std::setlocale(LC_ALL, saved.c_str());
    (void)have_locale;
}

TEST_CASE("trace writers hit the filesystem and reject bad paths") {
    Scenario s = parse_scenario(kBarScenario);
    Simulation sim = build_simulation(s);
    EvolutionTrace tr = run_evolution(sim.problem(), TimeGrid::uniform(2.0, 4), sim.gamma0);
    std::string base = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
                       "/griffith_trace_test";
    write_trace(tr, base);
    EvolutionTrace back = trace_from_json(read_file(base + ".json"), sim.mesh);
    CHECK(back.steps.size() == tr.steps.size());
    CHECK(read_file(base + ".csv").rfind("griffith-trace-csv v1\n", 0) == 0);
    CHECK_THROWS(write_file("/nonexistent-dir-xyz/trace.csv", "x"));
}
