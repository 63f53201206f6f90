#include "griffith/time_signals.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace griffith;

TEST_CASE("trajectory evaluation and rates") {
    Trajectory ramp;
    ramp.knots = {0.0, 1.0};
    ramp.snapshots = {{0.0}, {1.0}};
    CHECK(ramp.eval(0.5)[0] == doctest::Approx(0.5));
    CHECK(ramp.rate(0.25)[0] == doctest::Approx(1.0));
    CHECK(ramp.rate(0.0)[0] == doctest::Approx(1.0)); // right-interval slope at a knot

    Trajectory flat = Trajectory::constant(2.0, {3.0});
    CHECK(flat.eval(1.7)[0] == 3.0);
    CHECK(flat.rate(0.3)[0] == 0.0);

    CHECK_THROWS(ramp.eval(1.5));
    CHECK_THROWS(ramp.eval(-0.5));
}

TEST_CASE("rate integrates back to the value difference for any knot layout") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> val(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        Trajectory tr;
        tr.knots = {0.0};
        int n = 2 + static_cast<int>(rng() % 5);
        for (int i = 1; i <= n; ++i) tr.knots.push_back(tr.knots.back() + 0.1 + 0.9 * (rng() % 100) / 100.0);
        for (std::size_t i = 0; i < tr.knots.size(); ++i) tr.snapshots.push_back({val(rng)});
        // exact telescoping over the knot intervals
        double integral = 0.0;
        for (std::size_t i = 0; i + 1 < tr.knots.size(); ++i)
            integral += tr.rate(tr.knots[i])[0] * (tr.knots[i + 1] - tr.knots[i]);
        CHECK(integral ==
              doctest::Approx(tr.snapshots.back()[0] - tr.snapshots.front()[0]).epsilon(1e-12));
    }
}

TEST_CASE("shifted grid subdivisions") {
    SUBCASE("m=4 s=0 on [0,1]") {
        Subdivision s = shifted_grid_subdivision(4, 0.0, 0.0, 1.0);
        REQUIRE(s.points.size() == 5);
        CHECK(s.points[1] == doctest::Approx(0.25));
        CHECK(s.points[3] == doctest::Approx(0.75));
    }
    SUBCASE("m=4 s=0.1 on [0,1] from the proof construction") {
        Subdivision s = shifted_grid_subdivision(4, 0.1, 0.0, 1.0);
        std::vector<double> expect = {0.0, 0.1, 0.35, 0.6, 0.85, 1.0};
        REQUIRE(s.points.size() == expect.size());
        for (std::size_t i = 0; i < expect.size(); ++i)
            CHECK(s.points[i] == doctest::Approx(expect[i]).epsilon(1e-12));
    }
    SUBCASE("max step never exceeds 2/m") {
        std::mt19937 rng(5);
        for (int trial = 0; trial < 100; ++trial) {
            int m = 1 + rng() % 40;
            double shift = (rng() % 1000) / 1000.0;
            Subdivision s = shifted_grid_subdivision(m, shift, 0.0, 1.0);
            CHECK(s.max_step() <= 2.0 / m + 1e-12);
        }
    }
}

TEST_CASE("Riemann defects on f(t) = t with uniform right tags") {
    Subdivision s = shifted_grid_subdivision(4, 0.0, 0.0, 1.0);
    auto f = [](double t) { return t; };
    RiemannDefect d = riemann_defect(f, s);
    // right-tagged sum: (1/4)(0.25 + 0.5 + 0.75 + 1) = 0.625
    CHECK(d.sum_error == doctest::Approx(0.125).epsilon(1e-10));
    CHECK(d.strong_defect == doctest::Approx(0.125).epsilon(1e-10));
}

TEST_CASE("constant integrand has no defect") {
    Subdivision s = shifted_grid_subdivision(7, 0.3, 0.0, 2.0);
    RiemannDefect d = riemann_defect([](double) { return 4.0; }, s);
    CHECK(d.sum_error == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(d.strong_defect == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("strong defect dominates the sum error") {
    std::mt19937 rng(29);
    auto f = [](double t) { return std::sin(5.0 * t) + 0.3 * t * t; };
    for (int trial = 0; trial < 50; ++trial) {
        int m = 2 + rng() % 30;
        double shift = (rng() % 1000) / 1000.0 / m;
        RiemannDefect d = riemann_defect(f, shifted_grid_subdivision(m, shift, 0.0, 1.0));
        CHECK(d.strong_defect >= d.sum_error - 1e-14);
    }
}

TEST_CASE("Lipschitz bound on the strong defect") {
    // |f(t_i) - f(t)| <= L |t_i - t| gives strong_defect <= L (b-a) maxstep
    auto f = [](double t) { return std::abs(t - 0.37); }; // L = 1
    for (int m : {4, 8, 16}) {
        Subdivision s = shifted_grid_subdivision(m, 0.123 / m, 0.0, 1.0);
        RiemannDefect d = riemann_defect(f, s, 50);
        CHECK(d.strong_defect <= 1.0 * 1.0 * s.max_step() + 1e-10);
    }
}

TEST_CASE("sampled-shift minimum of the strong defect decays on the battery") {
    std::vector<std::function<double(double)>> battery = {
        [](double t) { return std::sin(3.0 * t); },
        [](double t) { return std::abs(t - 1.0 / 3.0); },
        [](double t) { return t < 1.0 / std::acos(-1.0) ? 1.0 : 0.0; },
    };
    // the step function needs a reference oracle fine enough to resolve the
    // near-tag slivers the shift search produces
    const int oversample = 256;
    for (const auto& f : battery) {
        double d8 = best_shift(f, 8, 0.0, 1.0, 64, oversample).strong_defect;
        double d64 = best_shift(f, 64, 0.0, 1.0, 64, oversample).strong_defect;
        CHECK(d64 < d8);
    }
}

TEST_CASE("Monte-Carlo average over shifts decays like 1/m for a step function") {
    // the Fubini argument: averaging the defect over the shift gives O(1/m)
    auto f = [](double t) { return t < 0.37 ? 1.0 : 0.0; };
    std::mt19937 rng(41);
    auto avg_defect = [&](int m) {
        double sum = 0.0;
        const int n = 100;
        for (int i = 0; i < n; ++i) {
            double s = (rng() % 100000) / 100000.0 / m;
            sum += riemann_defect(f, shifted_grid_subdivision(m, s, 0.0, 1.0), 40).strong_defect;
        }
        return sum / n;
    };
    double a8 = avg_defect(8);
    double a32 = avg_defect(32);
    // O(1/m): quartering m should roughly quarter the average; allow slack
    CHECK(a32 < 0.5 * a8);
}

TEST_CASE("battery-weighted shift search uses the summable-norm score") {
    std::vector<std::function<double(double)>> battery = {
        [](double t) { return 1.0 + t; },
        [](double t) { return t < 0.5 ? 2.0 : 0.0; },
    };
    ShiftSearchResult r = best_shift_battery(battery, 16, 0.0, 1.0, 32);
    CHECK(r.strong_defect >= 0.0);
    CHECK(r.best_shift >= 0.0);
    CHECK(r.best_shift < 1.0 / 16.0 + 1e-12);
}
