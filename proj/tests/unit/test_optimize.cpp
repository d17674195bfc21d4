#include <catch_amalgamated.hpp>

#include <rlf/error.hpp>
#include <rlf/metrics.hpp>
#include <rlf/mna.hpp>
#include <rlf/optimize.hpp>
#include <rlf/synth.hpp>

#include <algorithm>
#include <cmath>

using namespace rlf;
using Catch::Approx;

namespace {

const BandpassElements nominal = synth_bandpass(BandpassSpec::from_hz(4e9, 12e9));

FrequencyGrid tuning_grid() {
    const auto base = FrequencyGrid::logarithmic(1e9, 3e10, 81);
    std::vector<double> f(base.points().begin(), base.points().end());
    f.push_back(4e9);
    f.push_back(12e9);
    f.push_back(std::sqrt(48.0) * 1e9);
    std::sort(f.begin(), f.end());
    return FrequencyGrid(f);
}

std::vector<FreeParameter> groups(double lunit = 1e-9, double cunit = 1e-12) {
    return {{"Ls", {"Ls1", "Ls2", "Ls3", "Ls4"}, 0.3e-9 / lunit, 3e-9 / lunit, lunit},
            {"Lx", {"Lx1", "Lx2", "Lx3", "Lx4"}, 0.3e-9 / lunit, 3e-9 / lunit, lunit},
            {"Cs", {"Cs1", "Cs2", "Cs3", "Cs4"}, 0.1e-12 / cunit, 1.5e-12 / cunit, cunit},
            {"Cx", {"Cx1", "Cx2", "Cx3", "Cx4"}, 0.1e-12 / cunit, 1.5e-12 / cunit, cunit}};
}

std::vector<Target> reflectionless_targets() {
    return {{{1e9, 3e10}, Quantity::S11_db, -40.0, 1.0, Sense::AtMost},
            {{4e9 * (1 - 1e-9), 4e9 * (1 + 1e-9)}, Quantity::S21_db, -80.0, 1.0, Sense::AtMost},
            {{12e9 * (1 - 1e-9), 12e9 * (1 + 1e-9)}, Quantity::S21_db, -80.0, 1.0, Sense::AtMost},
            {{6.9e9, 6.95e9}, Quantity::S21_db, -0.5, 1.0, Sense::AtLeast}};
}

OptimizationProblem bandpass_problem(double lunit = 1e-9, double cunit = 1e-12) {
    return {build_bandpass_netlist(nominal), groups(lunit, cunit), reflectionless_targets(), tuning_grid()};
}

std::vector<double> nominal_point(double lunit = 1e-9, double cunit = 1e-12) {
    return {nominal.L_s / lunit, nominal.L_x / lunit, nominal.C_s / cunit, nominal.C_x / cunit};
}

Netlist attenuator_with_tail() {
    const double k = std::pow(10.0, 6.0 / 20.0);
    Netlist n;
    n.add_port("p1").add_port("p2");
    n.add_resistor("Rs1", "p1", "gnd", 50.0 * (k + 1) / (k - 1));
    n.add_resistor("Rser", "p1", "m", 50.0 * (k * k - 1) / (2 * k));
    n.add_resistor("Rs2", "m", "gnd", 50.0 * (k + 1) / (k - 1));
    n.add_inductor("Lt", "m", "p2", 1e-10);
    return n;
}

}  // namespace

TEST_CASE("residuals vanish for a met target and equal the gap for equalities", "[optimize]") {
    const auto problem = bandpass_problem();
    for (double r : residuals(nominal_point(), problem)) {
        REQUIRE(r == 0.0);
    }

    OptimizationProblem att{attenuator_with_tail(), {{"Lt", {"Lt"}, 0.01, 10.0, 1e-10}},
                            {{{1e6, 1.1e6}, Quantity::S21_db, 0.0, 2.0, Sense::Equal}}, FrequencyGrid({1e6})};
    const auto r = residuals({1.0}, att);
    REQUIRE(r.size() == 1);
    CHECK(r[0] == Approx(-12.0).margin(1e-6));
}

TEST_CASE("jacobian matches a central-difference oracle", "[optimize]") {
    const auto problem = bandpass_problem();
    const std::vector<double> p = {1.1, 1.5, 0.45, 0.6};
    const auto jac = log_jacobian(p, problem);
    REQUIRE(jac.size() == 4);
    for (std::size_t c = 0; c < 4; ++c) {
        auto up = p, dn = p;
        const double h = 1e-5;
        up[c] *= std::exp(h);
        dn[c] *= std::exp(-h);
        const auto ru = residuals(up, problem);
        const auto rd = residuals(dn, problem);
        for (std::size_t i = 0; i < ru.size(); ++i) {
            const double oracle = (ru[i] - rd[i]) / (2 * h);
            REQUIRE(std::abs(jac[c][i] - oracle) <= 1e-4 * std::max(1.0, std::abs(oracle)));
        }
    }
}

TEST_CASE("detuned band-pass is recovered", "[optimize]") {
    const auto problem = bandpass_problem();
    SolverConfig cfg;
    cfg.max_iterations = 200;
    for (double x : nominal_point()) {
        cfg.initial.push_back(1.15 * x);
    }
    const auto result = solve(problem, cfg);
    const auto truth = nominal_point();
    for (std::size_t i = 0; i < truth.size(); ++i) {
        CHECK(std::abs(result.p[i] / truth[i] - 1.0) < 0.02);
        CHECK(result.p[i] >= problem.parameters[i].lower);
        CHECK(result.p[i] <= problem.parameters[i].upper);
    }
    const auto s = evaluate_netlist(problem.apply(result.p), FrequencyGrid::logarithmic(4.8e9, 10e9, 101));
    double worst = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        worst = std::max(worst, std::abs(s.s(k, 0, 0)));
    }
    CHECK(to_db(worst) <= -30.0);
    for (std::size_t i = 1; i < result.trace.size(); ++i) {
        REQUIRE(result.trace[i] <= result.trace[i - 1]);
    }
    CHECK(result.trace.size() == result.iterations + 1);

    SolverConfig par = cfg;
    par.parallelism = Parallelism{3};
    const auto again = solve(problem, par);
    CHECK(again.p == result.p);
    CHECK(again.trace == result.trace);

    // same physics expressed in henries and farads
    const auto si = bandpass_problem(1.0, 1.0);
    SolverConfig si_cfg = cfg;
    si_cfg.initial.clear();
    for (double x : nominal_point(1.0, 1.0)) {
        si_cfg.initial.push_back(1.15 * x);
    }
    const auto si_result = solve(si, si_cfg);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double unit = i < 2 ? 1e-9 : 1e-12;
        CHECK(si_result.p[i] / unit == Approx(result.p[i]).epsilon(1e-3));
    }

    // reordering targets permutes residuals but not the optimum
    auto reordered = problem;
    std::reverse(reordered.targets.begin(), reordered.targets.end());
    const auto swapped = solve(reordered, cfg);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        CHECK(swapped.p[i] == Approx(result.p[i]).epsilon(1e-3));
    }
}

TEST_CASE("an optimal start stays put", "[optimize]") {
    const auto problem = bandpass_problem();
    SolverConfig cfg;
    cfg.initial = nominal_point();
    const auto r = solve(problem, cfg);
    CHECK(r.iterations <= 2);
    for (std::size_t i = 0; i < r.p.size(); ++i) {
        CHECK(r.p[i] == Approx(cfg.initial[i]).epsilon(1e-14));
    }
    CHECK(r.converged);
    CHECK(r.targets_met);
    CHECK(r.status == SolveStatus::Converged);
}

TEST_CASE("infeasible targets are never reported as met", "[optimize]") {
    OptimizationProblem att{attenuator_with_tail(), {{"Lt", {"Lt"}, 0.01, 10.0, 1e-10}},
                            {{{1e8, 1e9}, Quantity::S21_db, 0.0, 1.0, Sense::AtLeast}},
                            FrequencyGrid::linear(1e8, 1e9, 5)};
    SolverConfig cfg;
    cfg.max_iterations = 50;
    const auto r = solve(att, cfg);
    CHECK_FALSE(r.targets_met);
    CHECK(r.max_residual > 5.9);
    CHECK(r.p[0] >= 0.01);
    CHECK(r.p[0] <= 10.0);
}

TEST_CASE("problem validation", "[optimize]") {
    auto p = bandpass_problem();
    p.parameters[0].elements.push_back("Lnope");
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p = bandpass_problem();
    p.parameters[0].lower = -1.0;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p = bandpass_problem();
    p.parameters[0].upper = p.parameters[0].lower;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p = bandpass_problem();
    p.targets.clear();
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p = bandpass_problem();
    SolverConfig cfg;
    cfg.initial = {100.0, 1.0, 1.0, 1.0};
    CHECK_THROWS_AS(solve(p, cfg), InvalidArgument);
    CHECK(std::string(to_string(Sense::AtMost)) == "<=");
    CHECK(std::string(to_string(Quantity::S21_db)) == "S21_db");
}

TEST_CASE("seeded restarts are deterministic", "[optimize]") {
    const auto problem = bandpass_problem();
    SolverConfig cfg;
    cfg.max_iterations = 30;
    cfg.restarts = 2;
    cfg.seed = 9;
    for (double x : nominal_point()) {
        cfg.initial.push_back(0.9 * x);
    }
    const auto a = solve(problem, cfg);
    const auto b = solve(problem, cfg);
    CHECK(a.p == b.p);
    SolverConfig single = cfg;
    single.restarts = 0;
    CHECK(a.objective <= solve(problem, single).objective);
}
