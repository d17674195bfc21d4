#include <catch_amalgamated.hpp>

#include <rlf/delay.hpp>
#include <rlf/error.hpp>
#include <rlf/mna.hpp>
#include <rlf/synth.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace rlf;

TEST_CASE("zero electrical length is reflectionless", "[delay]") {
    const auto lp = synth_lowpass(2.0 * std::numbers::pi * 3e9);
    const auto grid = FrequencyGrid::logarithmic(1e6, 1e12, 601);
    for (const Complex g : delay_reflection({lp, 50.0, 0.0, 1e9}, grid)) {
        REQUIRE(std::abs(g) < 1e-15);
    }
    const auto s = evaluate_netlist(build_lowpass_netlist(lp), grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        REQUIRE(std::abs(s.s(k, 0, 0)) < 1e-10);
    }
}

TEST_CASE("closed form matches the explicit-line netlist", "[delay]") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto grid = FrequencyGrid::logarithmic(1e8, 3e10, 97);
    int checked = 0;
    for (int i = 0; i < 200; ++i) {
        const double r = 20.0 + 80.0 * u(rng);
        const double wp = 2.0 * std::numbers::pi * (0.5e9 + 10e9 * u(rng));
        LowpassElements lp{wp, r / wp * (0.5 + u(rng)), 1.0 / (r * wp) * (0.5 + u(rng)), r};
        const DelayModelInput in{lp, 10.0 + 140.0 * u(rng), 1.2 * u(rng), 1e9 * (1.0 + 9.0 * u(rng))};
        ComplexSeries closed;
        try {
            closed = delay_reflection(in, grid);
        } catch (const SingularError&) {
            continue;
        }
        const auto s = evaluate_netlist(build_delayed_lowpass_netlist(in), grid);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            REQUIRE(std::abs(closed[k] - s.s(k, 0, 0)) < 1e-9);
        }
        ++checked;
    }
    CHECK(checked >= 190);
}

TEST_CASE("nonzero length reflects and poles are reported", "[delay]") {
    const auto lp = synth_lowpass(2.0 * std::numbers::pi * 3e9);
    const auto g = delay_reflection({lp, 50.0, 0.3, 3e9}, FrequencyGrid({3e9}));
    CHECK(std::abs(g[0]) > 1e-3);
    try {
        (void)delay_reflection({lp, 50.0, std::numbers::pi, 2e9}, FrequencyGrid({1.5e9, 2e9}));
        FAIL("expected SingularError");
    } catch (const SingularError& e) {
        CHECK(e.frequency_hz() == 2e9);
    }
    CHECK_THROWS_AS(delay_reflection({lp, -1.0, 0.1, 1e9}, FrequencyGrid({1e9})), InvalidArgument);
    CHECK_THROWS_AS(delay_reflection({lp, 50.0, -0.1, 1e9}, FrequencyGrid({1e9})), InvalidArgument);
}
