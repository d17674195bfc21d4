#include <catch_amalgamated.hpp>

#include <rlf/error.hpp>
#include <rlf/metrics.hpp>
#include <rlf/mna.hpp>
#include <rlf/synth.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace rlf;
using Catch::Approx;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

}  // namespace

TEST_CASE("band-pass element values for the 4 / 12 GHz design", "[synth]") {
    const auto e = synth_bandpass(BandpassSpec::from_hz(4e9, 12e9));
    CHECK(e.omega_s == Approx(two_pi * 8e9).epsilon(1e-15));
    CHECK(e.omega_x == Approx(two_pi * 6e9).epsilon(1e-15));
    CHECK(e.L_s * 1e9 == Approx(0.9947).margin(1e-4));
    CHECK(e.C_s * 1e12 == Approx(0.3979).margin(1e-4));
    CHECK(e.L_x * 1e9 == Approx(1.3263).margin(1e-4));
    CHECK(e.C_x * 1e12 == Approx(0.5305).margin(1e-4));
    CHECK(e.R == 50.0);
}

TEST_CASE("band-pass defining equations hold for random specs", "[synth]") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double w1 = two_pi * (1e8 + 1e10 * u(rng));
        const double w2 = w1 * (1.05 + 5.0 * u(rng));
        const double z0 = 10.0 + 100.0 * u(rng);
        const auto e = synth_bandpass({w1, w2, z0});
        CHECK(e.omega_s == Approx(w2 - w1).epsilon(1e-15));
        CHECK(e.omega_x == Approx(w2 * w1 / (w2 - w1)).epsilon(1e-15));
        CHECK(e.L_s == Approx(z0 / e.omega_s).epsilon(1e-15));
        CHECK(e.L_x == Approx(z0 / e.omega_x).epsilon(1e-15));
        CHECK(e.C_s == Approx(1.0 / (z0 * e.omega_s)).epsilon(1e-15));
        CHECK(e.C_x == Approx(1.0 / (z0 * e.omega_x)).epsilon(1e-15));
        CHECK(std::abs(e.L_s * e.C_s * e.omega_s * e.omega_s - 1.0) < 1e-12);
        CHECK(std::abs(e.L_x * e.C_x * e.omega_x * e.omega_x - 1.0) < 1e-12);
    }
}

TEST_CASE("degenerate specs are rejected", "[synth]") {
    CHECK_THROWS_AS(synth_bandpass({1e9, 1e9, 50.0}), InvalidArgument);
    CHECK_THROWS_AS(synth_bandpass({2e9, 1e9, 50.0}), InvalidArgument);
    CHECK_THROWS_AS(synth_bandpass({1e9, 2e9, 0.0}), InvalidArgument);
    CHECK_THROWS_AS(synth_lowpass(-1.0), InvalidArgument);
}

TEST_CASE("band-pass netlist census and response", "[synth]") {
    const auto e = synth_bandpass(BandpassSpec::from_hz(4e9, 12e9));
    const auto n = build_bandpass_netlist(e);
    CHECK(n.count_of_inductors() == 8);
    CHECK(n.count_of_capacitors() == 8);
    CHECK(n.count_of_resistors() == 2);
    for (const auto& el : n.elements()) {
        if (el.is<Resistor>()) {
            CHECK(el.as<Resistor>().ohms == 50.0);
        }
        if (el.is<Inductor>()) {
            CHECK(el.as<Inductor>().winding_sign == 1);
        }
    }
    CHECK(n.ports().size() == 2);

    const auto grid = FrequencyGrid::logarithmic(1e8, 3e10, 1001);
    const auto s = evaluate_netlist(n, grid);
    double worst = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        worst = std::max({worst, std::abs(s.s(k, 0, 0)), std::abs(s.s(k, 1, 1))});
    }
    CHECK(worst < 1e-10);
    const auto zeros = evaluate_netlist(n, FrequencyGrid({4e9, 12e9}));
    CHECK(std::abs(zeros.s(0, 1, 0)) < 1e-6);
    CHECK(std::abs(zeros.s(1, 1, 0)) < 1e-6);
    const auto center = evaluate_netlist(n, FrequencyGrid({std::sqrt(4e9 * 12e9)}));
    CHECK(std::abs(to_db(center.s(0, 1, 0))) < 0.01);
}

TEST_CASE("band-pass stays reflectionless for random specs", "[synth]") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        const double f1 = 1e8 + 1e10 * u(rng);
        const double f2 = f1 * (1.2 + 4.0 * u(rng));
        const auto e = synth_bandpass(BandpassSpec::from_hz(f1, f2, 20.0 + 80.0 * u(rng)));
        const auto n = build_bandpass_netlist(e);
        const auto s = evaluate_netlist(n, FrequencyGrid::logarithmic(f1 / 20.0, f2 * 5.0, 301));
        for (std::size_t k = 0; k < s.size(); ++k) {
            REQUIRE(std::abs(s.s(k, 0, 0)) < 1e-8);
        }
        const auto z = evaluate_netlist(n, FrequencyGrid({f1, f2}));
        CHECK(std::abs(z.s(0, 1, 0)) < 1e-6);
        CHECK(std::abs(z.s(1, 1, 0)) < 1e-6);
    }
}

TEST_CASE("low-pass prototype", "[synth]") {
    const double wp = two_pi * 2e9;
    const auto e = synth_lowpass(wp);
    CHECK(e.L == e.R / wp);
    CHECK(e.C == 1.0 / (e.R * wp));
    const auto n = build_lowpass_netlist(e);
    const auto grid = FrequencyGrid::logarithmic(1e6, 1e11, 401);
    const auto s = evaluate_netlist(n, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        REQUIRE(std::abs(s.s(k, 0, 0)) < 1e-10);
        const double x = grid.omega(k) / wp;
        REQUIRE(std::abs(std::abs(s.s(k, 1, 0)) - 1.0 / std::sqrt(1.0 + x * x)) < 1e-10);
    }
    CHECK(std::abs(s.s(0, 1, 0)) == Approx(1.0).margin(1e-6));
    const auto at = evaluate_netlist(n, FrequencyGrid({2e9}));
    CHECK(std::abs(std::abs(at.s(0, 1, 0)) - 1.0 / std::sqrt(2.0)) < 1e-6);
}

TEST_CASE("dual elements", "[synth]") {
    const auto c = dual_element({ReactiveKind::Inductor, 2.5e-9});
    CHECK(c.kind == ReactiveKind::Capacitor);
    CHECK(c.value == Approx(1e-12).epsilon(1e-14));
    const auto back = dual_element(c);
    CHECK(back.kind == ReactiveKind::Inductor);
    CHECK(back.value == Approx(2.5e-9).epsilon(1e-15));
    CHECK_THROWS_AS(dual_element({ReactiveKind::Capacitor, 0.0}), InvalidArgument);

    // shunt one-port reflections of an element and its dual are negatives
    const auto grid = FrequencyGrid::logarithmic(1e8, 1e11, 31);
    for (const ReactiveElement el : {ReactiveElement{ReactiveKind::Inductor, 3e-9}, ReactiveElement{ReactiveKind::Capacitor, 0.7e-12}}) {
        const auto d = dual_element(el);
        auto one = [&](const ReactiveElement& x) {
            Netlist n;
            n.add_port("a");
            if (x.kind == ReactiveKind::Inductor) {
                n.add_inductor("X", "a", "gnd", x.value);
            } else {
                n.add_capacitor("X", "a", "gnd", x.value);
            }
            return evaluate_netlist(n, grid);
        };
        const auto g0 = one(el);
        const auto g1 = one(d);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double w = grid.omega(k);
            const Complex z = el.kind == ReactiveKind::Inductor ? Complex(0.0, w * el.value) : 1.0 / Complex(0.0, w * el.value);
            const Complex zd = d.kind == ReactiveKind::Inductor ? Complex(0.0, w * d.value) : 1.0 / Complex(0.0, w * d.value);
            REQUIRE(std::abs(z * zd - 2500.0) < 1e-9);
            REQUIRE(std::abs(g0.s(k, 0, 0) + g1.s(k, 0, 0)) < 1e-12);
        }
    }
}

TEST_CASE("resistor noise transfer", "[synth]") {
    const auto n = build_bandpass_netlist(synth_bandpass(BandpassSpec::from_hz(4e9, 12e9)));
    const auto grid = FrequencyGrid::logarithmic(1e8, 1e11, 601);
    const auto t = resistor_noise_transfer(n, grid);
    REQUIRE(t.ports() == 4);
    CHECK(t.z0(2) == 50.0);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        for (std::size_t r = 2; r < 4; ++r) {
            double total = 0.0;
            for (std::size_t p = 0; p < 4; ++p) {
                total += std::norm(t.s(k, p, r));
            }
            REQUIRE(total <= 1.0 + 1e-9);
        }
    }
    double pass_min = 1e9, stop_plateau = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double db = to_db(t.s(k, 0, 2));
        if (grid[k] > 5e9 && grid[k] < 9.5e9) {
            pass_min = std::min(pass_min, db);
        }
        if (grid[k] < 1e9) {
            stop_plateau = std::max(stop_plateau == 0.0 ? -1e9 : stop_plateau, db);
        }
    }
    CHECK(pass_min < stop_plateau - 20.0);

    Netlist no_r;
    no_r.add_port("a");
    no_r.add_inductor("L", "a", "gnd", 1e-9);
    CHECK_THROWS_AS(resistor_noise_transfer(no_r, grid), InvalidArgument);
}
