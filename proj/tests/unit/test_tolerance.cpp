#include <catch_amalgamated.hpp>

#include <rlf/error.hpp>
#include <rlf/synth.hpp>
#include <rlf/tolerance.hpp>

#include <cmath>

using namespace rlf;
using Catch::Approx;

namespace {

Netlist bandpass() { return build_bandpass_netlist(synth_bandpass(BandpassSpec::from_hz(4e9, 12e9))); }

}  // namespace

TEST_CASE("zero tolerance reproduces the nominal response", "[tolerance]") {
    const auto grid = FrequencyGrid::logarithmic(1e9, 3e10, 61);
    const auto s = tolerance_mc(bandpass(), ToleranceSpec::common(0.0, 20), grid);
    CHECK(s.trials == 20);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        for (std::size_t q = 0; q < 3; ++q) {
            REQUIRE(s.s11_quantiles[q][k] == s.s11_nominal[k]);
            REQUIRE(s.s21_quantiles[q][k] == s.s21_nominal[k]);
        }
        REQUIRE(s.s11_max[k] == s.s11_nominal[k]);
        REQUIRE(s.s21_min[k] == s.s21_nominal[k]);
    }
}

TEST_CASE("seeded runs are bit-identical for any thread count", "[tolerance]") {
    const auto grid = FrequencyGrid::logarithmic(1e9, 3e10, 41);
    ToleranceSpec spec = ToleranceSpec::common(0.1, 64, 77);
    spec.independent_fraction = 0.02;
    spec.resistor_fraction = 0.01;
    const auto a = tolerance_mc(bandpass(), spec, grid, Parallelism{1});
    const auto b = tolerance_mc(bandpass(), spec, grid, Parallelism{3});
    CHECK(a.s11_quantiles == b.s11_quantiles);
    CHECK(a.s21_quantiles == b.s21_quantiles);
    CHECK(a.s11_max == b.s11_max);
    spec.seed = 78;
    const auto c = tolerance_mc(bandpass(), spec, grid, Parallelism{1});
    CHECK(c.s11_max != a.s11_max);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        REQUIRE(a.s11_quantiles[0][k] <= a.s11_quantiles[1][k]);
        REQUIRE(a.s11_quantiles[1][k] <= a.s11_quantiles[2][k]);
        REQUIRE(a.s11_quantiles[2][k] <= a.s11_max[k]);
        REQUIRE(a.s21_min[k] <= a.s21_quantiles[0][k]);
    }
}

TEST_CASE("common factors scale every inductor and capacitor together", "[tolerance]") {
    const auto nominal = bandpass();
    ToleranceSpec spec;
    spec.common_inductor_fraction = 0.1;
    spec.common_capacitor_fraction = 0.05;
    const auto p = perturb_netlist(nominal, spec, 3);
    double fl = 0.0, fc = 0.0;
    for (std::size_t i = 0; i < nominal.elements().size(); ++i) {
        const auto& a = nominal.elements()[i];
        const auto& b = p.elements()[i];
        if (a.is<Inductor>()) {
            const double f = b.as<Inductor>().henries / a.as<Inductor>().henries;
            if (fl == 0.0) fl = f;
            REQUIRE(f == Approx(fl).epsilon(1e-14));
        } else if (a.is<Capacitor>()) {
            const double f = b.as<Capacitor>().farads / a.as<Capacitor>().farads;
            if (fc == 0.0) fc = f;
            REQUIRE(f == Approx(fc).epsilon(1e-14));
        } else if (a.is<Resistor>()) {
            REQUIRE(b.as<Resistor>().ohms == a.as<Resistor>().ohms);
        }
    }
    CHECK(std::abs(fl - 1.0) <= 0.1);
    CHECK(std::abs(fc - 1.0) <= 0.05);
    CHECK(fl != 1.0);
    const auto again = perturb_netlist(nominal, spec, 3);
    CHECK(again.at("Ls1").as<Inductor>().henries == p.at("Ls1").as<Inductor>().henries);
}

TEST_CASE("common-mode spread degrades in-band return loss", "[tolerance]") {
    const auto grid = FrequencyGrid::logarithmic(1e8, 3e10, 401);
    const auto s = tolerance_mc(bandpass(), ToleranceSpec::common(0.1, 200, 5), grid);
    const double rl = s.worst_return_loss_db({4.8e9, 10e9});
    CHECK(rl > 10.0);
    CHECK(rl < 40.0);
}

TEST_CASE("spec validation and quantiles", "[tolerance]") {
    CHECK_THROWS_AS(ToleranceSpec::common(0.5).validate(), InvalidArgument);
    CHECK_THROWS_AS(ToleranceSpec::common(-0.1).validate(), InvalidArgument);
    CHECK_THROWS_AS(ToleranceSpec::common(0.1, 0).validate(), InvalidArgument);
    CHECK_NOTHROW(ToleranceSpec::common(0.49).validate());

    const std::vector<double> v = {1.0, 2.0, 3.0, 4.0, 5.0};
    CHECK(sorted_quantile(v, 0.0) == 1.0);
    CHECK(sorted_quantile(v, 1.0) == 5.0);
    CHECK(sorted_quantile(v, 0.5) == 3.0);
    CHECK(sorted_quantile(v, 0.05) == Approx(1.2));
    CHECK(sorted_quantile({7.0}, 0.95) == 7.0);
}
