#include <catch_amalgamated.hpp>

#include <rlf/error.hpp>
#include <rlf/grid.hpp>
#include <rlf/netlist.hpp>
#include <rlf/network.hpp>

#include <cmath>
#include <limits>

using namespace rlf;
using Catch::Approx;

TEST_CASE("grid rejects empty, non-positive and unordered points", "[grid]") {
    CHECK_THROWS_AS(FrequencyGrid({}), InvalidArgument);
    CHECK_THROWS_AS(FrequencyGrid({0.0, 1.0}), InvalidArgument);
    CHECK_THROWS_AS(FrequencyGrid({-1.0}), InvalidArgument);
    CHECK_THROWS_AS(FrequencyGrid({2.0, 1.0}), InvalidArgument);
    CHECK_THROWS_AS(FrequencyGrid({1.0, 1.0}), InvalidArgument);
    CHECK_THROWS_AS(FrequencyGrid({1.0, std::numeric_limits<double>::quiet_NaN()}), InvalidArgument);
    CHECK_NOTHROW(FrequencyGrid({1.0}));
}

TEST_CASE("grid factories hit both endpoints exactly", "[grid]") {
    const auto lin = FrequencyGrid::linear(1e9, 2e9, 11);
    CHECK(lin.size() == 11);
    CHECK(lin.front() == 1e9);
    CHECK(lin.back() == 2e9);
    CHECK(lin[5] == Approx(1.5e9));

    const auto lg = FrequencyGrid::logarithmic(1e8, 3e10, 1001);
    CHECK(lg.front() == 1e8);
    CHECK(lg.back() == 3e10);
    CHECK(lg[500] == Approx(std::sqrt(1e8 * 3e10)).epsilon(1e-12));

    CHECK_THROWS_AS(FrequencyGrid::linear(2e9, 1e9, 5), InvalidArgument);
    CHECK_THROWS_AS(FrequencyGrid::logarithmic(0.0, 1e9, 5), InvalidArgument);
    CHECK(lin.nearest(1.46e9) == 5);
    CHECK(lin.omega(0) == Approx(2.0 * 3.141592653589793 * 1e9));
}

TEST_CASE("grid matching is relative", "[grid]") {
    const FrequencyGrid a({1e9, 2e9});
    const FrequencyGrid b({1e9 * (1 + 1e-14), 2e9});
    const FrequencyGrid c({1e9, 2.001e9});
    CHECK(a.matches(b));
    CHECK_FALSE(a.matches(c));
    CHECK_FALSE(a.matches(FrequencyGrid({1e9})));
}

TEST_CASE("network data validates shape, finiteness and z0", "[network]") {
    const FrequencyGrid g({1e9, 2e9});
    CMatrix m = CMatrix::Zero(2, 2);
    CHECK_NOTHROW(NetworkData(g, {m, m}, 50.0));
    CHECK_THROWS_AS(NetworkData(g, {m}, 50.0), InvalidArgument);
    CHECK_THROWS_AS(NetworkData(g, {m, CMatrix::Zero(3, 3)}, 50.0), InvalidArgument);
    CHECK_THROWS_AS(NetworkData(g, {m, m}, std::vector<double>{50.0, -1.0}), InvalidArgument);
    CMatrix bad = m;
    bad(0, 1) = Complex(std::numeric_limits<double>::infinity(), 0.0);
    CHECK_THROWS_AS(NetworkData(g, {m, bad}, 50.0), InvalidArgument);
}

TEST_CASE("helper networks", "[network]") {
    const auto g = FrequencyGrid::linear(1e9, 2e9, 3);
    const auto thru = ideal_thru(g);
    CHECK(thru.ports() == 2);
    CHECK(thru.s(1, 1, 0) == Complex(1.0));
    CHECK(thru.s(1, 0, 0) == Complex(0.0));

    const auto att = matched_attenuator(g, 6.0);
    CHECK(std::abs(att.s(0, 1, 0)) == Approx(std::pow(10.0, -6.0 / 20.0)));
    CHECK(att.s(0, 0, 0) == Complex(0.0));

    const auto op = one_port(g, {0.1, 0.2, 0.3});
    CHECK(op.ports() == 1);
    CHECK(op.trace(0, 0)[2] == Complex(0.3));
    CHECK(thru.max_abs_diff(thru) == 0.0);
    CHECK(thru.uniform_z0());
}

TEST_CASE("netlist builder canonicalizes ground and orders nodes", "[netlist]") {
    Netlist n;
    n.add_resistor("R1", "a", "0", 10.0).add_capacitor("C1", "a", "b", 1e-12).add_inductor("L1", "b", "gnd", 1e-9);
    n.add_port("a");
    CHECK(n.at("R1").nodes[1] == "gnd");
    CHECK(n.nodes() == std::vector<std::string>{"a", "b"});
    CHECK(n.ports().front().name == "P1");
    CHECK(n.count_of_resistors() == 1);
    CHECK(n.count_of_inductors() == 1);
    CHECK(n.count_of_capacitors() == 1);
    CHECK(n.inductor_names() == std::vector<std::string>{"L1"});
    CHECK_NOTHROW(n.validate());
    CHECK(n.find("nope") == nullptr);
    CHECK_THROWS_AS(n.at("nope"), InvalidArgument);
}

TEST_CASE("netlist validation catches broken invariants", "[netlist]") {
    auto base = [] {
        Netlist n;
        n.add_resistor("R1", "a", "gnd", 50.0).add_inductor("L1", "a", "b", 1e-9).add_inductor("L2", "b", "gnd", 1e-9);
        n.add_port("a");
        return n;
    };
    CHECK_NOTHROW(base().validate());

    auto dup = base();
    dup.add_resistor("R1", "a", "gnd", 1.0);
    CHECK_THROWS_AS(dup.validate(), InvalidArgument);

    auto neg = base();
    neg.add_capacitor("C1", "a", "gnd", -1e-12);
    CHECK_THROWS_AS(neg.validate(), InvalidArgument);

    auto same = base();
    same.add_resistor("R2", "a", "a", 1.0);
    CHECK_THROWS_AS(same.validate(), InvalidArgument);

    auto strong = base();
    strong.add_coupling("K1", "L1", "L2", 1.0);
    CHECK_THROWS_AS(strong.validate(), InvalidArgument);

    auto self = base();
    self.add_coupling("K1", "L1", "L1", 0.5);
    CHECK_THROWS_AS(self.validate(), InvalidArgument);

    auto not_l = base();
    not_l.add_coupling("K1", "L1", "R1", 0.5);
    CHECK_THROWS_AS(not_l.validate(), InvalidArgument);

    auto twice = base();
    twice.add_coupling("K1", "L1", "L2", 0.5).add_coupling("K2", "L2", "L1", 0.2);
    CHECK_THROWS_AS(twice.validate(), InvalidArgument);

    auto sign = base();
    sign.at("L1").as<Inductor>().winding_sign = 2;
    CHECK_THROWS_AS(sign.validate(), InvalidArgument);

    auto floating = base();
    floating.add_resistor("R9", "x", "y", 1.0);
    CHECK_THROWS_AS(floating.validate(), InvalidArgument);

    Netlist no_ports;
    no_ports.add_resistor("R1", "a", "gnd", 1.0);
    CHECK_THROWS_AS(no_ports.validate(), InvalidArgument);

    auto degenerate = base();
    degenerate.add_port("a", "a");
    CHECK_THROWS_AS(degenerate.validate(), InvalidArgument);

    auto clear = base();
    clear.add_coupling("K1", "L1", "L2", 0.5);
    clear.clear_couplings();
    CHECK(clear.elements().size() == 3);
}
