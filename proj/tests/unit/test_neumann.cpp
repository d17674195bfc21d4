#include <catch_amalgamated.hpp>

#include "oracles.hpp"

#include <rlf/error.hpp>
#include <rlf/geometry.hpp>
#include <rlf/mutual_fit.hpp>
#include <rlf/neumann.hpp>

#include <cmath>

using namespace rlf;
using Catch::Approx;

namespace {

constexpr double l = 1e-3;
constexpr double d = 1e-4;

double parallel_m(std::size_t segments) {
    return neumann_mutual(straight_path({0, 0, 0}, {l, 0, 0}, segments), straight_path({0, d, 0}, {l, d, 0}, segments));
}

SpiralParams spiral_at(double x, double y) {
    SpiralParams p;
    p.turns = 2.0;
    p.pitch = 10e-6;
    p.outer_dimension = 100e-6;
    p.segments_per_turn = 16;
    p.center = {x, y, 0.0};
    return p;
}

}  // namespace

TEST_CASE("parallel filaments converge to the analytic value", "[neumann]") {
    const double exact = oracle::parallel_filaments(l, d);
    CHECK(exact == Approx(0.40e-9).margin(0.02e-9));
    CHECK(std::abs(parallel_m(64) - exact) < 0.01 * exact);

    const double e1 = std::abs(parallel_m(16) - exact);
    const double e2 = std::abs(parallel_m(32) - exact);
    const double e3 = std::abs(parallel_m(64) - exact);
    CHECK(e2 < e1);
    CHECK(e3 < e2);
    const double p12 = std::log2(e1 / e2);
    const double p23 = std::log2(e2 / e3);
    CHECK(p12 > 0.5);
    CHECK(std::abs(p12 - p23) < 0.5);
}

TEST_CASE("orientation, symmetry and scaling", "[neumann]") {
    const auto a = straight_path({0, 0, 0}, {l, 0, 0}, 40);
    const auto b = straight_path({0.2e-3, d, 0.05e-3}, {1.3e-3, 2 * d, 0}, 37);
    const double m = neumann_mutual(a, b);
    CHECK(neumann_mutual(a.reversed(), b) == -m);
    CHECK(neumann_mutual(a, b.reversed()) == -m);
    CHECK(neumann_mutual(b, a) == m);
    CHECK(neumann_mutual(a.scaled(3.0), b.scaled(3.0)) == Approx(3.0 * m).epsilon(1e-12));
    CHECK(neumann_mutual(a.translated({1, 2, 3}), b.translated({1, 2, 3})) == Approx(m).epsilon(1e-9));
}

TEST_CASE("perpendicular cross has no mutual inductance", "[neumann]") {
    const auto a = straight_path({-l, 0, 0}, {l, 0, 0}, 32);
    const auto b = straight_path({0, -l, d}, {0, l, d}, 32);
    CHECK(std::abs(neumann_mutual(a, b)) < 1e-20);
}

TEST_CASE("near-touching filaments are rejected", "[neumann]") {
    const auto a = straight_path({0, 0, 0}, {l, 0, 0}, 8);
    const auto b = straight_path({0, 1e-12, 0}, {l, 1e-12, 0}, 8);
    CHECK_THROWS_AS(neumann_mutual(a, b), InvalidArgument);
    CHECK_NOTHROW(neumann_mutual(a, b, {1e-13}));
}

TEST_CASE("mutual matrix", "[neumann]") {
    const std::vector<Polyline3D> paths = {spiral_path(spiral_at(0, 0)), spiral_path(spiral_at(150e-6, 0)),
                                           spiral_path(spiral_at(0, 200e-6))};
    const auto mm = mutual_matrix({"L1", "L2", "L3"}, paths, {}, Parallelism{3});
    CHECK_NOTHROW(mm.validate());
    CHECK(mm.m(0, 0) == 0.0);
    CHECK(mm.m(0, 1) == mm.m(1, 0));
    CHECK(mm.m(0, 1) == neumann_mutual(paths[0], paths[1]));
    CHECK(mm.index_of("L3") == 2);
    CHECK_THROWS_AS(mm.index_of("L9"), InvalidArgument);
    const auto serial = mutual_matrix({"L1", "L2", "L3"}, paths);
    CHECK(serial.m == mm.m);

    MutualMatrix bad{{"a", "b"}, Eigen::MatrixXd::Zero(2, 2)};
    bad.m(0, 1) = 1e-12;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    CHECK_THROWS_AS(mutual_matrix({"a", "a"}, {paths[0], paths[1]}), InvalidArgument);
}

TEST_CASE("polyline invariants", "[geometry]") {
    CHECK_THROWS_AS(Polyline3D({{0, 0, 0}}), InvalidArgument);
    CHECK_THROWS_AS(Polyline3D({{0, 0, 0}, {0, 0, 0}}), InvalidArgument);
    const Polyline3D p({{0, 0, 0}, {1, 0, 0}, {1, 2, 0}});
    CHECK(p.length() == Approx(3.0));
    CHECK(p.refined(4).segments() == 8);
    CHECK(p.refined(4).length() == Approx(3.0));
    CHECK(p.reversed().vertices().front() == Vec3{1, 2, 0});
    CHECK(straight_path({0, 0, 0}, {1, 0, 0}, 10).segments() == 10);
}

TEST_CASE("spiral paths", "[geometry]") {
    auto p = spiral_at(0, 0);
    const auto s = spiral_path(p);
    CHECK(s.size() == 2 * 16 + 1);
    p.turns = 3.0;
    p.segments_per_turn = 8;
    CHECK(spiral_path(p).size() == 25);

    const auto fixed = spiral_path(spiral_at(200e-6, 0));
    auto flipped = spiral_at(0, 0);
    flipped.handedness = -1;
    CHECK(neumann_mutual(spiral_path(flipped), fixed) == -neumann_mutual(s, fixed));

    double previous = std::abs(neumann_mutual(s, spiral_path(spiral_at(120e-6, 0))));
    for (double dist = 140e-6; dist <= 400e-6; dist += 20e-6) {
        const double m = std::abs(neumann_mutual(s, spiral_path(spiral_at(dist, 0))));
        CHECK(m < previous);
        previous = m;
    }

    for (auto plane : {SpiralPlane::XZ, SpiralPlane::YZ}) {
        auto q = spiral_at(0, 0);
        q.plane = plane;
        const auto sp = spiral_path(q);
        const int axis = plane == SpiralPlane::XZ ? 1 : 0;
        for (const auto& v : sp.vertices()) {
            REQUIRE(v[static_cast<std::size_t>(axis)] == 0.0);
        }
    }

    auto bad = spiral_at(0, 0);
    bad.pitch = 60e-6;
    CHECK_THROWS_AS(spiral_path(bad), InvalidArgument);
    bad = spiral_at(0, 0);
    bad.turns = 0.0;
    CHECK_THROWS_AS(spiral_path(bad), InvalidArgument);
}

TEST_CASE("bilinear mutual fit", "[mutual_fit]") {
    std::vector<MutualSample> samples;
    for (double x : {0.0, 1.0, 3.0}) {
        for (double y : {-1.0, 2.0}) {
            samples.push_back({x, y, 1.0 + 2.0 * x - y + 0.5 * x * y});
        }
    }
    const MutualFit fit(samples);
    for (const auto& s : samples) {
        CHECK(fit(s.dx, s.dy) == s.m);
    }
    const double mid = fit(0.5, 0.5);
    CHECK(mid == Approx((fit(0, -1) + fit(1, -1) + fit(0, 2) + fit(1, 2)) / 4.0));
    CHECK(fit(2.0, 0.0) == Approx(1.0 + 4.0));
    CHECK_THROWS_AS(fit(3.5, 0.0), InvalidArgument);
    CHECK_THROWS_AS(fit(0.0, 2.5), InvalidArgument);

    CHECK_THROWS_AS(MutualFit({{0, 0, 1}, {1, 0, 1}, {2, 0, 1}}), InvalidArgument);
    CHECK_THROWS_AS(MutualFit({{0, 0, 1}, {1, 0, 1}, {0, 1, 1}}), InvalidArgument);
    CHECK_THROWS_AS(MutualFit({{0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}, {1, 1, 2}}), InvalidArgument);
}

TEST_CASE("mutual fit tracks the integrator at held-out points", "[mutual_fit]") {
    const auto fixed = spiral_path(spiral_at(0, 0));
    std::vector<MutualSample> samples;
    for (int i = 0; i <= 8; ++i) {
        const double x = 150e-6 + 25e-6 * i;
        for (int j = 0; j <= 4; ++j) {
            const double y = 25e-6 * j;
            samples.push_back({x, y, neumann_mutual(fixed, spiral_path(spiral_at(x, y)))});
        }
    }
    const MutualFit fit(samples);
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 4; ++j) {
            const double x = 150e-6 + 25e-6 * (i + 0.5);
            const double y = 25e-6 * (j + 0.5);
            const double direct = neumann_mutual(fixed, spiral_path(spiral_at(x, y)));
            REQUIRE(std::abs(fit(x, y) - direct) < 0.05 * std::abs(direct));
        }
    }
}
