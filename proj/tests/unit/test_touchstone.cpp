#include <catch_amalgamated.hpp>

#include <rlf/csv.hpp>
#include <rlf/error.hpp>
#include <rlf/touchstone.hpp>

#include <cmath>
#include <filesystem>
#include <random>

using namespace rlf;
using Catch::Approx;

namespace {

NetworkData random_network(std::size_t ports, std::size_t points, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    std::vector<double> f;
    for (std::size_t k = 0; k < points; ++k) {
        f.push_back(1e8 * static_cast<double>(k + 1) + 12345.678 * static_cast<double>(k));
    }
    std::vector<CMatrix> s;
    for (std::size_t k = 0; k < points; ++k) {
        CMatrix m(static_cast<Eigen::Index>(ports), static_cast<Eigen::Index>(ports));
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            for (Eigen::Index j = 0; j < m.cols(); ++j) {
                m(i, j) = Complex(u(rng), u(rng));
            }
        }
        s.push_back(m);
    }
    return NetworkData(FrequencyGrid(std::move(f)), std::move(s), 50.0);
}

double max_rel_diff(const NetworkData& a, const NetworkData& b) {
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        worst = std::max(worst, std::abs(a.grid()[k] - b.grid()[k]) / a.grid()[k]);
        worst = std::max(worst, (a.s(k) - b.s(k)).cwiseAbs().maxCoeff() / std::max(1e-300, a.s(k).cwiseAbs().maxCoeff()));
    }
    return worst;
}

}  // namespace

TEST_CASE("RI thru record", "[touchstone]") {
    const auto f = parse_touchstone("# GHz S RI R 50\n1.0 0.0 0.0 1.0 0.0 1.0 0.0 0.0 0.0\n");
    REQUIRE(f.network.ports() == 2);
    CHECK(f.network.grid()[0] == 1e9);
    CHECK(f.network.s(0, 1, 0) == Complex(1.0));
    CHECK(f.network.s(0, 0, 1) == Complex(1.0));
    CHECK(f.network.s(0, 0, 0) == Complex(0.0));
}

TEST_CASE("MA record with unit conversion", "[touchstone]") {
    const auto f = parse_touchstone("! measured\n# MHz S MA R 50\n500 0.5 0\n");
    REQUIRE(f.network.ports() == 1);
    CHECK(f.network.grid()[0] == 5e8);
    CHECK(std::abs(f.network.s(0, 0, 0)) == Approx(0.5));
    REQUIRE(f.comments.size() == 1);
    CHECK(f.comments[0].find("measured") != std::string::npos);
}

TEST_CASE("two-port column order is S11 S21 S12 S22", "[touchstone]") {
    const auto f = parse_touchstone("# Hz S RI R 75\n1 0.1 0 0.2 0 0.3 0 0.4 0\n");
    CHECK(f.network.s(0, 1, 0) == Complex(0.2));
    CHECK(f.network.s(0, 0, 1) == Complex(0.3));
    CHECK(f.network.z0(0) == 75.0);
}

TEST_CASE("round trips in every format and port count", "[touchstone]") {
    for (std::size_t ports = 1; ports <= 4; ++ports) {
        for (auto fmt : {DataFormat::RI, DataFormat::MA, DataFormat::DB}) {
            for (auto unit : {FrequencyUnit::Hz, FrequencyUnit::kHz, FrequencyUnit::MHz, FrequencyUnit::GHz}) {
                const auto n = random_network(ports, 9, ports * 31 + static_cast<std::uint64_t>(fmt));
                const auto text = write_touchstone(n, {unit, fmt, 50.0});
                const auto back = parse_touchstone(text, ports);
                REQUIRE(back.network.ports() == ports);
                CHECK(max_rel_diff(n, back.network) < 1e-9);
                CHECK(max_rel_diff(n, parse_touchstone(text).network) < 1e-9);
            }
        }
    }
}

TEST_CASE("DB magnitudes equal 20 log10 |S|", "[touchstone]") {
    const auto grid = FrequencyGrid({1e9});
    const auto text = write_touchstone(matched_attenuator(grid, 6.0), {FrequencyUnit::GHz, DataFormat::DB, 50.0});
    CHECK(text.find("# GHz S DB R 50") != std::string::npos);
    const auto back = parse_touchstone(text);
    CHECK(20.0 * std::log10(std::abs(back.network.s(0, 1, 0))) == Approx(-6.0).margin(1e-12));
}

TEST_CASE("malformed input is rejected with a line number", "[touchstone]") {
    auto line_of = [](const std::string& text) -> std::optional<std::size_t> {
        try {
            (void)parse_touchstone(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return std::nullopt;
    };
    CHECK(line_of("# GHz S XX R 50\n1 0 0\n") == 1);
    CHECK(line_of("# GHz Y RI R 50\n1 0 0\n") == 1);
    CHECK(line_of("# GHz S RI R -5\n1 0 0\n") == 1);
    CHECK(line_of("# GHz S RI R 50\n2 0 0\n1 0 0\n") == 3);
    CHECK(line_of("# GHz S RI R 50\n1 0 0 0 0 0 0 0 0\n2 0 0 0 0 0\n") == 3);
    CHECK(line_of("# GHz S RI R 50\n1 0 zero\n") == 2);
    CHECK(line_of("# GHz S RI R 50\n# GHz S RI R 50\n1 0 0\n") == 2);
    CHECK(line_of("[Version] 2.0\n") == 1);
    CHECK_THROWS_AS(parse_touchstone("# GHz S RI R 50\n"), ParseError);
    CHECK_THROWS_AS(parse_touchstone("# GHz S RI R 50\n1 0 0 0 0\n", 1), ParseError);
}

TEST_CASE("writing a mixed reference network fails", "[touchstone]") {
    CMatrix m = CMatrix::Zero(2, 2);
    const NetworkData n(FrequencyGrid({1e9}), {m}, std::vector<double>{50.0, 75.0});
    CHECK_THROWS_AS(write_touchstone(n), InvalidArgument);
}

TEST_CASE("file extension sets the port count", "[touchstone]") {
    const auto dir = std::filesystem::temp_directory_path() / "rlf_touchstone_test";
    std::filesystem::create_directories(dir);
    const auto n = random_network(2, 5, 99);
    save_touchstone(dir / "x.s2p", n, {FrequencyUnit::GHz, DataFormat::RI, 50.0});
    CHECK(max_rel_diff(n, read_touchstone(dir / "x.s2p").network) < 1e-12);
    const auto four = random_network(4, 3, 98);
    save_touchstone(dir / "y.s4p", four);
    CHECK(read_touchstone(dir / "y.s4p").network.ports() == 4);
    CHECK_THROWS_AS(read_touchstone(dir / "missing.s2p"), Error);
    std::filesystem::remove_all(dir);
}

TEST_CASE("response CSV", "[csv]") {
    const auto grid = FrequencyGrid({1e9, 2e9});
    const auto thru_csv = write_response_csv(ideal_thru(grid), {{1, 0}});
    CHECK(thru_csv.rfind("freq_hz,S21_db\n", 0) == 0);
    const auto thru = parse_csv(thru_csv);
    CHECK(thru.column("S21_db") == std::vector<double>{0.0, 0.0});
    CHECK(thru.column("freq_hz") == std::vector<double>{1e9, 2e9});

    const auto att = parse_csv(write_response_csv(matched_attenuator(grid, 6.02), {{1, 0}, {0, 0}},
                                                  {true, true, true, true}));
    CHECK(att.column("S21_db")[0] == Approx(-6.02).margin(1e-12));
    CHECK(att.column("S11_db")[0] == -std::numeric_limits<double>::infinity());
    CHECK(att.column("S21_deg")[1] == Approx(0.0));
    CHECK(att.column("S21_re")[0] == Approx(std::pow(10.0, -6.02 / 20.0)));
    CHECK(att.header.size() == 11);
    CHECK_THROWS_AS(att.column("S99_db"), InvalidArgument);
}

TEST_CASE("CSV parsing", "[csv]") {
    CsvTable t;
    t.header = {"a", "b,c", "d\"e"};
    t.rows = {{1.0, 0.1, -3.0}, {1.0 / 3.0, 1e-300, 7e22}};
    const auto text = write_csv(t);
    const auto back = parse_csv(text);
    CHECK(back.header == t.header);
    CHECK(back.rows == t.rows);

    auto line_of = [](const std::string& text) -> std::optional<std::size_t> {
        try {
            (void)parse_csv(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return std::nullopt;
    };
    CHECK(line_of("a,b\n1,2\n3\n") == 3);
    CHECK(line_of("a,b\n1,x\n") == 2);
    CHECK_THROWS_AS(parse_csv(""), ParseError);
    CHECK(line_of("a,b\r\n1,2\r\n") == std::nullopt);
}
