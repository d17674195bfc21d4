#include "rlf/calib.hpp"

#include "rlf/error.hpp"
#include "rlf/metrics.hpp"
#include "rlf/rng.hpp"
#include "rlf/tolerance.hpp"

#include <fmt/format.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rlf {

namespace {

constexpr double deg = std::numbers::pi / 180.0;
constexpr double qr_switch = 1e6;
constexpr double rank_floor = 1e-12;

void require_points(const ComplexSeries& s, std::size_t n, const char* what) {
    if (s.size() != n) {
        throw InvalidArgument(fmt::format("{} has {} points, expected {}", what, s.size(), n));
    }
}

double hz_at(std::span<const double> f, std::size_t k) { return k < f.size() ? f[k] : 0.0; }

CalStandard constant(const FrequencyGrid& grid, std::string name, Complex g) {
    return CalStandard{std::move(name), ComplexSeries(grid.size(), g)};
}

RealSeries unwrapped_delay(const NetworkData& path) {
    RealSeries theta(path.size());
    double offset = 0.0;
    double prev = 0.0;
    for (std::size_t k = 0; k < path.size(); ++k) {
        const double a = -std::arg(path.s(k, 1, 0));
        if (k > 0) {
            double d = a + offset - prev;
            while (d > std::numbers::pi) {
                offset -= 2.0 * std::numbers::pi;
                d -= 2.0 * std::numbers::pi;
            }
            while (d < -std::numbers::pi) {
                offset += 2.0 * std::numbers::pi;
                d += 2.0 * std::numbers::pi;
            }
        }
        theta[k] = a + offset;
        prev = theta[k];
    }
    if (path.size() > 1) {
        const double f0 = path.grid()[0];
        const double slope = (theta[1] - theta[0]) / (path.grid()[1] - f0);
        const double turns = std::round((slope * f0 - theta[0]) / (2.0 * std::numbers::pi));
        for (auto& t : theta) {
            t += turns * 2.0 * std::numbers::pi;
        }
    }
    return theta;
}

Complex shift_match(Complex s, double u, double span_db) {
    const double mag = std::abs(s);
    if (mag == 0.0 || span_db == 0.0) {
        return s;
    }
    const double rl = -to_db(mag) + u * span_db;
    const double m = std::min(std::pow(10.0, -std::max(rl, 0.0) / 20.0), 0.999);
    return std::polar(m, std::arg(s));
}

}  // namespace

void CalStandard::validate(std::size_t points) const {
    require_points(gamma, points, "calibration standard");
    for (const auto& g : gamma) {
        if (!(std::abs(g) <= 1.0 + 1e-6)) {
            throw InvalidArgument(fmt::format("standard '{}' has |G| = {} > 1", name, std::abs(g)));
        }
    }
}

CalStandard open_standard(const FrequencyGrid& grid) { return constant(grid, "open", 1.0); }
CalStandard short_standard(const FrequencyGrid& grid) { return constant(grid, "short", -1.0); }
CalStandard load_standard(const FrequencyGrid& grid) { return constant(grid, "load", 0.0); }

CalStandard term2_standard(const FrequencyGrid& grid, double phase_deg, double magnitude) {
    return constant(grid, "term2", std::polar(magnitude, phase_deg * deg));
}

CalStandard offset_short_standard(const FrequencyGrid& grid, double theta_ref, double reference_hz) {
    CalStandard s{"offset_short", ComplexSeries(grid.size())};
    for (std::size_t k = 0; k < grid.size(); ++k) {
        s.gamma[k] = -std::polar(1.0, -2.0 * theta_ref * grid[k] / reference_hz);
    }
    return s;
}

ErrorTerms ErrorTerms::identity(std::size_t points) {
    return ErrorTerms{ComplexSeries(points, 0.0), ComplexSeries(points, 0.0), ComplexSeries(points, -1.0), {}, {}};
}

ErrorTerms ErrorTerms::from_box(const ComplexSeries& e00, const ComplexSeries& e11, const ComplexSeries& tracking) {
    require_points(e11, e00.size(), "source match");
    require_points(tracking, e00.size(), "reflection tracking");
    ErrorTerms et{e00, e11, ComplexSeries(e00.size()), {}, {}};
    for (std::size_t k = 0; k < e00.size(); ++k) {
        et.delta_e[k] = e00[k] * e11[k] - tracking[k];
    }
    return et;
}

ComplexSeries forward_measure(const ErrorTerms& et, const ComplexSeries& gamma) {
    require_points(gamma, et.size(), "reflection");
    ComplexSeries out(gamma.size());
    for (std::size_t k = 0; k < gamma.size(); ++k) {
        out[k] = (et.e00[k] - et.delta_e[k] * gamma[k]) / (1.0 - et.e11[k] * gamma[k]);
    }
    return out;
}

ErrorTerms solve_error_terms(const std::vector<CalStandard>& standards, const std::vector<ComplexSeries>& measured,
                             std::span<const double> frequencies) {
    if (standards.size() < 3) {
        throw InvalidArgument(fmt::format("calibration needs at least 3 standards, got {}", standards.size()));
    }
    if (measured.size() != standards.size()) {
        throw InvalidArgument(fmt::format("{} measurements for {} standards", measured.size(), standards.size()));
    }
    const std::size_t nf = standards.front().gamma.size();
    for (std::size_t s = 0; s < standards.size(); ++s) {
        standards[s].validate(nf);
        require_points(measured[s], nf, "measurement");
    }
    const auto rows = static_cast<Eigen::Index>(standards.size());
    ErrorTerms et{ComplexSeries(nf), ComplexSeries(nf), ComplexSeries(nf), RealSeries(nf), RealSeries(nf)};
    for (std::size_t k = 0; k < nf; ++k) {
        Eigen::MatrixXcd A(rows, 3);
        Eigen::VectorXcd b(rows);
        for (Eigen::Index r = 0; r < rows; ++r) {
            const Complex g = standards[static_cast<std::size_t>(r)].gamma[k];
            const Complex gm = measured[static_cast<std::size_t>(r)][k];
            A(r, 0) = 1.0;
            A(r, 1) = g * gm;
            A(r, 2) = -g;
            b(r) = gm;
        }
        const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
        const auto& sv = svd.singularValues();
        if (!(sv(2) > rank_floor * sv(0))) {
            throw SingularError("calibration standards are not independent", hz_at(frequencies, k),
                                fmt::format("frequency index {}", k));
        }
        const double cond = sv(0) / sv(2);
        Eigen::VectorXcd x;
        if (cond <= qr_switch) {
            x = (A.adjoint() * A).ldlt().solve(A.adjoint() * b);
        } else {
            x = A.householderQr().solve(b);
        }
        et.e00[k] = x(0);
        et.e11[k] = x(1);
        et.delta_e[k] = x(2);
        et.condition[k] = cond;
        et.residual[k] = (A * x - b).norm();
    }
    return et;
}

ComplexSeries apply_correction(const ErrorTerms& et, const ComplexSeries& gamma_m, std::span<const double> frequencies) {
    require_points(gamma_m, et.size(), "measured reflection");
    ComplexSeries out(gamma_m.size());
    for (std::size_t k = 0; k < gamma_m.size(); ++k) {
        const Complex den = gamma_m[k] * et.e11[k] - et.delta_e[k];
        if (!(std::abs(den) > 1e-12)) {
            throw SingularError("correction denominator vanishes", hz_at(frequencies, k), fmt::format("frequency index {}", k));
        }
        out[k] = (gamma_m[k] - et.e00[k]) / den;
    }
    return out;
}

RealSeries error_gain(const NetworkData& two_port, const ComplexSeries& gamma_L, const RealSeries& delta_1m) {
    if (two_port.ports() != 2) {
        throw InvalidArgument("error gain needs a two-port");
    }
    require_points(gamma_L, two_port.size(), "load reflection");
    if (delta_1m.size() != two_port.size()) {
        throw InvalidArgument("error radius length does not match the grid");
    }
    RealSeries out(two_port.size());
    for (std::size_t k = 0; k < two_port.size(); ++k) {
        const Complex t = two_port.s(k, 0, 1) * two_port.s(k, 1, 0);
        if (!(std::abs(t) > 0.0)) {
            throw SingularError("two-port has zero transmission", two_port.grid()[k]);
        }
        const Complex m = 1.0 - gamma_L[k] * two_port.s(k, 1, 1);
        out[k] = std::abs(m * m / t) * delta_1m[k];
    }
    return out;
}

ComplexSeries embed(const NetworkData& path, const ComplexSeries& gamma) {
    require_points(gamma, path.size(), "reflection");
    ComplexSeries out(gamma.size());
    for (std::size_t k = 0; k < gamma.size(); ++k) {
        const auto& s = path.s(k);
        out[k] = s(0, 0) + s(0, 1) * s(1, 0) * gamma[k] / (1.0 - s(1, 1) * gamma[k]);
    }
    return out;
}

ComplexSeries deembed(const NetworkData& path, const ComplexSeries& gamma_at_port1) {
    require_points(gamma_at_port1, path.size(), "reflection");
    ComplexSeries out(gamma_at_port1.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        const auto& s = path.s(k);
        const Complex d = gamma_at_port1[k] - s(0, 0);
        const Complex den = s(0, 1) * s(1, 0) + s(1, 1) * d;
        if (!(std::abs(den) > 1e-300)) {
            throw SingularError("path cannot be de-embedded", path.grid()[k]);
        }
        out[k] = d / den;
    }
    return out;
}

NetworkData cable_path(const FrequencyGrid& grid, const CablePath& c, double z0) {
    if (!(c.length_m > 0.0 && c.velocity > 0.0 && c.line_z0 > 0.0 && c.loss_db_at_1ghz >= 0.0)) {
        throw InvalidArgument("cable needs positive length, velocity and impedance, and loss >= 0");
    }
    std::vector<CMatrix> s(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double alpha = c.loss_db_at_1ghz * std::sqrt(grid[k] / 1e9) * std::log(10.0) / 20.0;
        const Complex gl(alpha, grid.omega(k) * c.length_m / c.velocity);
        const Complex A = std::cosh(gl);
        const Complex B = c.line_z0 * std::sinh(gl);
        const Complex C = std::sinh(gl) / c.line_z0;
        const Complex den = A + B / z0 + C * z0 + A;
        s[k].resize(2, 2);
        const Complex s11 = (B / z0 - C * z0) / den;
        const Complex s21 = 2.0 / den;
        s[k] << s11, s21, s21, s11;
    }
    return NetworkData(grid, std::move(s), z0);
}

void UncertaintyConfig::validate() const {
    if (trials < 1) {
        throw InvalidArgument("calibration Monte Carlo needs at least one trial");
    }
    for (double v : {vna_noise_db, phase_deg, return_loss_db, insertion_loss_db, electrical_length_fraction}) {
        if (!(std::isfinite(v) && v >= 0.0)) {
            throw InvalidArgument("uncertainty spans must be finite and >= 0");
        }
    }
    if (!(histogram.bins >= 1 && histogram.db_min < histogram.db_max)) {
        throw InvalidArgument("histogram needs bins >= 1 and db_min < db_max");
    }
}

NetworkData perturb_path(const NetworkData& nominal, double il_u, double phase_u, double length_u, double rl1_u,
                         double rl2_u, const UncertaintyConfig& cfg) {
    const auto theta = unwrapped_delay(nominal);
    std::vector<CMatrix> s(nominal.size());
    for (std::size_t k = 0; k < nominal.size(); ++k) {
        const auto& n = nominal.s(k);
        const double phase = phase_u * cfg.phase_deg * deg + length_u * cfg.electrical_length_fraction * theta[k];
        const Complex t = std::polar(std::pow(10.0, il_u * cfg.insertion_loss_db / 20.0), phase);
        s[k].resize(2, 2);
        s[k] << shift_match(n(0, 0), rl1_u, cfg.return_loss_db), n(0, 1) * t, n(1, 0) * t,
            shift_match(n(1, 1), rl2_u, cfg.return_loss_db);
    }
    return NetworkData(nominal.grid(), std::move(s), std::vector<double>(nominal.z0().begin(), nominal.z0().end()));
}

CalibrationMcResult calibration_mc(const std::vector<CalStandard>& standards, const ComplexSeries& dut_true,
                                   const std::vector<NetworkData>& paths, const UncertaintyConfig& cfg,
                                   const Parallelism& parallelism) {
    cfg.validate();
    if (standards.size() < 3) {
        throw InvalidArgument("calibration needs at least 3 standards");
    }
    if (paths.size() != standards.size() + 1) {
        throw InvalidArgument(fmt::format("need {} switch paths (one per standard plus the DUT), got {}",
                                          standards.size() + 1, paths.size()));
    }
    const auto& grid = paths.front().grid();
    const std::size_t nf = grid.size();
    for (const auto& p : paths) {
        if (p.ports() != 2 || !p.grid().matches(grid)) {
            throw InvalidArgument("switch paths must be two-ports on a common grid");
        }
    }
    for (const auto& s : standards) {
        s.validate(nf);
    }
    require_points(dut_true, nf, "DUT reflection");
    const ErrorTerms box = cfg.reflectometer.size() == 0 ? ErrorTerms::identity(nf) : cfg.reflectometer;
    if (box.size() != nf) {
        throw InvalidArgument("reflectometer error terms do not match the grid");
    }

    std::vector<CalStandard> references;
    for (std::size_t s = 0; s < standards.size(); ++s) {
        references.push_back({standards[s].name, embed(paths[s], standards[s].gamma)});
    }

    const std::size_t trials = cfg.trials;
    std::vector<double> corrected(trials * nf);
    std::vector<double> err(trials * nf);
    parallel_for(trials, parallelism, [&](std::size_t t) {
        TrialRng rng(cfg.seed, t);
        std::vector<NetworkData> actual;
        actual.reserve(paths.size());
        for (const auto& p : paths) {
            const double il = rng.symmetric(1.0);
            const double ph = rng.symmetric(1.0);
            const double len = rng.symmetric(1.0);
            const double r1 = rng.symmetric(1.0);
            const double r2 = rng.symmetric(1.0);
            actual.push_back(perturb_path(p, il, ph, len, r1, r2, cfg));
        }
        auto read = [&](const NetworkData& path, const ComplexSeries& g) {
            auto m = forward_measure(box, embed(path, g));
            for (auto& x : m) {
                x *= std::pow(10.0, rng.symmetric(cfg.vna_noise_db) / 20.0);
            }
            return m;
        };
        std::vector<ComplexSeries> measured;
        for (std::size_t s = 0; s < standards.size(); ++s) {
            measured.push_back(read(actual[s], standards[s].gamma));
        }
        const auto dut_m = read(actual.back(), dut_true);
        const auto et = solve_error_terms(references, measured, grid.points());
        const auto g = deembed(paths.back(), apply_correction(et, dut_m, grid.points()));
        for (std::size_t k = 0; k < nf; ++k) {
            corrected[t * nf + k] = std::abs(g[k]);
            err[t * nf + k] = std::abs(g[k] - dut_true[k]);
        }
    });

    CalibrationMcResult r{grid};
    r.trials = trials;
    r.dut_true_mag.resize(nf);
    for (auto* set : {&r.quantiles, &r.error_quantiles}) {
        for (auto& q : *set) {
            q.resize(nf);
        }
    }
    r.error_max.resize(nf);
    const auto& h = cfg.histogram;
    for (std::size_t b = 0; b <= h.bins; ++b) {
        r.bin_edges_db.push_back(h.db_min + (h.db_max - h.db_min) * static_cast<double>(b) / static_cast<double>(h.bins));
    }
    r.histogram.assign(nf, std::vector<std::size_t>(h.bins, 0));
    std::vector<double> a(trials), e(trials);
    for (std::size_t k = 0; k < nf; ++k) {
        r.dut_true_mag[k] = std::abs(dut_true[k]);
        for (std::size_t t = 0; t < trials; ++t) {
            a[t] = corrected[t * nf + k];
            e[t] = err[t * nf + k];
            const double db = to_db(a[t]);
            const double pos = (db - h.db_min) / (h.db_max - h.db_min) * static_cast<double>(h.bins);
            const auto bin = static_cast<std::size_t>(std::clamp(std::floor(pos), 0.0, static_cast<double>(h.bins - 1)));
            ++r.histogram[k][bin];
        }
        std::sort(a.begin(), a.end());
        std::sort(e.begin(), e.end());
        for (std::size_t q = 0; q < 3; ++q) {
            r.quantiles[q][k] = sorted_quantile(a, calibration_quantile_levels[q]);
            r.error_quantiles[q][k] = sorted_quantile(e, calibration_quantile_levels[q]);
        }
        r.error_max[k] = e.back();
        if (!r.crossover_hz && r.error_quantiles[2][k] > cfg.crossover_threshold) {
            r.crossover_hz = grid[k];
        }
    }
    return r;
}

}  // namespace rlf
