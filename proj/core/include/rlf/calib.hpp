#pragma once

#include "rlf/network.hpp"
#include "rlf/parallel.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rlf {

struct CalStandard {
    std::string name;
    ComplexSeries gamma;

    void validate(std::size_t points) const;
};

CalStandard open_standard(const FrequencyGrid& grid);
CalStandard short_standard(const FrequencyGrid& grid);
CalStandard load_standard(const FrequencyGrid& grid);
/// Partial reflector, 0.501 magnitude by default (6 dB return loss).
CalStandard term2_standard(const FrequencyGrid& grid, double phase_deg = 0.0, double magnitude = 0.501);
/// Short behind a lossless offset of electrical length theta_ref at reference_hz: -exp(-2j theta).
CalStandard offset_short_standard(const FrequencyGrid& grid, double theta_ref, double reference_hz);

/// One-port error model Gm = e00 + e01 e10 G / (1 - e11 G), carried as
/// (e00, e11, delta_e = e00 e11 - e01 e10).
struct ErrorTerms {
    ComplexSeries e00;
    ComplexSeries e11;
    ComplexSeries delta_e;
    RealSeries condition;  // design-matrix condition number per frequency (solved terms only)
    RealSeries residual;   // least-squares residual norm per frequency (solved terms only)

    [[nodiscard]] std::size_t size() const { return e00.size(); }
    static ErrorTerms identity(std::size_t points);
    /// Terms from explicit directivity, source match and reflection tracking e01 e10.
    static ErrorTerms from_box(const ComplexSeries& e00, const ComplexSeries& e11, const ComplexSeries& tracking);
};

/// What the reflectometer reads for a true reflection `gamma`.
ComplexSeries forward_measure(const ErrorTerms& et, const ComplexSeries& gamma);

/// Per-frequency least squares over the rows [1, G Gm, -G] x = Gm. Uses the
/// normal equations while the condition number stays below 1e6 and a
/// Householder QR solve above it; throws SingularError on rank deficiency.
/// `frequencies`, when given, only labels errors.
ErrorTerms solve_error_terms(const std::vector<CalStandard>& standards, const std::vector<ComplexSeries>& measured,
                             std::span<const double> frequencies = {});

/// (Gm - e00) / (Gm e11 - delta_e); throws SingularError when the denominator vanishes.
ComplexSeries apply_correction(const ErrorTerms& et, const ComplexSeries& gamma_m,
                               std::span<const double> frequencies = {});

/// |(1 - GL S22)^2 / (S12 S21)| * delta_1m for a two-port ahead of the load.
RealSeries error_gain(const NetworkData& two_port, const ComplexSeries& gamma_L, const RealSeries& delta_1m);

/// Reflection seen at port 1 of `path` with `gamma` at port 2, and its inverse.
ComplexSeries embed(const NetworkData& path, const ComplexSeries& gamma);
ComplexSeries deembed(const NetworkData& path, const ComplexSeries& gamma_at_port1);

/// Lossy mismatched coax-like line: impedance `line_z0` in a `z0` system,
/// electrical length 2 pi f length / velocity, loss growing with sqrt(f).
struct CablePath {
    double length_m = 0.3;
    double velocity = 0.7 * 299792458.0;
    double line_z0 = 55.0;
    double loss_db_at_1ghz = 0.3;  // whole-cable loss at 1 GHz
};

NetworkData cable_path(const FrequencyGrid& grid, const CablePath& cable, double z0 = 50.0);

struct HistogramSpec {
    double db_min = -60.0;
    double db_max = 0.0;
    std::size_t bins = 60;
};

struct UncertaintyConfig {
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    double vna_noise_db = 0.4;         // per-reading magnitude error
    double phase_deg = 10.0;           // path transmission phase error
    double return_loss_db = 10.0;      // path match spread about nominal
    double insertion_loss_db = 0.5;    // path transmission magnitude spread
    /// Extra transmission phase drawn as a fraction of each path's own
    /// electrical length, so long paths drift more at high frequency.
    double electrical_length_fraction = 0.0;
    double crossover_threshold = 0.316;
    ErrorTerms reflectometer;          // empty means identity
    HistogramSpec histogram{};

    void validate() const;
};

inline constexpr std::array<double, 3> calibration_quantile_levels{0.05, 0.50, 0.95};

struct CalibrationMcResult {
    FrequencyGrid grid;
    std::size_t trials = 0;
    RealSeries dut_true_mag{};
    std::array<RealSeries, 3> quantiles{};        // corrected |G| at the 5/50/95 % levels
    std::array<RealSeries, 3> error_quantiles{};  // |G_corrected - G_true|
    RealSeries error_max{};
    std::vector<std::vector<std::size_t>> histogram{};  // [frequency][bin] of 20 log10 |G_corrected|
    std::vector<double> bin_edges_db{};
    std::optional<double> crossover_hz{};  // first frequency whose 95 % error exceeds the threshold
};

/// Monte Carlo of the switched-standard calibration. `paths` holds one
/// nominal two-port per standard plus a last one for the DUT. Each trial
/// perturbs every path, measures standards and DUT through their perturbed
/// paths, calibrates against the standards referred through their nominal
/// paths and de-embeds the DUT through its nominal path.
CalibrationMcResult calibration_mc(const std::vector<CalStandard>& standards, const ComplexSeries& dut_true,
                                   const std::vector<NetworkData>& paths, const UncertaintyConfig& cfg,
                                   const Parallelism& parallelism = {});

/// One perturbed copy of `nominal`, as drawn inside calibration_mc.
NetworkData perturb_path(const NetworkData& nominal, double il_u, double phase_u, double length_u, double rl1_u,
                         double rl2_u, const UncertaintyConfig& cfg);

}  // namespace rlf
