#pragma once

#include "rlf/network.hpp"

#include <cstddef>
#include <optional>

namespace rlf {

/// Min eigenvalue of (I - S^H S) per frequency; >= 0 means passive.
RealSeries passivity_margin(const NetworkData& n);

/// max |S - S^T| over the grid.
double reciprocity_error(const NetworkData& n);

/// -20 log10 |S(port, port)|; an exactly zero reflection maps to +infinity.
RealSeries return_loss_db(const NetworkData& n, std::size_t port);

/// -20 log10 |S(to, from)|; an exactly zero transmission maps to +infinity.
RealSeries insertion_loss_db(const NetworkData& n, std::size_t from, std::size_t to);

/// 20 log10 |x| with 0 -> -infinity.
double to_db(Complex x);
double to_db(double magnitude);

/// Symmetric reciprocal two-port from even/odd-mode reflections:
/// S11 = S22 = (ge + go)/2, S21 = S12 = (ge - go)/2.
NetworkData symmetric_two_port_from_modes(const FrequencyGrid& grid, const ComplexSeries& gamma_even,
                                          const ComplexSeries& gamma_odd, double z0 = 50.0);

struct Band {
    double lo_hz;
    double hi_hz;

    [[nodiscard]] bool contains(double hz) const { return hz >= lo_hz && hz <= hi_hz; }
    [[nodiscard]] double center_arithmetic() const { return 0.5 * (lo_hz + hi_hz); }
    [[nodiscard]] double center_geometric() const;
    [[nodiscard]] double width() const { return hi_hz - lo_hz; }
};

/// Band around the transmission peak where |S21| stays within `drop_db` of
/// the peak, edges linearly interpolated in dB. nullopt when an edge is not
/// inside the grid.
std::optional<Band> transmission_band(const NetworkData& n, double drop_db = 3.0, std::size_t from = 0,
                                      std::size_t to = 1);

/// Band-pass figures of merit of a measured or simulated two-port.
struct ResponseSummary {
    double center_hz = 0.0;            // arithmetic center of the 3 dB band
    double center_geometric_hz = 0.0;
    double bandwidth_3db_hz = 0.0;
    double band_lo_hz = 0.0;
    double band_hi_hz = 0.0;
    double min_insertion_loss_db = 0.0;     // at the transmission peak
    double max_in_band_insertion_loss_db = 0.0;
    double min_in_band_return_loss_db = 0.0;
    double min_broadband_return_loss_db = 0.0;
};

struct SummaryOptions {
    double drop_db = 3.0;
    /// Band used for the in-band IL and RL figures; defaults to the 3 dB band.
    std::optional<Band> in_band;
    /// Band for the broadband RL figure; defaults to the whole grid.
    std::optional<Band> broadband;
};

/// Throws InvalidArgument if no complete 3 dB band lies inside the grid.
ResponseSummary summarize_response(const NetworkData& two_port, const SummaryOptions& options = {});

}  // namespace rlf
