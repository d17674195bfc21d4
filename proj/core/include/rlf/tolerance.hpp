#pragma once

#include "rlf/metrics.hpp"
#include "rlf/netlist.hpp"
#include "rlf/parallel.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace rlf {

/// Uniform component spreads. The common factors model monolithic process
/// drift: one draw scales every inductor, a second draw scales every
/// capacitor. Independent fractions add a per-element draw on top.
struct ToleranceSpec {
    double common_inductor_fraction = 0.0;
    double common_capacitor_fraction = 0.0;
    double independent_fraction = 0.0;   // each L and C
    double resistor_fraction = 0.0;      // each R
    std::size_t trials = 1000;
    std::uint64_t seed = 1;

    static ToleranceSpec common(double fraction, std::size_t trials = 1000, std::uint64_t seed = 1);
    void validate() const;
};

inline constexpr std::array<double, 3> tolerance_quantile_levels{0.05, 0.50, 0.95};

struct ToleranceSummary {
    FrequencyGrid grid;
    std::size_t trials = 0;
    /// [level][frequency] for tolerance_quantile_levels.
    std::array<RealSeries, 3> s11_quantiles;
    std::array<RealSeries, 3> s21_quantiles;
    RealSeries s11_max;
    RealSeries s21_min;
    RealSeries s11_nominal;
    RealSeries s21_nominal;

    /// -20 log10 of the largest |S11| any trial shows inside `band`.
    [[nodiscard]] double worst_return_loss_db(const Band& band) const;
};

/// The perturbed netlist for `trial`; trial streams depend only on (seed, trial).
Netlist perturb_netlist(const Netlist& netlist, const ToleranceSpec& spec, std::size_t trial);

/// Seeded Monte Carlo of |S11| and |S21| (ports 1 and 2). Results do not depend
/// on the thread count.
ToleranceSummary tolerance_mc(const Netlist& netlist, const ToleranceSpec& spec, const FrequencyGrid& grid,
                              const Parallelism& parallelism = {});

/// Linear-interpolated quantile of an ascending-sorted sample.
double sorted_quantile(const std::vector<double>& sorted, double level);

}  // namespace rlf
