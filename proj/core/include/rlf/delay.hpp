#pragma once

#include "rlf/netlist.hpp"
#include "rlf/synth.hpp"

namespace rlf {

/// Single-pole half-circuits with the symmetry plane replaced by lines of
/// impedance line_impedance and electrical length theta_ref at reference_hz
/// (scaled linearly with frequency). L, C and R are used as given in each half.
struct DelayModelInput {
    LowpassElements lowpass;
    double line_impedance = 50.0;
    double theta_ref = 0.0;
    double reference_hz = 1e9;

    void validate() const;
};

/// Differential-mode reflection (G_odd + G_even)/2 of the delayed network.
/// theta = 0 uses the exact short/open limits. Throws SingularError when a
/// nonzero electrical length puts tan or cot on a pole at a grid point.
ComplexSeries delay_reflection(const DelayModelInput& input, const FrequencyGrid& grid);

/// Explicit-line version of the same network for cross-checking: on each side
/// L from the port to node a, R from the port to node x and C from x to
/// ground, with ground-referenced lines a1-m, a2-m, x1-y and x2-y.
Netlist build_delayed_lowpass_netlist(const DelayModelInput& input);

}  // namespace rlf
