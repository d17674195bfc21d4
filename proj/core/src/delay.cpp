#include "rlf/delay.hpp"

#include "rlf/error.hpp"

#include <fmt/format.h>

#include <cmath>

namespace rlf {

namespace {

constexpr double pole_guard = 1e-12;

Complex parallel(Complex a, Complex b) { return a * b / (a + b); }

}  // namespace

void DelayModelInput::validate() const {
    if (!(lowpass.L > 0.0 && lowpass.C > 0.0 && lowpass.R > 0.0)) {
        throw InvalidArgument("delay model needs positive L, C and R");
    }
    if (!(std::isfinite(line_impedance) && line_impedance > 0.0)) {
        throw InvalidArgument(fmt::format("line impedance must be > 0, got {}", line_impedance));
    }
    if (!(std::isfinite(theta_ref) && theta_ref >= 0.0)) {
        throw InvalidArgument(fmt::format("electrical length must be >= 0, got {}", theta_ref));
    }
    if (!(std::isfinite(reference_hz) && reference_hz > 0.0)) {
        throw InvalidArgument("reference frequency must be > 0");
    }
}

ComplexSeries delay_reflection(const DelayModelInput& input, const FrequencyGrid& grid) {
    input.validate();
    const auto& lp = input.lowpass;
    const double R = lp.R;
    const Complex j(0.0, 1.0);
    ComplexSeries out(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double w = grid.omega(k);
        const double theta = input.theta_ref * grid[k] / input.reference_hz;
        const Complex zl = j * w * lp.L;
        const Complex zc = -j / (w * lp.C);

        Complex z_odd;
        Complex z_even;
        if (theta == 0.0) {
            z_odd = parallel(zl, R);
            z_even = R + zc;
        } else {
            const double s = std::sin(theta);
            const double c = std::cos(theta);
            if (std::abs(s) < pole_guard || std::abs(c) < pole_guard) {
                throw SingularError(fmt::format("line stub is on a tan/cot pole (theta = {})", theta), grid[k],
                                    "symmetry plane");
            }
            const Complex z_sc = j * input.line_impedance * (s / c);
            const Complex z_oc = -j * input.line_impedance * (c / s);
            z_odd = parallel(zl + z_sc, R + parallel(zc, z_sc));
            z_even = parallel(R + parallel(zc, z_oc), zl + z_oc);
        }
        const Complex g_odd = (z_odd - R) / (z_odd + R);
        const Complex g_even = (z_even - R) / (z_even + R);
        out[k] = 0.5 * (g_odd + g_even);
    }
    return out;
}

Netlist build_delayed_lowpass_netlist(const DelayModelInput& input) {
    input.validate();
    const auto& lp = input.lowpass;
    const TransmissionLine line{input.line_impedance, input.theta_ref, input.reference_hz};
    Netlist n("delayed_lowpass");
    for (int side = 1; side <= 2; ++side) {
        const auto p = fmt::format("p{}", side);
        const auto a = fmt::format("a{}", side);
        const auto x = fmt::format("x{}", side);
        n.add_inductor(fmt::format("L{}", side), p, a, lp.L)
            .add_resistor(fmt::format("R{}", side), p, x, lp.R)
            .add_capacitor(fmt::format("C{}", side), x, "gnd", lp.C)
            .add_line(fmt::format("TLa{}", side), a, "gnd", "m", "gnd", line)
            .add_line(fmt::format("TLb{}", side), x, "gnd", "y", "gnd", line);
    }
    n.add_port("p1", "gnd", lp.R, "P1").add_port("p2", "gnd", lp.R, "P2");
    return n;
}

}  // namespace rlf
