#include "rlf/synth.hpp"

#include "rlf/error.hpp"
#include "rlf/mna.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

namespace rlf {

BandpassSpec BandpassSpec::from_hz(double f_p1, double f_p2, double z0) {
    constexpr double tau = 2.0 * std::numbers::pi;
    return BandpassSpec{tau * f_p1, tau * f_p2, z0};
}

void BandpassSpec::validate() const {
    if (!(std::isfinite(omega_p1) && std::isfinite(omega_p2) && omega_p1 > 0.0 && omega_p1 < omega_p2)) {
        throw InvalidArgument(fmt::format("transmission zeros need 0 < w_p1 < w_p2, got {} and {} rad/s", omega_p1, omega_p2));
    }
    if (!(std::isfinite(z0) && z0 > 0.0)) {
        throw InvalidArgument(fmt::format("system impedance must be > 0, got {}", z0));
    }
}

BandpassElements synth_bandpass(const BandpassSpec& spec) {
    spec.validate();
    BandpassElements e{};
    e.omega_s = spec.omega_p2 - spec.omega_p1;
    e.omega_x = spec.omega_p2 * spec.omega_p1 / (spec.omega_p2 - spec.omega_p1);
    e.L_s = spec.z0 / e.omega_s;
    e.L_x = spec.z0 / e.omega_x;
    e.C_s = 1.0 / (spec.z0 * e.omega_s);
    e.C_x = 1.0 / (spec.z0 * e.omega_x);
    e.R = spec.z0;
    return e;
}

LowpassElements synth_lowpass(double omega_p, double z0) {
    if (!(std::isfinite(omega_p) && omega_p > 0.0)) {
        throw InvalidArgument(fmt::format("cutoff must be > 0, got {} rad/s", omega_p));
    }
    if (!(std::isfinite(z0) && z0 > 0.0)) {
        throw InvalidArgument(fmt::format("system impedance must be > 0, got {}", z0));
    }
    return LowpassElements{omega_p, z0 / omega_p, 1.0 / (z0 * omega_p), z0};
}

Netlist build_bandpass_netlist(const BandpassElements& e) {
    Netlist n("bandpass");
    n.add_inductor("Ls1", "p1", "t1", e.L_s)
        .add_capacitor("Cx1", "t1", "t2", e.C_x)
        .add_inductor("Ls2", "t2", "t3", e.L_s)
        .add_capacitor("Cx2", "t3", "p2", e.C_x)
        .add_capacitor("Cs1", "p1", "n1", e.C_s)
        .add_inductor("Lx1", "p1", "n1", e.L_x)
        .add_inductor("Lx2", "p2", "n2", e.L_x)
        .add_capacitor("Cs2", "p2", "n2", e.C_s)
        .add_inductor("Ls3", "n1", "b1", e.L_s)
        .add_capacitor("Cx3", "b1", "gnd", e.C_x)
        .add_capacitor("Cx4", "n2", "b2", e.C_x)
        .add_inductor("Ls4", "b2", "gnd", e.L_s)
        .add_resistor("R1", "n1", "rail", e.R)
        .add_resistor("R2", "n2", "rail", e.R)
        .add_inductor("Lx3", "rail", "gnd", e.L_x)
        .add_inductor("Lx4", "rail", "gnd", e.L_x)
        .add_capacitor("Cs3", "rail", "gnd", e.C_s)
        .add_capacitor("Cs4", "rail", "gnd", e.C_s)
        .add_port("p1", "gnd", e.R, "P1")
        .add_port("p2", "gnd", e.R, "P2");
    return n;
}

Netlist build_lowpass_netlist(const LowpassElements& e) {
    Netlist n("lowpass");
    n.add_inductor("L1", "p1", "mid", 0.5 * e.L)
        .add_inductor("L2", "mid", "p2", 0.5 * e.L)
        .add_resistor("R1", "p1", "x", e.R)
        .add_resistor("R2", "p2", "x", e.R)
        .add_capacitor("C1", "x", "gnd", 0.5 * e.C)
        .add_capacitor("C2", "x", "gnd", 0.5 * e.C)
        .add_port("p1", "gnd", e.R, "P1")
        .add_port("p2", "gnd", e.R, "P2");
    return n;
}

ReactiveElement dual_element(const ReactiveElement& element, double z0) {
    if (!(std::isfinite(element.value) && element.value > 0.0)) {
        throw InvalidArgument(fmt::format("element value must be > 0, got {}", element.value));
    }
    if (!(std::isfinite(z0) && z0 > 0.0)) {
        throw InvalidArgument(fmt::format("system impedance must be > 0, got {}", z0));
    }
    if (element.kind == ReactiveKind::Inductor) {
        return {ReactiveKind::Capacitor, element.value / (z0 * z0)};
    }
    return {ReactiveKind::Inductor, element.value * z0 * z0};
}

NetworkData resistor_noise_transfer(const Netlist& netlist, const FrequencyGrid& grid) {
    Netlist open(netlist.name());
    std::vector<const Element*> resistors;
    for (const auto& el : netlist.elements()) {
        if (el.is<Resistor>()) {
            resistors.push_back(&el);
        } else {
            open.add_element(el);
        }
    }
    if (resistors.empty()) {
        throw InvalidArgument("netlist has no resistors");
    }
    for (const auto& p : netlist.ports()) {
        open.add_port(p.node, p.reference, p.z0, p.name);
    }
    for (const auto* r : resistors) {
        open.add_port(r->nodes[0], r->nodes[1], r->as<Resistor>().ohms, r->name);
    }
    return evaluate_netlist(open, grid);
}

}  // namespace rlf
