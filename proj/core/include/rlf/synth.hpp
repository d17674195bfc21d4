#pragma once

#include "rlf/netlist.hpp"

namespace rlf {

struct BandpassSpec {
    double omega_p1;  // lower transmission zero, rad/s
    double omega_p2;  // upper transmission zero, rad/s
    double z0 = 50.0;

    static BandpassSpec from_hz(double f_p1, double f_p2, double z0 = 50.0);
    void validate() const;
};

struct BandpassElements {
    double omega_s;
    double omega_x;
    double L_s;
    double L_x;
    double C_s;
    double C_x;
    double R;
};

struct LowpassElements {
    double omega_p;
    double L;
    double C;
    double R;
};

BandpassElements synth_bandpass(const BandpassSpec& spec);
LowpassElements synth_lowpass(double omega_p, double z0 = 50.0);

/// Eight inductors Ls1..Ls4, Lx1..Lx4, eight capacitors Cs1..Cs4, Cx1..Cx4 and
/// resistors R1, R2; ports P1 (node p1) and P2 (node p2). Top chain
/// p1-Ls1-t1-Cx1-t2-Ls2-t3-Cx2-p2; Cs1 || Lx1 from p1 to n1 and Lx2 || Cs2
/// from p2 to n2; Ls3-Cx3 from n1 to ground and Cx4-Ls4 from n2 to ground;
/// R1, R2 from n1, n2 to the rail; Lx3, Lx4, Cs3, Cs4 from the rail to ground.
Netlist build_bandpass_netlist(const BandpassElements& e);

/// Symmetric single-pole network: L1, L2 = L/2 in series p1-mid-p2, R1 from p1
/// and R2 from p2 to node x, and C1, C2 = C/2 from x to ground.
/// |S21| = 1/sqrt(1 + (w/wp)^2) with S11 = 0.
Netlist build_lowpass_netlist(const LowpassElements& e);

enum class ReactiveKind { Inductor, Capacitor };

struct ReactiveElement {
    ReactiveKind kind;
    double value;
};

/// Impedance-normalized dual: Z_dual(w) * Z(w) = z0^2.
ReactiveElement dual_element(const ReactiveElement& element, double z0 = 50.0);

/// Replaces every resistor by a port of reference impedance equal to its
/// value (named after the resistor, oriented from its first to its second
/// node) and evaluates the lossless (2 + Nr)-port. External ports come first.
NetworkData resistor_noise_transfer(const Netlist& netlist, const FrequencyGrid& grid);

}  // namespace rlf
