#pragma once

#include "rlf/netlist.hpp"
#include "rlf/parallel.hpp"

namespace rlf {

struct EvalOptions {
    Parallelism parallelism{};
    /// Reciprocal condition estimate below which the nodal matrix is treated as singular.
    double singular_rcond = 1e-14;
};

/// S-parameters of `netlist` at each grid point, one port per netlist port.
///
/// Modified nodal analysis with complex admittance stamps. Coupled inductors
/// are stamped through the inverse of their inductance matrix; lines and
/// S-parameter blocks through incident-wave auxiliary unknowns so that ideal
/// thrus and zero-length lines stay representable. Throws SingularError with
/// the frequency and the node carrying the null-space when the system is
/// degenerate.
NetworkData evaluate_netlist(const Netlist& netlist, const FrequencyGrid& grid, const EvalOptions& options = {});

}  // namespace rlf
