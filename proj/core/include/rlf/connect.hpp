#pragma once

#include "rlf/network.hpp"

#include <cstddef>

namespace rlf {

/// Joins port `port_a` of `a` to port `port_b` of `b`.
///
/// The result has a.ports() + b.ports() - 2 ports: a's remaining ports in
/// order, then b's remaining ports in order.
NetworkData connect_ports(const NetworkData& a, std::size_t port_a, const NetworkData& b, std::size_t port_b);

/// Joins two ports of the same network; the remaining ports keep their order.
NetworkData self_connect(const NetworkData& a, std::size_t port_i, std::size_t port_j);

/// Stacks two networks side by side (a's ports first) without connecting them.
NetworkData parallel_combine(const NetworkData& a, const NetworkData& b);

/// Two-port cascade: a's port 2 into b's port 1.
NetworkData cascade(const NetworkData& a, const NetworkData& b);

/// Terminates `port` with the load reflection `gamma_load` (per frequency).
NetworkData terminate(const NetworkData& a, std::size_t port, const ComplexSeries& gamma_load);

}  // namespace rlf
