#include "rlf/connect.hpp"

#include "rlf/error.hpp"

#include <fmt/format.h>

#include <Eigen/LU>

#include <cmath>

namespace rlf {

namespace {

using Index = Eigen::Index;

void require_same_grid(const NetworkData& a, const NetworkData& b) {
    if (!a.grid().matches(b.grid())) {
        throw InvalidArgument("networks are defined on different frequency grids");
    }
}

void require_port(const NetworkData& n, std::size_t port, const char* which) {
    if (port >= n.ports()) {
        throw InvalidArgument(fmt::format("{} port index {} out of range for a {}-port", which, port, n.ports()));
    }
}

}  // namespace

NetworkData parallel_combine(const NetworkData& a, const NetworkData& b) {
    require_same_grid(a, b);
    const auto na = static_cast<Index>(a.ports());
    const auto nb = static_cast<Index>(b.ports());
    std::vector<CMatrix> s(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        s[k] = CMatrix::Zero(na + nb, na + nb);
        s[k].topLeftCorner(na, na) = a.s(k);
        s[k].bottomRightCorner(nb, nb) = b.s(k);
    }
    std::vector<double> z0(a.z0().begin(), a.z0().end());
    z0.insert(z0.end(), b.z0().begin(), b.z0().end());
    return NetworkData(a.grid(), std::move(s), std::move(z0));
}

NetworkData self_connect(const NetworkData& a, std::size_t port_i, std::size_t port_j) {
    require_port(a, port_i, "first");
    require_port(a, port_j, "second");
    if (port_i == port_j) {
        throw InvalidArgument("cannot connect a port to itself");
    }
    if (std::abs(a.z0(port_i) - a.z0(port_j)) > 1e-12 * a.z0(port_i)) {
        throw InvalidArgument(fmt::format("reference impedances differ at joined ports ({} vs {} ohm)", a.z0(port_i),
                                          a.z0(port_j)));
    }
    const auto n = static_cast<Index>(a.ports());
    if (n < 2) {
        throw InvalidArgument("self_connect needs at least two ports");
    }
    std::vector<Index> keep;
    for (Index p = 0; p < n; ++p) {
        if (p != static_cast<Index>(port_i) && p != static_cast<Index>(port_j)) {
            keep.push_back(p);
        }
    }
    const Index inner[2] = {static_cast<Index>(port_i), static_cast<Index>(port_j)};
    const auto ne = static_cast<Index>(keep.size());

    // With a_I = P b_I (P swaps the two joined ports):
    // S' = S_EE + S_EI (I - P S_II)^-1 P S_IE.
    std::vector<CMatrix> out(a.size());
    CMatrix perm(2, 2);
    perm << 0.0, 1.0, 1.0, 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const CMatrix& s = a.s(k);
        CMatrix see(ne, ne), sei(ne, 2), sie(2, ne), sii(2, 2);
        for (Index r = 0; r < ne; ++r) {
            for (Index c = 0; c < ne; ++c) {
                see(r, c) = s(keep[r], keep[c]);
            }
            for (Index c = 0; c < 2; ++c) {
                sei(r, c) = s(keep[r], inner[c]);
                sie(c, r) = s(inner[c], keep[r]);
            }
        }
        for (Index r = 0; r < 2; ++r) {
            for (Index c = 0; c < 2; ++c) {
                sii(r, c) = s(inner[r], inner[c]);
            }
        }
        const CMatrix m = CMatrix::Identity(2, 2) - perm * sii;
        Eigen::PartialPivLU<CMatrix> lu(m);
        if (!(lu.rcond() > 1e-13)) {
            throw SingularError(fmt::format("connection of ports {} and {} is resonant-singular at {} Hz", port_i + 1,
                                            port_j + 1, a.grid()[k]),
                                a.grid()[k]);
        }
        out[k] = see + sei * lu.solve(perm * sie);
    }
    std::vector<double> z0;
    for (Index p : keep) {
        z0.push_back(a.z0(static_cast<std::size_t>(p)));
    }
    if (z0.empty()) {
        throw InvalidArgument("connection leaves no external ports");
    }
    return NetworkData(a.grid(), std::move(out), std::move(z0));
}

NetworkData connect_ports(const NetworkData& a, std::size_t port_a, const NetworkData& b, std::size_t port_b) {
    require_same_grid(a, b);
    require_port(a, port_a, "first network");
    require_port(b, port_b, "second network");
    if (std::abs(a.z0(port_a) - b.z0(port_b)) > 1e-12 * a.z0(port_a)) {
        throw InvalidArgument(fmt::format("reference impedances differ at joined ports ({} vs {} ohm)", a.z0(port_a),
                                          b.z0(port_b)));
    }
    return self_connect(parallel_combine(a, b), port_a, a.ports() + port_b);
}

NetworkData cascade(const NetworkData& a, const NetworkData& b) {
    if (a.ports() != 2 || b.ports() != 2) {
        throw InvalidArgument("cascade expects two two-ports");
    }
    return connect_ports(a, 1, b, 0);
}

NetworkData terminate(const NetworkData& a, std::size_t port, const ComplexSeries& gamma_load) {
    require_port(a, port, "terminated");
    if (gamma_load.size() != a.size()) {
        throw InvalidArgument("termination series length does not match grid");
    }
    return connect_ports(a, port, one_port(a.grid(), gamma_load, a.z0(port)), 0);
}

}  // namespace rlf
