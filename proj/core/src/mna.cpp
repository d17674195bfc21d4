#include "rlf/mna.hpp"

#include "rlf/error.hpp"

#include <fmt/format.h>

#include <Eigen/LU>

#include <cmath>
#include <unordered_map>

namespace rlf {

namespace {

using Index = Eigen::Index;
constexpr Index kGround = -1;

struct WaveBlock {
    const Element* element;
    std::vector<Index> pos;
    std::vector<Index> neg;
    Index first_wave;  // column of the first incident-wave unknown
};

/// Frequency-independent bookkeeping shared by every grid point.
struct Layout {
    std::vector<std::string> node_names;
    std::unordered_map<std::string, Index> node_index;
    std::vector<const Element*> simple;  // R, C and uncoupled L
    std::vector<const Element*> coupled_inductors;
    std::unordered_map<std::string, Index> coupled_slot;
    std::vector<const Element*> couplings;
    std::vector<WaveBlock> blocks;
    std::vector<std::pair<Index, Index>> port_nodes;
    Index unknowns = 0;

    [[nodiscard]] Index node(const std::string& name) const {
        return Netlist::is_ground(name) ? kGround : node_index.at(name);
    }
};

Layout make_layout(const Netlist& netlist) {
    Layout lay;
    lay.node_names = netlist.nodes();
    for (std::size_t i = 0; i < lay.node_names.size(); ++i) {
        lay.node_index.emplace(lay.node_names[i], static_cast<Index>(i));
    }

    std::unordered_map<std::string, bool> is_coupled;
    for (const auto& e : netlist.elements()) {
        if (e.is<MutualCoupling>()) {
            const auto& k = e.as<MutualCoupling>();
            is_coupled[k.inductor_a] = true;
            is_coupled[k.inductor_b] = true;
            lay.couplings.push_back(&e);
        }
    }

    Index next = static_cast<Index>(lay.node_names.size());
    for (const auto& e : netlist.elements()) {
        if (e.is<Inductor>() && is_coupled.contains(e.name)) {
            lay.coupled_slot.emplace(e.name, static_cast<Index>(lay.coupled_inductors.size()));
            lay.coupled_inductors.push_back(&e);
        } else if (e.is<Resistor>() || e.is<Capacitor>() || e.is<Inductor>()) {
            lay.simple.push_back(&e);
        } else if (e.is<TransmissionLine>() || e.is<SParamBlock>()) {
            WaveBlock b{&e, {}, {}, next};
            for (std::size_t p = 0; p + 1 < e.nodes.size(); p += 2) {
                b.pos.push_back(lay.node(e.nodes[p]));
                b.neg.push_back(lay.node(e.nodes[p + 1]));
            }
            next += static_cast<Index>(b.pos.size());
            lay.blocks.push_back(std::move(b));
        }
    }
    lay.unknowns = next;
    for (const auto& p : netlist.ports()) {
        lay.port_nodes.emplace_back(lay.node(p.node), lay.node(p.reference));
    }
    return lay;
}

void stamp_admittance(CMatrix& a, Index i, Index j, Complex y) {
    if (i != kGround) {
        a(i, i) += y;
    }
    if (j != kGround) {
        a(j, j) += y;
    }
    if (i != kGround && j != kGround) {
        a(i, j) -= y;
        a(j, i) -= y;
    }
}

CMatrix block_matrix_at(const Element& e, double hz, std::vector<double>& z0) {
    if (e.is<TransmissionLine>()) {
        const auto& line = e.as<TransmissionLine>();
        const Complex t = std::polar(1.0, -line.theta_at(hz));
        CMatrix s(2, 2);
        s << 0.0, t, t, 0.0;
        z0.assign(2, line.impedance);
        return s;
    }
    const auto& data = e.as<SParamBlock>().data;
    const auto& g = data.grid();
    const std::size_t k = g.nearest(hz);
    if (std::abs(g[k] - hz) > 1e-9 * hz) {
        throw InvalidArgument(fmt::format("S-parameter block '{}' has no data at {} Hz", e.name, hz));
    }
    z0.assign(data.z0().begin(), data.z0().end());
    return data.s(k);
}

CMatrix solve_point(const Netlist& netlist, const Layout& lay, double hz, const EvalOptions& options) {
    const double omega = 2.0 * std::numbers::pi * hz;
    const Complex jw(0.0, omega);
    const Index n = lay.unknowns;
    CMatrix a = CMatrix::Zero(n, n);

    for (const Element* e : lay.simple) {
        const Index i = lay.node(e->nodes[0]);
        const Index j = lay.node(e->nodes[1]);
        Complex y;
        if (e->is<Resistor>()) {
            y = 1.0 / e->as<Resistor>().ohms;
        } else if (e->is<Capacitor>()) {
            y = jw * e->as<Capacitor>().farads;
        } else {
            y = 1.0 / (jw * e->as<Inductor>().henries);
        }
        stamp_admittance(a, i, j, y);
    }

    if (!lay.coupled_inductors.empty()) {
        const auto m = static_cast<Index>(lay.coupled_inductors.size());
        CMatrix l = CMatrix::Zero(m, m);
        for (Index i = 0; i < m; ++i) {
            l(i, i) = lay.coupled_inductors[static_cast<std::size_t>(i)]->as<Inductor>().henries;
        }
        for (const Element* c : lay.couplings) {
            const auto& k = c->as<MutualCoupling>();
            const Index ia = lay.coupled_slot.at(k.inductor_a);
            const Index ib = lay.coupled_slot.at(k.inductor_b);
            const auto& la = netlist.at(k.inductor_a).as<Inductor>();
            const auto& lb = netlist.at(k.inductor_b).as<Inductor>();
            const double mutual = k.k * la.winding_sign * lb.winding_sign * std::sqrt(la.henries * lb.henries);
            l(ia, ib) += mutual;
            l(ib, ia) += mutual;
        }
        Eigen::PartialPivLU<CMatrix> lu(jw * l);
        if (!(lu.rcond() > options.singular_rcond)) {
            throw SingularError(fmt::format("inductance matrix is singular at {} Hz", hz), hz);
        }
        const CMatrix yb = lu.inverse();
        // Node incidence of each coupled inductor: +1 at its first node, -1 at its second.
        for (Index p = 0; p < m; ++p) {
            const auto& ep = *lay.coupled_inductors[static_cast<std::size_t>(p)];
            const Index pn[2] = {lay.node(ep.nodes[0]), lay.node(ep.nodes[1])};
            for (Index q = 0; q < m; ++q) {
                const auto& eq = *lay.coupled_inductors[static_cast<std::size_t>(q)];
                const Index qn[2] = {lay.node(eq.nodes[0]), lay.node(eq.nodes[1])};
                for (int r = 0; r < 2; ++r) {
                    for (int c = 0; c < 2; ++c) {
                        if (pn[r] != kGround && qn[c] != kGround) {
                            const double sign = (r == c) ? 1.0 : -1.0;
                            a(pn[r], qn[c]) += sign * yb(p, q);
                        }
                    }
                }
            }
        }
    }

    std::vector<double> bz0;
    for (const auto& b : lay.blocks) {
        const CMatrix s = block_matrix_at(*b.element, hz, bz0);
        const auto np = static_cast<Index>(b.pos.size());
        for (Index p = 0; p < np; ++p) {
            const double rz = std::sqrt(bz0[static_cast<std::size_t>(p)]);
            const Index row = b.first_wave + p;
            const Index pos = b.pos[static_cast<std::size_t>(p)];
            const Index neg = b.neg[static_cast<std::size_t>(p)];
            // Current into the block at port p: sum_q (delta_pq - S_pq) a_q / sqrt(z0_p).
            for (Index q = 0; q < np; ++q) {
                const Complex current = ((p == q ? 1.0 : 0.0) - s(p, q)) / rz;
                if (pos != kGround) {
                    a(pos, b.first_wave + q) += current;
                }
                if (neg != kGround) {
                    a(neg, b.first_wave + q) -= current;
                }
                // Port voltage: V_pos - V_neg = sqrt(z0_p) sum_q (delta_pq + S_pq) a_q.
                a(row, b.first_wave + q) -= rz * ((p == q ? 1.0 : 0.0) + s(p, q));
            }
            if (pos != kGround) {
                a(row, pos) += 1.0;
            }
            if (neg != kGround) {
                a(row, neg) -= 1.0;
            }
        }
    }

    const auto& ports = netlist.ports();
    const auto np = static_cast<Index>(ports.size());
    CMatrix rhs = CMatrix::Zero(n, np);
    for (Index k = 0; k < np; ++k) {
        const auto [pos, neg] = lay.port_nodes[static_cast<std::size_t>(k)];
        const double g = 1.0 / ports[static_cast<std::size_t>(k)].z0;
        stamp_admittance(a, pos, neg, g);
        // Norton form of a unit EMF behind z0.
        if (pos != kGround) {
            rhs(pos, k) += g;
        }
        if (neg != kGround) {
            rhs(neg, k) -= g;
        }
    }

    Eigen::PartialPivLU<CMatrix> lu(a);
    CMatrix v;
    bool singular = !(lu.rcond() > options.singular_rcond);
    if (!singular) {
        v = lu.solve(rhs);
        singular = !v.allFinite();
    }
    if (singular) {
        Eigen::FullPivLU<CMatrix> full(a);
        std::string where = "unknown";
        const CMatrix kernel = full.kernel();
        if (kernel.cols() > 0 && kernel.rows() == n) {
            Index best = 0;
            kernel.col(0).cwiseAbs().maxCoeff(&best);
            if (best < static_cast<Index>(lay.node_names.size())) {
                where = "node " + lay.node_names[static_cast<std::size_t>(best)];
            } else {
                for (const auto& b : lay.blocks) {
                    if (best >= b.first_wave && best < b.first_wave + static_cast<Index>(b.pos.size())) {
                        where = "element " + b.element->name;
                    }
                }
            }
        }
        throw SingularError(fmt::format("nodal matrix is singular at {} Hz ({})", hz, where), hz, where);
    }

    CMatrix s(np, np);
    for (Index k = 0; k < np; ++k) {
        const double zk = ports[static_cast<std::size_t>(k)].z0;
        for (Index j = 0; j < np; ++j) {
            const auto [pos, neg] = lay.port_nodes[static_cast<std::size_t>(j)];
            const Complex vp = pos == kGround ? Complex{} : v(pos, k);
            const Complex vn = neg == kGround ? Complex{} : v(neg, k);
            const double zj = ports[static_cast<std::size_t>(j)].z0;
            s(j, k) = 2.0 * (vp - vn) * std::sqrt(zk / zj) - (j == k ? 1.0 : 0.0);
        }
    }
    return s;
}

}  // namespace

NetworkData evaluate_netlist(const Netlist& netlist, const FrequencyGrid& grid, const EvalOptions& options) {
    netlist.validate();
    const Layout lay = make_layout(netlist);
    std::vector<CMatrix> out(grid.size());
    parallel_for(grid.size(), options.parallelism,
                 [&](std::size_t k) { out[k] = solve_point(netlist, lay, grid[k], options); });
    std::vector<double> z0;
    z0.reserve(netlist.ports().size());
    for (const auto& p : netlist.ports()) {
        z0.push_back(p.z0);
    }
    return NetworkData(grid, std::move(out), std::move(z0));
}

}  // namespace rlf
