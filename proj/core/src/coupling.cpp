#include "rlf/coupling.hpp"

#include "rlf/connect.hpp"
#include "rlf/error.hpp"
#include "rlf/mna.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace rlf {

NetworkData series_tee(const FrequencyGrid& grid, double z0) {
    CMatrix s(3, 3);
    s << 1.0, 2.0, -2.0,
         2.0, 1.0, 2.0,
         -2.0, 2.0, 1.0;
    s /= 3.0;
    return NetworkData(grid, std::vector<CMatrix>(grid.size(), s), z0);
}

bool tee_aux_within_recommendation(double L1, double L2, double L_aux) {
    return L_aux <= 0.01 * std::min(L1, L2);
}

NetworkData coupled_tee_block(double L1, double L2, double M, double L_aux, const FrequencyGrid& grid, double z0) {
    if (!(L1 > 0.0 && L2 > 0.0)) {
        throw InvalidArgument("coupled inductors must be > 0");
    }
    if (!(std::isfinite(M) && std::isfinite(L_aux) && L_aux > std::abs(M))) {
        throw InvalidArgument(fmt::format("auxiliary inductance {} must exceed |M| = {}", L_aux, std::abs(M)));
    }
    const Complex j(0.0, 1.0);
    std::vector<CMatrix> mut(grid.size());
    const CMatrix id = CMatrix::Identity(2, 2);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        CMatrix z(2, 2);
        z << L_aux, M, M, L_aux;
        z *= j * grid.omega(k);
        mut[k] = (z - z0 * id) * (z + z0 * id).inverse();
    }
    const NetworkData mutual(grid, std::move(mut), z0);
    const auto tee = series_tee(grid, z0);
    return connect_ports(connect_ports(tee, 2, mutual, 0), 2, tee, 2);
}

std::size_t coupling_count(const MutualMatrix& mm, double threshold) {
    std::size_t n = 0;
    for (Eigen::Index i = 0; i < mm.m.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < mm.m.cols(); ++j) {
            n += (mm.m(i, j) != 0.0 && std::abs(mm.m(i, j)) >= threshold) ? 1 : 0;
        }
    }
    return n;
}

Netlist apply_mutual_couplings(const Netlist& netlist, const MutualMatrix& mm, const std::vector<int>& signs,
                               double threshold) {
    mm.validate();
    const auto names = netlist.inductor_names();
    if (signs.size() != names.size()) {
        throw InvalidArgument(fmt::format("{} winding signs for {} inductors", signs.size(), names.size()));
    }
    if (!(threshold >= 0.0)) {
        throw InvalidArgument("coupling threshold must be >= 0");
    }
    for (const auto& label : mm.labels) {
        if (std::find(names.begin(), names.end(), label) == names.end()) {
            throw InvalidArgument(fmt::format("mutual matrix label '{}' is not an inductor of the netlist", label));
        }
    }
    Netlist out = netlist;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (signs[i] != 1 && signs[i] != -1) {
            throw InvalidArgument(fmt::format("winding sign of '{}' must be +1 or -1", names[i]));
        }
        out.at(names[i]).as<Inductor>().winding_sign = signs[i];
    }
    const auto n = static_cast<Eigen::Index>(mm.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double m = mm.m(i, j);
            if (m == 0.0 || std::abs(m) < threshold) {
                continue;
            }
            const auto& a = mm.labels[static_cast<std::size_t>(i)];
            const auto& b = mm.labels[static_cast<std::size_t>(j)];
            const double la = out.at(a).as<Inductor>().henries;
            const double lb = out.at(b).as<Inductor>().henries;
            out.add_coupling(fmt::format("K_{}_{}", a, b), a, b, m / std::sqrt(la * lb));
        }
    }
    out.validate();
    return out;
}

double max_in_band_reflection(const NetworkData& n, const Band& band) {
    double worst = -1.0;
    for (std::size_t k = 0; k < n.size(); ++k) {
        if (band.contains(n.grid()[k])) {
            worst = std::max(worst, std::abs(n.s(k, 0, 0)));
        }
    }
    if (worst < 0.0) {
        throw InvalidArgument(fmt::format("no grid point inside [{}, {}] Hz", band.lo_hz, band.hi_hz));
    }
    return worst;
}

WindingSearchResult winding_search(const Netlist& netlist, const MutualMatrix& mm, const FrequencyGrid& grid,
                                   const WindingSearchOptions& options) {
    const auto names = netlist.inductor_names();
    std::vector<std::size_t> free;
    bool gauge = false;
    if (options.free_inductors.empty()) {
        for (std::size_t i = 1; i < names.size(); ++i) {
            free.push_back(i);
        }
        gauge = true;
    } else {
        for (const auto& f : options.free_inductors) {
            const auto it = std::find(names.begin(), names.end(), f);
            if (it == names.end()) {
                throw InvalidArgument(fmt::format("'{}' is not an inductor of the netlist", f));
            }
            free.push_back(static_cast<std::size_t>(it - names.begin()));
        }
    }
    if (names.empty() || free.size() > 16) {
        throw InvalidArgument(fmt::format("winding search supports 1 to 16 free inductors, got {}", free.size()));
    }

    std::vector<int> base;
    for (const auto& n : names) {
        base.push_back(netlist.at(n).as<Inductor>().winding_sign);
    }
    if (gauge) {
        base[0] = +1;
    }

    Band band{};
    if (options.objective_band) {
        band = *options.objective_band;
    } else {
        Netlist plain = netlist;
        plain.clear_couplings();
        const auto b = transmission_band(evaluate_netlist(plain, grid));
        if (!b) {
            throw InvalidArgument("no 3 dB pass band inside the grid; give an objective band");
        }
        band = *b;
    }

    const std::size_t patterns = std::size_t{1} << free.size();
    WindingSearchResult r{names, band, std::vector<WindingRecord>(patterns), 0, 0};
    EvalOptions serial;
    parallel_for(patterns, options.parallelism, [&](std::size_t p) {
        auto signs = base;
        for (std::size_t b = 0; b < free.size(); ++b) {
            const bool plus = (p >> (free.size() - 1 - b)) & 1U;
            signs[free[b]] = plus ? +1 : -1;
        }
        const auto coupled = apply_mutual_couplings(netlist, mm, signs, options.threshold);
        r.table[p] = {signs, max_in_band_reflection(evaluate_netlist(coupled, grid, serial), band)};
    });
    for (std::size_t p = 1; p < patterns; ++p) {
        if (r.table[p].objective < r.table[r.best_index].objective) {
            r.best_index = p;
        }
        if (r.table[p].objective > r.table[r.worst_index].objective) {
            r.worst_index = p;
        }
    }
    return r;
}

}  // namespace rlf
