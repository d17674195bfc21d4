#pragma once

#include "rlf/metrics.hpp"
#include "rlf/netlist.hpp"
#include "rlf/neumann.hpp"
#include "rlf/parallel.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rlf {

/// Three-port series junction: ports 1 and 2 are node A and node B against
/// ground, port 3 sits between B (+) and A (-). Shorting port 3 joins A to B.
NetworkData series_tee(const FrequencyGrid& grid, double z0 = 50.0);

/// Four-port (A1, A2, B1, B2) of two series tees whose third ports are tied
/// by the mutual two-port Z = jw [[L_aux, M], [M, L_aux]] (tee arms L_aux - M,
/// shunt M). Inserted in series with two inductors reduced by L_aux, it
/// reproduces their coupling through M. Requires L_aux > |M|.
NetworkData coupled_tee_block(double L1, double L2, double M, double L_aux, const FrequencyGrid& grid,
                              double z0 = 50.0);

/// True when L_aux <= 0.01 * min(L1, L2), the range where inserting the block
/// barely perturbs the host inductors.
[[nodiscard]] bool tee_aux_within_recommendation(double L1, double L2, double L_aux);

/// Sets winding signs (one per netlist inductor, in netlist order) and adds a
/// coupling k = M / sqrt(Li Lj) for every nonzero pair with |M| >= threshold.
/// The evaluator multiplies each coupling by sign_i * sign_j.
Netlist apply_mutual_couplings(const Netlist& netlist, const MutualMatrix& mm, const std::vector<int>& signs,
                               double threshold = 0.0);

/// Number of pairs apply_mutual_couplings would add at `threshold`.
std::size_t coupling_count(const MutualMatrix& mm, double threshold);

struct WindingSearchOptions {
    /// Band for the max |S11| objective; defaults to the 3 dB transmission
    /// band of the uncoupled netlist.
    std::optional<Band> objective_band;
    double threshold = 0.0;
    /// Inductors whose signs are searched; empty means all of them, with the
    /// first fixed at +1 because a global flip leaves every product unchanged.
    std::vector<std::string> free_inductors;
    Parallelism parallelism{};
};

struct WindingRecord {
    std::vector<int> signs;  // one per netlist inductor
    double objective;        // max in-band |S11|
};

struct WindingSearchResult {
    std::vector<std::string> inductors;
    Band band;
    std::vector<WindingRecord> table;  // lexicographic order, -1 before +1
    std::size_t best_index;
    std::size_t worst_index;

    [[nodiscard]] const WindingRecord& best() const { return table[best_index]; }
    [[nodiscard]] const WindingRecord& worst() const { return table[worst_index]; }
};

/// Exhaustive search over winding-sign patterns. Ties go to the earliest pattern.
WindingSearchResult winding_search(const Netlist& netlist, const MutualMatrix& mm, const FrequencyGrid& grid,
                                   const WindingSearchOptions& options = {});

/// max |S11| over the grid points inside `band`.
double max_in_band_reflection(const NetworkData& n, const Band& band);

}  // namespace rlf
