#pragma once

#include "rlf/metrics.hpp"
#include "rlf/netlist.hpp"
#include "rlf/parallel.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rlf {

/// One optimization variable. Every listed element takes the value
/// p * unit, where p is bounded by [lower, upper] (> 0).
struct FreeParameter {
    std::string name;
    std::vector<std::string> elements;
    double lower;
    double upper;
    double unit = 1.0;
};

enum class Quantity { S11_db, S21_db, S22_db };
enum class Sense { AtMost, AtLeast, Equal };

struct Target {
    Band band;
    Quantity quantity;
    double goal;
    double weight = 1.0;
    Sense sense = Sense::AtMost;
};

struct OptimizationProblem {
    Netlist netlist;
    std::vector<FreeParameter> parameters;
    std::vector<Target> targets;
    FrequencyGrid grid;

    void validate() const;
    /// Netlist with parameter vector `p` (in parameter units) applied.
    [[nodiscard]] Netlist apply(const std::vector<double>& p) const;
    /// Current element values expressed in parameter units (first listed element).
    [[nodiscard]] std::vector<double> current_point() const;
};

/// One entry per (target, grid point in band): weight * max(0, violation)
/// for inequalities and weight * (value - goal) for equalities, ordered by
/// target then frequency.
std::vector<double> residuals(const std::vector<double>& p, const OptimizationProblem& problem,
                              const Parallelism& parallelism = {});

struct SolverConfig {
    std::size_t max_iterations = 100;
    double tolerance = 1e-10;          // relative objective change and log-space step
    double target_tolerance = 1e-9;    // max |residual| counted as "targets met"
    std::vector<double> initial;       // empty: current netlist values
    std::size_t restarts = 0;          // extra seeded random starts inside the bounds
    std::uint64_t seed = 1;
    Parallelism parallelism{};
};

enum class SolveStatus { Converged, MaxIterations, Stalled };

struct SolveResult {
    std::vector<double> p;
    std::vector<double> trace;  // 0.5 * |r|^2 after each accepted iteration, starting point first
    double objective = 0.0;
    double max_residual = 0.0;
    bool converged = false;
    bool targets_met = false;
    SolveStatus status = SolveStatus::Stalled;
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
};

/// Bound-constrained least squares: Levenberg-Marquardt on log(p) with
/// projection onto the bounds and a forward-difference Jacobian (step 1e-6
/// relative in log space). The objective trace never increases.
SolveResult solve(const OptimizationProblem& problem, const SolverConfig& config = {});

/// Forward-difference Jacobian of the residuals with respect to log(p).
std::vector<std::vector<double>> log_jacobian(const std::vector<double>& p, const OptimizationProblem& problem,
                                              const Parallelism& parallelism = {});

const char* to_string(SolveStatus s);
const char* to_string(Quantity q);
const char* to_string(Sense s);

}  // namespace rlf
