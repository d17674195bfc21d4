#include "rlf/optimize.hpp"

#include "rlf/error.hpp"
#include "rlf/mna.hpp"
#include "rlf/rng.hpp"

#include <fmt/format.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace rlf {

namespace {

double& element_value(Element& e) {
    if (e.is<Inductor>()) {
        return e.as<Inductor>().henries;
    }
    if (e.is<Capacitor>()) {
        return e.as<Capacitor>().farads;
    }
    if (e.is<Resistor>()) {
        return e.as<Resistor>().ohms;
    }
    throw InvalidArgument(fmt::format("element '{}' has no tunable value", e.name));
}

double objective_of(const std::vector<double>& r) {
    double s = 0.0;
    for (double x : r) {
        s += x * x;
    }
    return 0.5 * s;
}

double max_abs(const std::vector<double>& r) {
    double m = 0.0;
    for (double x : r) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

struct Run {
    std::vector<double> u;
    std::vector<double> r;
    std::vector<double> trace;
    SolveStatus status = SolveStatus::Stalled;
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
};

class Solver {
public:
    Solver(const OptimizationProblem& problem, const SolverConfig& config) : problem_(problem), config_(config) {
        for (const auto& fp : problem.parameters) {
            lo_.push_back(std::log(fp.lower));
            hi_.push_back(std::log(fp.upper));
        }
    }

    std::vector<double> to_p(const std::vector<double>& u) const {
        std::vector<double> p(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) {
            p[i] = std::clamp(std::exp(u[i]), problem_.parameters[i].lower, problem_.parameters[i].upper);
        }
        return p;
    }

    std::vector<double> eval(const std::vector<double>& u, std::size_t& count) const {
        ++count;
        return residuals(to_p(u), problem_, config_.parallelism);
    }

    Run run(std::vector<double> u) const {
        const auto n = static_cast<Eigen::Index>(u.size());
        Run out;
        out.u = std::move(u);
        out.r = eval(out.u, out.evaluations);
        double f = objective_of(out.r);
        out.trace.push_back(f);
        double lambda = 1e-3;
        if (f == 0.0) {
            out.status = SolveStatus::Converged;
            return out;
        }
        while (out.iterations < config_.max_iterations) {
            const auto jac = log_jacobian(to_p(out.u), problem_, config_.parallelism);
            out.evaluations += static_cast<std::size_t>(n);
            const auto m = static_cast<Eigen::Index>(out.r.size());
            Eigen::MatrixXd J(m, n);
            Eigen::VectorXd r(m);
            for (Eigen::Index i = 0; i < m; ++i) {
                r(i) = out.r[static_cast<std::size_t>(i)];
                for (Eigen::Index c = 0; c < n; ++c) {
                    J(i, c) = jac[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)];
                }
            }
            const Eigen::MatrixXd JtJ = J.transpose() * J;
            const Eigen::VectorXd g = J.transpose() * r;

            bool accepted = false;
            while (lambda < 1e16) {
                Eigen::MatrixXd A = JtJ;
                for (Eigen::Index i = 0; i < n; ++i) {
                    A(i, i) += lambda * std::max(JtJ(i, i), 1e-12);
                }
                const Eigen::VectorXd step = A.ldlt().solve(-g);
                std::vector<double> trial(out.u);
                double moved = 0.0;
                for (Eigen::Index i = 0; i < n; ++i) {
                    const auto s = static_cast<std::size_t>(i);
                    trial[s] = std::clamp(out.u[s] + step(i), lo_[s], hi_[s]);
                    moved = std::max(moved, std::abs(trial[s] - out.u[s]));
                }
                if (!step.allFinite() || moved == 0.0) {
                    lambda *= 4.0;
                    continue;
                }
                auto rt = eval(trial, out.evaluations);
                const double ft = objective_of(rt);
                if (ft < f) {
                    const double drop = f - ft;
                    out.u = std::move(trial);
                    out.r = std::move(rt);
                    f = ft;
                    out.trace.push_back(f);
                    lambda = std::max(lambda / 3.0, 1e-12);
                    accepted = true;
                    ++out.iterations;
                    if (f == 0.0 || drop <= config_.tolerance * std::max(f + drop, 1e-300) ||
                        moved <= config_.tolerance) {
                        out.status = SolveStatus::Converged;
                        return out;
                    }
                    break;
                }
                lambda *= 4.0;
            }
            if (!accepted) {
                // No descent direction at any damping: a stationary point of the projected problem.
                out.status = SolveStatus::Converged;
                return out;
            }
        }
        out.status = SolveStatus::MaxIterations;
        return out;
    }

    const std::vector<double>& lo() const { return lo_; }
    const std::vector<double>& hi() const { return hi_; }

private:
    const OptimizationProblem& problem_;
    const SolverConfig& config_;
    std::vector<double> lo_;
    std::vector<double> hi_;
};

double quantity_db(const NetworkData& n, std::size_t k, Quantity q) {
    switch (q) {
    case Quantity::S11_db:
        return to_db(n.s(k, 0, 0));
    case Quantity::S21_db:
        return to_db(n.s(k, 1, 0));
    case Quantity::S22_db:
        return to_db(n.s(k, 1, 1));
    }
    return 0.0;
}

// Finite stand-in for 20 log10(0).
constexpr double floor_db = -400.0;

}  // namespace

const char* to_string(SolveStatus s) {
    switch (s) {
    case SolveStatus::Converged:
        return "converged";
    case SolveStatus::MaxIterations:
        return "max_iterations";
    case SolveStatus::Stalled:
        return "stalled";
    }
    return "stalled";
}

const char* to_string(Quantity q) {
    switch (q) {
    case Quantity::S11_db:
        return "S11_db";
    case Quantity::S21_db:
        return "S21_db";
    case Quantity::S22_db:
        return "S22_db";
    }
    return "S11_db";
}

const char* to_string(Sense s) {
    switch (s) {
    case Sense::AtMost:
        return "<=";
    case Sense::AtLeast:
        return ">=";
    case Sense::Equal:
        return "=";
    }
    return "<=";
}

void OptimizationProblem::validate() const {
    netlist.validate();
    if (netlist.ports().size() < 2) {
        throw InvalidArgument("optimization needs a two-port netlist");
    }
    if (parameters.empty()) {
        throw InvalidArgument("optimization needs at least one free parameter");
    }
    if (targets.empty()) {
        throw InvalidArgument("optimization needs at least one target");
    }
    for (const auto& fp : parameters) {
        if (!(std::isfinite(fp.lower) && std::isfinite(fp.upper) && fp.lower > 0.0 && fp.lower < fp.upper)) {
            throw InvalidArgument(fmt::format("parameter '{}' needs finite bounds 0 < lower < upper", fp.name));
        }
        if (!(std::isfinite(fp.unit) && fp.unit > 0.0)) {
            throw InvalidArgument(fmt::format("parameter '{}' unit must be > 0", fp.name));
        }
        if (fp.elements.empty()) {
            throw InvalidArgument(fmt::format("parameter '{}' references no elements", fp.name));
        }
        for (const auto& name : fp.elements) {
            const auto* e = netlist.find(name);
            if (e == nullptr || !(e->is<Inductor>() || e->is<Capacitor>() || e->is<Resistor>())) {
                throw InvalidArgument(fmt::format("parameter '{}' references '{}', which is not an R, L or C", fp.name, name));
            }
        }
    }
    for (const auto& t : targets) {
        if (!(t.band.lo_hz <= t.band.hi_hz) || !(t.weight >= 0.0) || !std::isfinite(t.goal)) {
            throw InvalidArgument("target needs lo <= hi, weight >= 0 and a finite goal");
        }
        if (std::none_of(grid.points().begin(), grid.points().end(), [&](double f) { return t.band.contains(f); })) {
            throw InvalidArgument(fmt::format("target band [{}, {}] Hz holds no grid point", t.band.lo_hz, t.band.hi_hz));
        }
    }
}

Netlist OptimizationProblem::apply(const std::vector<double>& p) const {
    if (p.size() != parameters.size()) {
        throw InvalidArgument(fmt::format("{} values for {} parameters", p.size(), parameters.size()));
    }
    Netlist out = netlist;
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (const auto& name : parameters[i].elements) {
            element_value(out.at(name)) = p[i] * parameters[i].unit;
        }
    }
    return out;
}

std::vector<double> OptimizationProblem::current_point() const {
    std::vector<double> p;
    for (const auto& fp : parameters) {
        Netlist copy = netlist;
        p.push_back(element_value(copy.at(fp.elements.front())) / fp.unit);
    }
    return p;
}

std::vector<double> residuals(const std::vector<double>& p, const OptimizationProblem& problem,
                              const Parallelism& parallelism) {
    for (std::size_t i = 0; i < p.size() && i < problem.parameters.size(); ++i) {
        const auto& fp = problem.parameters[i];
        if (!(p[i] >= fp.lower && p[i] <= fp.upper)) {
            throw InvalidArgument(fmt::format("parameter '{}' = {} is outside [{}, {}]", fp.name, p[i], fp.lower, fp.upper));
        }
    }
    const auto n = evaluate_netlist(problem.apply(p), problem.grid, EvalOptions{parallelism});
    std::vector<double> r;
    for (const auto& t : problem.targets) {
        for (std::size_t k = 0; k < n.size(); ++k) {
            if (!t.band.contains(n.grid()[k])) {
                continue;
            }
            const double v = std::max(quantity_db(n, k, t.quantity), floor_db);
            double e = 0.0;
            switch (t.sense) {
            case Sense::AtMost:
                e = std::max(0.0, v - t.goal);
                break;
            case Sense::AtLeast:
                e = std::max(0.0, t.goal - v);
                break;
            case Sense::Equal:
                e = v - t.goal;
                break;
            }
            r.push_back(t.weight * e);
        }
    }
    return r;
}

std::vector<std::vector<double>> log_jacobian(const std::vector<double>& p, const OptimizationProblem& problem,
                                              const Parallelism& parallelism) {
    const auto r0 = residuals(p, problem);
    std::vector<std::vector<double>> cols(p.size());
    parallel_for(p.size(), parallelism, [&](std::size_t i) {
        const double u = std::log(p[i]);
        const double h = 1e-6 * std::max(std::abs(u), 1.0);
        auto q = p;
        const auto& fp = problem.parameters[i];
        double up = std::exp(u + h);
        double sign = 1.0;
        if (up > fp.upper) {
            up = std::exp(u - h);
            sign = -1.0;
        }
        q[i] = up;
        const auto r1 = residuals(q, problem);
        cols[i].resize(r0.size());
        for (std::size_t k = 0; k < r0.size(); ++k) {
            cols[i][k] = sign * (r1[k] - r0[k]) / h;
        }
    });
    return cols;
}

SolveResult solve(const OptimizationProblem& problem, const SolverConfig& config) {
    problem.validate();
    const Solver solver(problem, config);
    std::vector<double> p0 = config.initial.empty() ? problem.current_point() : config.initial;
    if (p0.size() != problem.parameters.size()) {
        throw InvalidArgument(fmt::format("initial point has {} values for {} parameters", p0.size(), problem.parameters.size()));
    }
    std::vector<double> u0;
    for (std::size_t i = 0; i < p0.size(); ++i) {
        const auto& fp = problem.parameters[i];
        if (!(p0[i] >= fp.lower && p0[i] <= fp.upper)) {
            throw InvalidArgument(fmt::format("initial value {} of '{}' is outside [{}, {}]", p0[i], fp.name, fp.lower, fp.upper));
        }
        u0.push_back(std::log(p0[i]));
    }

    Run best = solver.run(u0);
    std::size_t evaluations = best.evaluations;
    for (std::size_t s = 0; s < config.restarts; ++s) {
        TrialRng rng(config.seed, s);
        std::vector<double> u(u0.size());
        for (std::size_t i = 0; i < u.size(); ++i) {
            u[i] = rng.uniform(solver.lo()[i], solver.hi()[i]);
        }
        Run r = solver.run(u);
        evaluations += r.evaluations;
        if (objective_of(r.r) < objective_of(best.r)) {
            best = std::move(r);
        }
    }

    SolveResult out;
    out.p = solver.to_p(best.u);
    out.trace = best.trace;
    out.objective = objective_of(best.r);
    out.max_residual = max_abs(best.r);
    out.status = best.status;
    out.converged = best.status == SolveStatus::Converged;
    out.targets_met = out.max_residual <= config.target_tolerance;
    out.iterations = best.iterations;
    out.evaluations = evaluations;
    return out;
}

}  // namespace rlf
