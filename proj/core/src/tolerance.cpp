#include "rlf/tolerance.hpp"

#include "rlf/error.hpp"
#include "rlf/mna.hpp"
#include "rlf/rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace rlf {

ToleranceSpec ToleranceSpec::common(double fraction, std::size_t trials, std::uint64_t seed) {
    ToleranceSpec s;
    s.common_inductor_fraction = s.common_capacitor_fraction = fraction;
    s.trials = trials;
    s.seed = seed;
    return s;
}

void ToleranceSpec::validate() const {
    for (double f : {common_inductor_fraction, common_capacitor_fraction, independent_fraction, resistor_fraction}) {
        if (!(f >= 0.0 && f < 0.5)) {
            throw InvalidArgument(fmt::format("tolerance fraction {} must be in [0, 0.5)", f));
        }
    }
    if (trials < 1) {
        throw InvalidArgument("tolerance analysis needs at least one trial");
    }
}

double sorted_quantile(const std::vector<double>& sorted, double level) {
    if (sorted.empty()) {
        throw InvalidArgument("quantile of an empty sample");
    }
    const double pos = level * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double t = pos - static_cast<double>(lo);
    return sorted[lo] + t * (sorted[hi] - sorted[lo]);
}

Netlist perturb_netlist(const Netlist& netlist, const ToleranceSpec& spec, std::size_t trial) {
    TrialRng rng(spec.seed, trial);
    const double common_l = 1.0 + rng.symmetric(spec.common_inductor_fraction);
    const double common_c = 1.0 + rng.symmetric(spec.common_capacitor_fraction);
    Netlist out = netlist;
    for (auto& e : out.elements()) {
        const double u = rng.symmetric(1.0);
        if (e.is<Inductor>()) {
            e.as<Inductor>().henries *= common_l * (1.0 + u * spec.independent_fraction);
        } else if (e.is<Capacitor>()) {
            e.as<Capacitor>().farads *= common_c * (1.0 + u * spec.independent_fraction);
        } else if (e.is<Resistor>()) {
            e.as<Resistor>().ohms *= 1.0 + u * spec.resistor_fraction;
        }
    }
    return out;
}

double ToleranceSummary::worst_return_loss_db(const Band& band) const {
    double worst = -1.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (band.contains(grid[k])) {
            worst = std::max(worst, s11_max[k]);
        }
    }
    if (worst < 0.0) {
        throw InvalidArgument("no grid point inside the band");
    }
    return -to_db(worst);
}

ToleranceSummary tolerance_mc(const Netlist& netlist, const ToleranceSpec& spec, const FrequencyGrid& grid,
                              const Parallelism& parallelism) {
    spec.validate();
    if (netlist.ports().size() < 2) {
        throw InvalidArgument("tolerance analysis needs a two-port netlist");
    }
    const std::size_t nf = grid.size();
    std::vector<double> s11(spec.trials * nf);
    std::vector<double> s21(spec.trials * nf);
    parallel_for(spec.trials, parallelism, [&](std::size_t t) {
        const auto n = evaluate_netlist(perturb_netlist(netlist, spec, t), grid);
        for (std::size_t k = 0; k < nf; ++k) {
            s11[t * nf + k] = std::abs(n.s(k, 0, 0));
            s21[t * nf + k] = std::abs(n.s(k, 1, 0));
        }
    });

    ToleranceSummary r{grid, spec.trials, {}, {}, RealSeries(nf), RealSeries(nf), RealSeries(nf), RealSeries(nf)};
    for (auto* q : {&r.s11_quantiles, &r.s21_quantiles}) {
        for (auto& level : *q) {
            level.resize(nf);
        }
    }
    const auto nominal = evaluate_netlist(netlist, grid);
    std::vector<double> a(spec.trials), b(spec.trials);
    for (std::size_t k = 0; k < nf; ++k) {
        for (std::size_t t = 0; t < spec.trials; ++t) {
            a[t] = s11[t * nf + k];
            b[t] = s21[t * nf + k];
        }
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        for (std::size_t q = 0; q < tolerance_quantile_levels.size(); ++q) {
            r.s11_quantiles[q][k] = sorted_quantile(a, tolerance_quantile_levels[q]);
            r.s21_quantiles[q][k] = sorted_quantile(b, tolerance_quantile_levels[q]);
        }
        r.s11_max[k] = a.back();
        r.s21_min[k] = b.front();
        r.s11_nominal[k] = std::abs(nominal.s(k, 0, 0));
        r.s21_nominal[k] = std::abs(nominal.s(k, 1, 0));
    }
    return r;
}

}  // namespace rlf
