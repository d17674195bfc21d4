#include "rlf/metrics.hpp"

#include "rlf/error.hpp"

#include <fmt/format.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace rlf {

namespace {

using Index = Eigen::Index;

double interpolate_edge(double f0, double y0, double f1, double y1, double level) {
    if (y1 == y0) {
        return f0;
    }
    return f0 + (level - y0) * (f1 - f0) / (y1 - y0);
}

}  // namespace

RealSeries passivity_margin(const NetworkData& n) {
    RealSeries out(n.size());
    const auto p = static_cast<Index>(n.ports());
    for (std::size_t k = 0; k < n.size(); ++k) {
        const CMatrix q = CMatrix::Identity(p, p) - n.s(k).adjoint() * n.s(k);
        Eigen::SelfAdjointEigenSolver<CMatrix> eig(q, Eigen::EigenvaluesOnly);
        out[k] = eig.eigenvalues().minCoeff();
    }
    return out;
}

double reciprocity_error(const NetworkData& n) {
    double worst = 0.0;
    for (std::size_t k = 0; k < n.size(); ++k) {
        worst = std::max(worst, (n.s(k) - n.s(k).transpose()).cwiseAbs().maxCoeff());
    }
    return worst;
}

double to_db(double magnitude) {
    if (magnitude == 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    return 20.0 * std::log10(magnitude);
}

double to_db(Complex x) { return to_db(std::abs(x)); }

RealSeries return_loss_db(const NetworkData& n, std::size_t port) {
    if (port >= n.ports()) {
        throw InvalidArgument(fmt::format("port {} out of range", port + 1));
    }
    RealSeries out(n.size());
    for (std::size_t k = 0; k < n.size(); ++k) {
        out[k] = -to_db(n.s(k, port, port));
    }
    return out;
}

RealSeries insertion_loss_db(const NetworkData& n, std::size_t from, std::size_t to) {
    if (from >= n.ports() || to >= n.ports()) {
        throw InvalidArgument("insertion_loss_db: port out of range");
    }
    RealSeries out(n.size());
    for (std::size_t k = 0; k < n.size(); ++k) {
        out[k] = -to_db(n.s(k, to, from));
    }
    return out;
}

NetworkData symmetric_two_port_from_modes(const FrequencyGrid& grid, const ComplexSeries& gamma_even,
                                          const ComplexSeries& gamma_odd, double z0) {
    if (gamma_even.size() != grid.size() || gamma_odd.size() != grid.size()) {
        throw InvalidArgument(fmt::format("mode reflections have {} and {} points for a {}-point grid",
                                          gamma_even.size(), gamma_odd.size(), grid.size()));
    }
    std::vector<CMatrix> s(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const Complex refl = 0.5 * (gamma_even[k] + gamma_odd[k]);
        const Complex trans = 0.5 * (gamma_even[k] - gamma_odd[k]);
        s[k].resize(2, 2);
        s[k] << refl, trans, trans, refl;
    }
    return NetworkData(grid, std::move(s), z0);
}

double Band::center_geometric() const { return std::sqrt(lo_hz * hi_hz); }

std::optional<Band> transmission_band(const NetworkData& n, double drop_db, std::size_t from, std::size_t to) {
    if (from >= n.ports() || to >= n.ports()) {
        throw InvalidArgument("transmission_band: port out of range");
    }
    const auto& g = n.grid();
    RealSeries db(n.size());
    for (std::size_t k = 0; k < n.size(); ++k) {
        db[k] = to_db(n.s(k, to, from));
    }
    const auto peak = static_cast<std::size_t>(std::max_element(db.begin(), db.end()) - db.begin());
    const double level = db[peak] - drop_db;

    std::size_t lo = peak;
    while (lo > 0 && db[lo - 1] >= level) {
        --lo;
    }
    std::size_t hi = peak;
    while (hi + 1 < db.size() && db[hi + 1] >= level) {
        ++hi;
    }
    if (lo == 0 || hi + 1 == db.size()) {
        return std::nullopt;
    }
    return Band{interpolate_edge(g[lo - 1], db[lo - 1], g[lo], db[lo], level),
                interpolate_edge(g[hi], db[hi], g[hi + 1], db[hi + 1], level)};
}

ResponseSummary summarize_response(const NetworkData& two_port, const SummaryOptions& options) {
    if (two_port.ports() != 2) {
        throw InvalidArgument("response summary needs a two-port");
    }
    const auto band = transmission_band(two_port, options.drop_db);
    if (!band) {
        throw InvalidArgument(fmt::format("no complete {} dB transmission band inside the grid", options.drop_db));
    }
    ResponseSummary r;
    r.band_lo_hz = band->lo_hz;
    r.band_hi_hz = band->hi_hz;
    r.center_hz = band->center_arithmetic();
    r.center_geometric_hz = band->center_geometric();
    r.bandwidth_3db_hz = band->width();

    const Band in_band = options.in_band.value_or(*band);
    const Band broad = options.broadband.value_or(Band{two_port.grid().front(), two_port.grid().back()});
    const auto il = insertion_loss_db(two_port, 0, 1);
    const auto rl1 = return_loss_db(two_port, 0);
    const auto rl2 = return_loss_db(two_port, 1);

    constexpr double inf = std::numeric_limits<double>::infinity();
    r.min_insertion_loss_db = *std::min_element(il.begin(), il.end());
    r.max_in_band_insertion_loss_db = -inf;
    r.min_in_band_return_loss_db = inf;
    r.min_broadband_return_loss_db = inf;
    for (std::size_t k = 0; k < two_port.size(); ++k) {
        const double f = two_port.grid()[k];
        const double rl = std::min(rl1[k], rl2[k]);
        if (in_band.contains(f)) {
            r.max_in_band_insertion_loss_db = std::max(r.max_in_band_insertion_loss_db, il[k]);
            r.min_in_band_return_loss_db = std::min(r.min_in_band_return_loss_db, rl);
        }
        if (broad.contains(f)) {
            r.min_broadband_return_loss_db = std::min(r.min_broadband_return_loss_db, rl);
        }
    }
    return r;
}

}  // namespace rlf
