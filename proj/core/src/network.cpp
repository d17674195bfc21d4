#include "rlf/network.hpp"

#include "rlf/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace rlf {

NetworkData::NetworkData(FrequencyGrid grid, std::vector<CMatrix> s, std::vector<double> z0)
    : grid_(std::move(grid)), s_(std::move(s)), z0_(std::move(z0)) {
    if (z0_.empty()) {
        throw InvalidArgument("network must have at least one port");
    }
    if (s_.size() != grid_.size()) {
        throw InvalidArgument(
            fmt::format("network has {} matrices for a {}-point grid", s_.size(), grid_.size()));
    }
    const auto n = static_cast<Eigen::Index>(z0_.size());
    for (double z : z0_) {
        if (!std::isfinite(z) || z <= 0.0) {
            throw InvalidArgument(fmt::format("reference impedance {} must be finite and > 0", z));
        }
    }
    for (std::size_t k = 0; k < s_.size(); ++k) {
        if (s_[k].rows() != n || s_[k].cols() != n) {
            throw InvalidArgument(fmt::format("matrix at {} Hz is {}x{}, expected {}x{}", grid_[k], s_[k].rows(),
                                              s_[k].cols(), n, n));
        }
        if (!s_[k].allFinite()) {
            throw InvalidArgument(fmt::format("non-finite S-parameter at {} Hz", grid_[k]));
        }
    }
}

NetworkData::NetworkData(FrequencyGrid grid, std::vector<CMatrix> s, double z0)
    : NetworkData(std::move(grid), s, std::vector<double>(s.empty() ? 1 : static_cast<std::size_t>(s.front().rows()), z0)) {}

bool NetworkData::uniform_z0(double rel_tol) const {
    return std::all_of(z0_.begin(), z0_.end(),
                       [&](double z) { return std::abs(z - z0_.front()) <= rel_tol * z0_.front(); });
}

ComplexSeries NetworkData::trace(std::size_t to, std::size_t from) const {
    ComplexSeries out(s_.size());
    for (std::size_t k = 0; k < s_.size(); ++k) {
        out[k] = s_[k](static_cast<Eigen::Index>(to), static_cast<Eigen::Index>(from));
    }
    return out;
}

double NetworkData::max_abs_diff(const NetworkData& other) const {
    if (other.ports() != ports() || !other.grid().matches(grid_)) {
        throw InvalidArgument("max_abs_diff: networks have different shapes");
    }
    double worst = 0.0;
    for (std::size_t k = 0; k < s_.size(); ++k) {
        worst = std::max(worst, (s_[k] - other.s_[k]).cwiseAbs().maxCoeff());
    }
    return worst;
}

NetworkData ideal_thru(const FrequencyGrid& grid, double z0) {
    CMatrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return NetworkData(grid, std::vector<CMatrix>(grid.size(), m), z0);
}

NetworkData matched_attenuator(const FrequencyGrid& grid, double loss_db, double z0) {
    const double t = std::pow(10.0, -loss_db / 20.0);
    CMatrix m(2, 2);
    m << 0.0, t, t, 0.0;
    return NetworkData(grid, std::vector<CMatrix>(grid.size(), m), z0);
}

NetworkData one_port(const FrequencyGrid& grid, const ComplexSeries& gamma, double z0) {
    if (gamma.size() != grid.size()) {
        throw InvalidArgument("one_port: reflection series length does not match grid");
    }
    std::vector<CMatrix> s;
    s.reserve(gamma.size());
    for (const auto& g : gamma) {
        CMatrix m(1, 1);
        m(0, 0) = g;
        s.push_back(std::move(m));
    }
    return NetworkData(grid, std::move(s), z0);
}

}  // namespace rlf
