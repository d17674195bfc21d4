#pragma once

#include "rlf/grid.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace rlf {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using ComplexSeries = std::vector<Complex>;
using RealSeries = std::vector<double>;

/// Per-frequency N-port scattering matrices with a real reference impedance per port.
///
/// Port indices are zero-based in the API; text formats use the usual 1-based
/// S11/S21 names.
class NetworkData {
public:
    NetworkData(FrequencyGrid grid, std::vector<CMatrix> s, std::vector<double> z0);
    NetworkData(FrequencyGrid grid, std::vector<CMatrix> s, double z0);

    [[nodiscard]] const FrequencyGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::size_t ports() const noexcept { return z0_.size(); }
    [[nodiscard]] std::size_t size() const noexcept { return s_.size(); }
    [[nodiscard]] const CMatrix& s(std::size_t k) const { return s_[k]; }
    [[nodiscard]] Complex s(std::size_t k, std::size_t to, std::size_t from) const { return s_[k](to, from); }
    [[nodiscard]] std::span<const CMatrix> matrices() const noexcept { return s_; }
    [[nodiscard]] std::span<const double> z0() const noexcept { return z0_; }
    [[nodiscard]] double z0(std::size_t port) const { return z0_[port]; }
    [[nodiscard]] bool uniform_z0(double rel_tol = 1e-12) const;

    /// S(to, from) across the grid.
    [[nodiscard]] ComplexSeries trace(std::size_t to, std::size_t from) const;

    /// Largest entry-wise difference to `other` over the grid (grids and port counts must match).
    [[nodiscard]] double max_abs_diff(const NetworkData& other) const;

private:
    FrequencyGrid grid_;
    std::vector<CMatrix> s_;
    std::vector<double> z0_;
};

/// Ideal matched thru, S21 = S12 = 1.
NetworkData ideal_thru(const FrequencyGrid& grid, double z0 = 50.0);

/// Matched reciprocal attenuator of `loss_db`.
NetworkData matched_attenuator(const FrequencyGrid& grid, double loss_db, double z0 = 50.0);

/// One-port with the given reflection coefficient series.
NetworkData one_port(const FrequencyGrid& grid, const ComplexSeries& gamma, double z0 = 50.0);

}  // namespace rlf
