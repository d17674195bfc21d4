#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace rlf {

/// Strictly increasing, strictly positive list of evaluation frequencies in Hz.
class FrequencyGrid {
public:
    explicit FrequencyGrid(std::vector<double> points);

    static FrequencyGrid linear(double start_hz, double stop_hz, std::size_t count);
    static FrequencyGrid logarithmic(double start_hz, double stop_hz, std::size_t count);

    [[nodiscard]] std::span<const double> points() const noexcept { return points_; }
    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return points_[i]; }
    [[nodiscard]] double omega(std::size_t i) const { return 2.0 * std::numbers::pi * points_[i]; }
    [[nodiscard]] double front() const { return points_.front(); }
    [[nodiscard]] double back() const { return points_.back(); }

    /// Index of the grid point closest to `hz`.
    [[nodiscard]] std::size_t nearest(double hz) const;

    /// Grids compare equal when every point agrees to a relative 1e-12.
    [[nodiscard]] bool matches(const FrequencyGrid& other) const;

    bool operator==(const FrequencyGrid&) const = default;

private:
    std::vector<double> points_;
};

}  // namespace rlf
