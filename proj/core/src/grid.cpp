#include "rlf/grid.hpp"

#include "rlf/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace rlf {

FrequencyGrid::FrequencyGrid(std::vector<double> points) : points_(std::move(points)) {
    if (points_.empty()) {
        throw InvalidArgument("frequency grid is empty");
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const double f = points_[i];
        if (!std::isfinite(f) || f <= 0.0) {
            throw InvalidArgument(fmt::format("frequency grid point {} ({}) must be finite and > 0", i, f));
        }
        if (i > 0 && !(f > points_[i - 1])) {
            throw InvalidArgument(fmt::format("frequency grid not strictly increasing at point {} ({} <= {})", i, f,
                                              points_[i - 1]));
        }
    }
}

FrequencyGrid FrequencyGrid::linear(double start_hz, double stop_hz, std::size_t count) {
    if (count == 1) {
        return FrequencyGrid({start_hz});
    }
    if (count < 1 || !(stop_hz > start_hz)) {
        throw InvalidArgument(fmt::format("linear grid needs stop > start and count >= 1 (got {} .. {}, {})",
                                          start_hz, stop_hz, count));
    }
    std::vector<double> pts(count);
    const double step = (stop_hz - start_hz) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        pts[i] = start_hz + step * static_cast<double>(i);
    }
    pts.back() = stop_hz;
    return FrequencyGrid(std::move(pts));
}

FrequencyGrid FrequencyGrid::logarithmic(double start_hz, double stop_hz, std::size_t count) {
    if (count == 1) {
        return FrequencyGrid({start_hz});
    }
    if (count < 1 || !(stop_hz > start_hz) || !(start_hz > 0.0)) {
        throw InvalidArgument(fmt::format("log grid needs stop > start > 0 and count >= 1 (got {} .. {}, {})",
                                          start_hz, stop_hz, count));
    }
    std::vector<double> pts(count);
    const double a = std::log(start_hz);
    const double b = std::log(stop_hz);
    for (std::size_t i = 0; i < count; ++i) {
        pts[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    pts.front() = start_hz;
    pts.back() = stop_hz;
    return FrequencyGrid(std::move(pts));
}

std::size_t FrequencyGrid::nearest(double hz) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), hz);
    if (it == points_.end()) {
        return points_.size() - 1;
    }
    if (it == points_.begin()) {
        return 0;
    }
    const auto hi = static_cast<std::size_t>(it - points_.begin());
    return (hz - points_[hi - 1] <= points_[hi] - hz) ? hi - 1 : hi;
}

bool FrequencyGrid::matches(const FrequencyGrid& other) const {
    if (other.size() != size()) {
        return false;
    }
    for (std::size_t i = 0; i < size(); ++i) {
        if (std::abs(points_[i] - other.points_[i]) > 1e-12 * points_[i]) {
            return false;
        }
    }
    return true;
}

}  // namespace rlf
