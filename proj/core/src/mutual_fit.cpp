#include "rlf/mutual_fit.hpp"

#include "rlf/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace rlf {

namespace {

std::vector<double> distinct(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::size_t index_in(const std::vector<double>& axis, double v) {
    return static_cast<std::size_t>(std::lower_bound(axis.begin(), axis.end(), v) - axis.begin());
}

// Cell index i with axis[i] <= v <= axis[i+1].
std::size_t cell(const std::vector<double>& axis, double v) {
    const auto it = std::upper_bound(axis.begin(), axis.end(), v);
    const auto i = static_cast<std::size_t>(it - axis.begin());
    return std::min(i == 0 ? 0 : i - 1, axis.size() - 2);
}

}  // namespace

MutualFit::MutualFit(std::vector<MutualSample> samples) {
    if (samples.size() < 4) {
        throw InvalidArgument(fmt::format("mutual fit needs at least 4 samples, got {}", samples.size()));
    }
    std::vector<double> x, y;
    for (const auto& s : samples) {
        if (!std::isfinite(s.dx) || !std::isfinite(s.dy) || !std::isfinite(s.m)) {
            throw InvalidArgument("mutual fit samples must be finite");
        }
        x.push_back(s.dx);
        y.push_back(s.dy);
    }
    xs_ = distinct(std::move(x));
    ys_ = distinct(std::move(y));
    if (xs_.size() < 2 || ys_.size() < 2) {
        throw InvalidArgument("mutual fit samples are collinear; need at least two distinct dx and dy values");
    }
    if (samples.size() != xs_.size() * ys_.size()) {
        throw InvalidArgument(fmt::format("mutual fit needs a full {}x{} grid of samples, got {}", xs_.size(),
                                          ys_.size(), samples.size()));
    }
    values_.assign(samples.size(), std::nan(""));
    for (const auto& s : samples) {
        auto& slot = values_[index_in(xs_, s.dx) * ys_.size() + index_in(ys_, s.dy)];
        if (!std::isnan(slot)) {
            throw InvalidArgument(fmt::format("duplicate mutual sample at ({}, {})", s.dx, s.dy));
        }
        slot = s.m;
    }
}

double MutualFit::operator()(double dx, double dy) const {
    if (!(dx >= xs_.front() && dx <= xs_.back() && dy >= ys_.front() && dy <= ys_.back())) {
        throw InvalidArgument(fmt::format("({}, {}) is outside the sampled region [{}, {}] x [{}, {}]", dx, dy,
                                          xs_.front(), xs_.back(), ys_.front(), ys_.back()));
    }
    const auto i = cell(xs_, dx);
    const auto j = cell(ys_, dy);
    const double tx = (dx - xs_[i]) / (xs_[i + 1] - xs_[i]);
    const double ty = (dy - ys_[j]) / (ys_[j + 1] - ys_[j]);
    const auto at = [&](std::size_t a, std::size_t b) { return values_[a * ys_.size() + b]; };
    return (1.0 - tx) * (1.0 - ty) * at(i, j) + tx * (1.0 - ty) * at(i + 1, j) + (1.0 - tx) * ty * at(i, j + 1) +
           tx * ty * at(i + 1, j + 1);
}

}  // namespace rlf
