#pragma once

#include <vector>

namespace rlf {

struct MutualSample {
    double dx;
    double dy;
    double m;
};

/// Bilinear interpolant of M(dx, dy) over a rectilinear sample grid.
///
/// Samples must cover every (dx, dy) combination of their distinct dx and dy
/// values exactly once, with at least two of each. Queries outside the grid
/// throw InvalidArgument.
class MutualFit {
public:
    explicit MutualFit(std::vector<MutualSample> samples);

    [[nodiscard]] double operator()(double dx, double dy) const;
    [[nodiscard]] const std::vector<double>& xs() const noexcept { return xs_; }
    [[nodiscard]] const std::vector<double>& ys() const noexcept { return ys_; }

private:
    std::vector<double> xs_;
    std::vector<double> ys_;
    std::vector<double> values_;  // row-major over (x, y)
};

}  // namespace rlf
