#pragma once

#include "rlf/geometry.hpp"
#include "rlf/parallel.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace rlf {

inline constexpr double mu0 = 4e-7 * 3.14159265358979323846;

struct NeumannOptions {
    /// Segment midpoints closer than this (m) invalidate the filament model.
    double min_distance = 1e-9;
};

/// Mutual inductance (H) of two filaments by the midpoint double sum
/// (mu0 / 4pi) * sum_m sum_n (dx_m . dx_n) / |x_m - x_n|.
double neumann_mutual(const Polyline3D& a, const Polyline3D& b, const NeumannOptions& options = {});

/// Symmetric matrix of pairwise mutual inductances; the diagonal is zero.
struct MutualMatrix {
    std::vector<std::string> labels;
    Eigen::MatrixXd m;

    [[nodiscard]] std::size_t size() const { return labels.size(); }
    [[nodiscard]] std::size_t index_of(const std::string& label) const;
    void validate() const;
};

MutualMatrix mutual_matrix(const std::vector<std::string>& labels, const std::vector<Polyline3D>& paths,
                           const NeumannOptions& options = {}, const Parallelism& parallelism = {});

}  // namespace rlf
