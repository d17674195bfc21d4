#include "rlf/neumann.hpp"

#include "rlf/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace rlf {

namespace {

// Vertices in canonical traversal order and the sign of the original direction.
std::pair<std::vector<Vec3>, double> canonical(const Polyline3D& p) {
    std::vector<Vec3> v(p.vertices().begin(), p.vertices().end());
    if (std::lexicographical_compare(v.rbegin(), v.rend(), v.begin(), v.end())) {
        std::reverse(v.begin(), v.end());
        return {std::move(v), -1.0};
    }
    return {std::move(v), 1.0};
}

}  // namespace

double neumann_mutual(const Polyline3D& path_a, const Polyline3D& path_b, const NeumannOptions& options) {
    auto [va, sa] = canonical(path_a);
    auto [vb, sb] = canonical(path_b);
    if (std::lexicographical_compare(vb.begin(), vb.end(), va.begin(), va.end())) {
        std::swap(va, vb);
    }
    const std::size_t na = va.size() - 1;
    std::vector<Vec3> da(na), ma(na);
    for (std::size_t i = 0; i < na; ++i) {
        for (int c = 0; c < 3; ++c) {
            da[i][c] = va[i + 1][c] - va[i][c];
            ma[i][c] = 0.5 * (va[i + 1][c] + va[i][c]);
        }
    }
    double total = 0.0;
    for (std::size_t n = 0; n + 1 < vb.size(); ++n) {
        const Vec3 db{vb[n + 1][0] - vb[n][0], vb[n + 1][1] - vb[n][1], vb[n + 1][2] - vb[n][2]};
        const Vec3 mb{0.5 * (vb[n + 1][0] + vb[n][0]), 0.5 * (vb[n + 1][1] + vb[n][1]),
                      0.5 * (vb[n + 1][2] + vb[n][2])};
        double row = 0.0;
        for (std::size_t m = 0; m < na; ++m) {
            const double r = std::hypot(ma[m][0] - mb[0], ma[m][1] - mb[1], ma[m][2] - mb[2]);
            if (r < options.min_distance) {
                throw InvalidArgument(fmt::format(
                    "segments {} and {} are {:.3g} m apart, below the filament limit {:.3g} m", m, n, r,
                    options.min_distance));
            }
            row += (da[m][0] * db[0] + da[m][1] * db[1] + da[m][2] * db[2]) / r;
        }
        total += row;
    }
    return sa * sb * (mu0 / (4.0 * 3.14159265358979323846) * total);
}

std::size_t MutualMatrix::index_of(const std::string& label) const {
    const auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) {
        throw InvalidArgument(fmt::format("mutual matrix has no inductor '{}'", label));
    }
    return static_cast<std::size_t>(it - labels.begin());
}

void MutualMatrix::validate() const {
    const auto n = static_cast<Eigen::Index>(labels.size());
    if (m.rows() != n || m.cols() != n) {
        throw InvalidArgument(fmt::format("mutual matrix is {}x{} for {} labels", m.rows(), m.cols(), n));
    }
    if (!m.allFinite()) {
        throw InvalidArgument("mutual matrix has non-finite entries");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (m(i, j) != m(j, i)) {
                throw InvalidArgument(fmt::format("mutual matrix is not symmetric at ({}, {})", labels[static_cast<std::size_t>(i)],
                                                  labels[static_cast<std::size_t>(j)]));
            }
        }
    }
    auto sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw InvalidArgument("mutual matrix labels must be unique");
    }
}

MutualMatrix mutual_matrix(const std::vector<std::string>& labels, const std::vector<Polyline3D>& paths,
                           const NeumannOptions& options, const Parallelism& parallelism) {
    if (labels.size() != paths.size()) {
        throw InvalidArgument(fmt::format("{} labels for {} paths", labels.size(), paths.size()));
    }
    const std::size_t n = labels.size();
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            pairs.emplace_back(i, j);
        }
    }
    std::vector<double> values(pairs.size());
    parallel_for(pairs.size(), parallelism, [&](std::size_t p) {
        values[p] = neumann_mutual(paths[pairs[p].first], paths[pairs[p].second], options);
    });
    MutualMatrix mm{labels, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))};
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto i = static_cast<Eigen::Index>(pairs[p].first);
        const auto j = static_cast<Eigen::Index>(pairs[p].second);
        mm.m(i, j) = mm.m(j, i) = values[p];
    }
    mm.validate();
    return mm;
}

}  // namespace rlf
