#include "rlf/geometry.hpp"

#include "rlf/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rlf {

Polyline3D::Polyline3D(std::vector<Vec3> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.size() < 2) {
        throw InvalidArgument("polyline needs at least two vertices");
    }
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        for (double c : vertices_[i]) {
            if (!std::isfinite(c)) {
                throw InvalidArgument(fmt::format("polyline vertex {} is not finite", i));
            }
        }
        if (i > 0 && vertices_[i] == vertices_[i - 1]) {
            throw InvalidArgument(fmt::format("polyline vertices {} and {} coincide", i - 1, i));
        }
    }
}

double Polyline3D::length() const {
    double total = 0.0;
    for (std::size_t i = 1; i < vertices_.size(); ++i) {
        const auto& a = vertices_[i - 1];
        const auto& b = vertices_[i];
        total += std::hypot(b[0] - a[0], b[1] - a[1], b[2] - a[2]);
    }
    return total;
}

Polyline3D Polyline3D::reversed() const {
    std::vector<Vec3> v(vertices_.rbegin(), vertices_.rend());
    return Polyline3D(std::move(v));
}

Polyline3D Polyline3D::translated(const Vec3& offset) const {
    std::vector<Vec3> v = vertices_;
    for (auto& p : v) {
        for (int c = 0; c < 3; ++c) {
            p[c] += offset[c];
        }
    }
    return Polyline3D(std::move(v));
}

Polyline3D Polyline3D::scaled(double factor) const {
    std::vector<Vec3> v = vertices_;
    for (auto& p : v) {
        for (auto& c : p) {
            c *= factor;
        }
    }
    return Polyline3D(std::move(v));
}

Polyline3D Polyline3D::refined(std::size_t factor) const {
    if (factor == 0) {
        throw InvalidArgument("refinement factor must be >= 1");
    }
    std::vector<Vec3> v;
    v.reserve(segments() * factor + 1);
    v.push_back(vertices_.front());
    for (std::size_t i = 1; i < vertices_.size(); ++i) {
        const auto& a = vertices_[i - 1];
        const auto& b = vertices_[i];
        for (std::size_t k = 1; k <= factor; ++k) {
            const double t = static_cast<double>(k) / static_cast<double>(factor);
            v.push_back({a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2])});
        }
        v.back() = b;
    }
    return Polyline3D(std::move(v));
}

Polyline3D spiral_path(const SpiralParams& p) {
    if (!(p.turns > 0.0) || !(p.pitch > 0.0) || !(p.outer_dimension > 0.0)) {
        throw InvalidArgument("spiral needs turns, pitch and outer dimension > 0");
    }
    if (p.segments_per_turn < 4) {
        throw InvalidArgument("spiral needs at least 4 segments per turn");
    }
    if (p.handedness != 1 && p.handedness != -1) {
        throw InvalidArgument("spiral handedness must be +1 or -1");
    }
    const double outer_half = 0.5 * p.outer_dimension;
    const double inner_half = outer_half - p.pitch * p.turns;
    if (!(inner_half > 0.0)) {
        throw InvalidArgument(fmt::format(
            "spiral self-intersects: {} turns at pitch {} m do not fit in outer dimension {} m", p.turns, p.pitch,
            p.outer_dimension));
    }
    const double total = p.turns * static_cast<double>(p.segments_per_turn);
    const auto count = static_cast<std::size_t>(std::llround(total));
    if (std::abs(total - static_cast<double>(count)) > 1e-9 || count < 1) {
        throw InvalidArgument("turns * segments_per_turn must be a positive integer");
    }

    std::vector<Vec3> v;
    v.reserve(count + 1);
    for (std::size_t i = 0; i <= count; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(p.segments_per_turn);
        const double half = outer_half - p.pitch * t;
        const double phi = 2.0 * std::numbers::pi * t;
        const double c = std::cos(phi);
        const double s = std::sin(phi);
        // Project the circle point onto the square of half-size `half`.
        const double norm = std::max(std::abs(c), std::abs(s));
        const double u = half * c / norm;
        const double w = half * s / norm;
        Vec3 q{};
        switch (p.plane) {
            case SpiralPlane::XY: q = {u, w, 0.0}; break;
            case SpiralPlane::XZ: q = {u, 0.0, w}; break;
            case SpiralPlane::YZ: q = {0.0, u, w}; break;
        }
        v.push_back({q[0] + p.center[0], q[1] + p.center[1], q[2] + p.center[2]});
    }
    if (p.handedness < 0) {
        std::reverse(v.begin(), v.end());
    }
    return Polyline3D(std::move(v));
}

Polyline3D straight_path(const Vec3& a, const Vec3& b, std::size_t segments) {
    if (segments < 1) {
        throw InvalidArgument("straight path needs at least one segment");
    }
    return Polyline3D({a, b}).refined(segments);
}

}  // namespace rlf
