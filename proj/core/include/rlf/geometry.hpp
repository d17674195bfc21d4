#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace rlf {

using Vec3 = std::array<double, 3>;

/// Discretized conductor centerline, vertices in meters.
class Polyline3D {
public:
    /// Requires at least two vertices with no two consecutive vertices equal.
    explicit Polyline3D(std::vector<Vec3> vertices);

    [[nodiscard]] std::span<const Vec3> vertices() const noexcept { return vertices_; }
    [[nodiscard]] std::size_t size() const noexcept { return vertices_.size(); }
    [[nodiscard]] std::size_t segments() const noexcept { return vertices_.size() - 1; }
    [[nodiscard]] double length() const;

    [[nodiscard]] Polyline3D reversed() const;
    [[nodiscard]] Polyline3D translated(const Vec3& offset) const;
    [[nodiscard]] Polyline3D scaled(double factor) const;

    /// Splits every segment into `factor` equal pieces.
    [[nodiscard]] Polyline3D refined(std::size_t factor) const;

    bool operator==(const Polyline3D&) const = default;

private:
    std::vector<Vec3> vertices_;
};

enum class SpiralPlane { XY, XZ, YZ };

struct SpiralParams {
    double turns = 2.0;
    double pitch = 10e-6;            // radial step per turn, m
    double outer_dimension = 100e-6; // outer side length of the square, m
    std::size_t segments_per_turn = 32;
    Vec3 center{0.0, 0.0, 0.0};
    SpiralPlane plane = SpiralPlane::XY;
    int handedness = +1;             // +1 outside-in counter-clockwise; -1 traverses the same centerline in reverse
};

/// Planar square spiral centerline with turns * segments_per_turn + 1 vertices.
///
/// The spiral starts on the outer square and winds inward by `pitch` per turn.
/// A handedness of -1 reverses the traversal, which flips the current sense.
Polyline3D spiral_path(const SpiralParams& params);

/// Straight filament from `a` to `b` split into `segments` pieces.
Polyline3D straight_path(const Vec3& a, const Vec3& b, std::size_t segments);

}  // namespace rlf
