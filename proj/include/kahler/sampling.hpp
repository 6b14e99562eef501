#pragma once

#include "kahler/base_geometry.hpp"
#include "kahler/bundle_frames.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

/// Seeded sampling of tube points and tangent directions.
///
/// Every draw comes from its own engine seeded with (seed, stream, index), so
/// the i-th point is the same no matter how many points, directions or
/// checks a run asks for.
namespace kahler::sampling {

enum class Stream : std::uint32_t { Points = 1, Directions = 2 };

/// Energy density range as fractions of the tube bound 2c/A^2.
inline constexpr double kMinTubeFraction = 0.05;
inline constexpr double kMaxTubeFraction = 0.95;

/// x uniform in the chart ball of radius 1; p with direction uniform on the g^{-1}-sphere and t uniform
/// in [0.05, 0.95] * 2c/A^2. Requires c > 0 and A > 0.
BundlePoint sample_point(const ModelParams& params, std::uint64_t seed, std::uint64_t index);
std::vector<BundlePoint> sample_points(const ModelParams& params, std::uint64_t seed, int count);

/// Standard-normal direction in R^dim (adapted-frame components), never zero.
Eigen::VectorXd sample_direction(int dim, std::uint64_t seed, std::uint64_t point_index, std::uint64_t direction_index);

}  // namespace kahler::sampling
