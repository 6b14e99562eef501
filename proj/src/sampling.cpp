#include "kahler/sampling.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace kahler::sampling {

using Eigen::VectorXd;

namespace {

std::mt19937_64 engine_for(std::uint64_t seed, Stream stream, std::uint64_t a, std::uint64_t b = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(a),
                    static_cast<std::uint32_t>(a >> 32), static_cast<std::uint32_t>(b),
                    static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

VectorXd unit_vector(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  VectorXd u(dim);
  do {
    for (int i = 0; i < dim; ++i) u(i) = normal(rng);
  } while (u.norm() < 1e-12);
  return u.normalized();
}

}  // namespace

BundlePoint sample_point(const ModelParams& params, std::uint64_t seed, std::uint64_t index) {
  if (!(params.c > 0.0 && params.A > 0.0)) throw std::invalid_argument("sampling requires c > 0 and A > 0");
  std::mt19937_64 rng = engine_for(seed, Stream::Points, index);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = params.n;

  const VectorXd xdir = unit_vector(rng, n);
  const double radius = std::pow(unit(rng), 1.0 / n);
  const VectorXd x = radius * xdir;

  const double bound = 2.0 * params.c / (params.A * params.A);
  const double t = bound * (kMinTubeFraction + (kMaxTubeFraction - kMinTubeFraction) * unit(rng));
  const VectorXd pdir = unit_vector(rng, n);
  // g^{ij} = F^2 delta^{ij}, so |p|_g^2 = F^2 |p|^2 = 2t.
  const double f = conformal_factor(params.c, x);
  return BundlePoint{x, std::sqrt(2.0 * t) / f * pdir};
}

std::vector<BundlePoint> sample_points(const ModelParams& params, std::uint64_t seed, int count) {
  std::vector<BundlePoint> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) pts.push_back(sample_point(params, seed, static_cast<std::uint64_t>(i)));
  return pts;
}

VectorXd sample_direction(int dim, std::uint64_t seed, std::uint64_t point_index, std::uint64_t direction_index) {
  std::mt19937_64 rng = engine_for(seed, Stream::Directions, point_index, direction_index);
  std::normal_distribution<double> normal(0.0, 1.0);
  VectorXd u(dim);
  do {
    for (int i = 0; i < dim; ++i) u(i) = normal(rng);
  } while (u.norm() < 1e-12);
  return u;
}

}  // namespace kahler::sampling
