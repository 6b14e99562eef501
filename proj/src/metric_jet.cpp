#include "kahler/metric_jet.hpp"

#include <stdexcept>

namespace kahler {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// partials(cfg) -> MatrixPartials, hessian(cfg) -> SecondPartials of the flattened metric
template <class Partials, class Hessian>
MetricJet jet_impl(Partials&& partials, Hessian&& hessian, const Eigen::MatrixXd& g0, const VectorXd& z,
                   bool second_order, const fd::FdConfig& first, const fd::FdConfig& second) {
  MetricJet jet;
  jet.g = g0;
  const Eigen::Index m = jet.g.rows();
  fd::MatrixPartials d = partials(first);
  jet.dg = std::move(d.value);
  jet.error_estimate = d.error_estimate;
  jet.unreliable = d.unreliable;
  if (second_order) {
    fd::SecondPartials h = hessian(second);
    const int dim = static_cast<int>(z.size());
    jet.d2g.assign(static_cast<std::size_t>(dim), std::vector<MatrixXd>(static_cast<std::size_t>(dim)));
    for (int e = 0; e < dim; ++e)
      for (int f = 0; f < dim; ++f)
        jet.d2g[static_cast<std::size_t>(e)][static_cast<std::size_t>(f)] = fd::unflatten(h(e, f), m, m);
    jet.error_estimate = std::max(jet.error_estimate, h.error_estimate);
    jet.unreliable = jet.unreliable || h.unreliable;
  }
  return jet;
}

}  // namespace

MetricJet metric_jet(const fd::MatrixField& metric, const VectorXd& z, bool second_order,
                     const fd::FdConfig& first, const fd::FdConfig& second) {
  const fd::VectorField flat = [&](const VectorXd& y) { return fd::flatten(metric(y)); };
  return jet_impl([&](const fd::FdConfig& cfg) { return fd::matrix_partials(metric, z, cfg); },
                  [&](const fd::FdConfig& cfg) { return fd::second_partials(flat, z, cfg); }, metric(z), z,
                  second_order, first, second);
}

MetricJet metric_jet_ext(const fd::ExtMatrixField& metric, const VectorXd& z, bool second_order,
                     const fd::FdConfig& first, const fd::FdConfig& second) {
  const fd::ExtVectorField flat = [&](const fd::ExtVec& y) {
    const fd::ExtMat g = metric(y);
    return fd::ExtVec(Eigen::Map<const fd::ExtVec>(g.data(), g.size()));
  };
  return jet_impl([&](const fd::FdConfig& cfg) { return fd::matrix_partials_ext(metric, z, cfg); },
                  [&](const fd::FdConfig& cfg) { return fd::second_partials_ext(flat, z, cfg); },
                  metric(z.cast<long double>()).cast<double>(), z, second_order, first, second);
}

namespace {

// L(d, b, c) = d_b g_dc + d_c g_db - d_d g_bc
MTensor first_kind(const MetricJet& jet) {
  const int m = static_cast<int>(jet.g.rows());
  MTensor l(m, {Slot::Down, Slot::Down, Slot::Down});
  for (int d = 0; d < m; ++d)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        l(d, b, c) = jet.dg[static_cast<std::size_t>(b)](d, c) + jet.dg[static_cast<std::size_t>(c)](d, b) -
                     jet.dg[static_cast<std::size_t>(d)](b, c);
  return l;
}

}  // namespace

MTensor christoffel_from_jet(const MetricJet& jet) {
  const int m = static_cast<int>(jet.g.rows());
  const MatrixXd ginv = jet.g.inverse();
  const MTensor l = first_kind(jet);
  MTensor gamma(m, {Slot::Up, Slot::Down, Slot::Down});
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        double s = 0.0;
        for (int d = 0; d < m; ++d) s += ginv(a, d) * l(d, b, c);
        gamma(a, b, c) = 0.5 * s;
      }
  return gamma;
}

MTensor riemann_from_jet(const MetricJet& jet) {
  if (jet.d2g.empty()) throw std::invalid_argument("riemann_from_jet: second-order jet required");
  const int m = static_cast<int>(jet.g.rows());
  const MatrixXd ginv = jet.g.inverse();
  const MTensor l = first_kind(jet);
  const MTensor gamma = christoffel_from_jet(jet);

  // dgamma(a, b, c, e) = d_e Gamma^a_bc
  MTensor dgamma(m, {Slot::Up, Slot::Down, Slot::Down, Slot::Down});
  for (int e = 0; e < m; ++e) {
    const MatrixXd dginv = -ginv * jet.dg[static_cast<std::size_t>(e)] * ginv;
    const auto& he = jet.d2g[static_cast<std::size_t>(e)];
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int c = 0; c < m; ++c) {
          double s = 0.0;
          for (int d = 0; d < m; ++d) {
            const double dl = he[static_cast<std::size_t>(b)](d, c) + he[static_cast<std::size_t>(c)](d, b) -
                              he[static_cast<std::size_t>(d)](b, c);
            s += dginv(a, d) * l(d, b, c) + ginv(a, d) * dl;
          }
          dgamma(a, b, c, e) = 0.5 * s;
        }
  }

  MTensor k(m, curvature_slots());
  for (int a = 0; a < m; ++a)
    for (int x = 0; x < m; ++x)
      for (int y = 0; y < m; ++y)
        for (int zz = 0; zz < m; ++zz) {
          double s = dgamma(a, y, zz, x) - dgamma(a, x, zz, y);
          for (int e = 0; e < m; ++e) s += gamma(a, x, e) * gamma(e, y, zz) - gamma(a, y, e) * gamma(e, x, zz);
          k(a, x, y, zz) = s;
        }
  return k;
}

}  // namespace kahler
