#include "kahler/base_geometry.hpp"

#include "kahler/errors.hpp"
#include "kahler/metric_jet.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kahler {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void ModelParams::validate() const {
  if (n < 2) throw std::invalid_argument(fmt::format("dimension n = {} must be at least 2", n));
  if (!std::isfinite(c) || !std::isfinite(A)) throw std::invalid_argument("c and A must be finite");
}

std::optional<std::string> ModelParams::admissibility_violation() const {
  if (!(A > 0.0)) return std::string("A > 0 required");
  if (!(c > 0.0)) return std::string("2c − A²t > 0 unsatisfiable for t > 0");
  return std::nullopt;
}

double conformal_factor(double c, const VectorXd& x) { return 1.0 + 0.25 * c * x.squaredNorm(); }

namespace {

double checked_factor(const ModelParams& params, const VectorXd& x) {
  if (x.size() != params.n) throw std::invalid_argument("base point has wrong dimension");
  if (!x.allFinite()) throw std::invalid_argument("base point must be finite");
  const double f = conformal_factor(params.c, x);
  if (!(f > 0.0))
    throw DomainError(fmt::format("chart point outside |x|^2 < -4/c (|x|^2 = {})", x.squaredNorm()));
  return f;
}

}  // namespace

MatrixXd base_metric(const ModelParams& params, const VectorXd& x) {
  const double f = checked_factor(params, x);
  return MatrixXd::Identity(params.n, params.n) / (f * f);
}

BaseMetricData metric_at(const ModelParams& params, const BasePoint& pt) {
  const int n = params.n;
  const double c = params.c;
  const VectorXd& x = pt.x;
  const double f = checked_factor(params, x);

  BaseMetricData out;
  out.g = MatrixXd::Identity(n, n) / (f * f);
  out.g_inv = MatrixXd::Identity(n, n) * (f * f);

  // log-derivative of the conformal factor e^{2 sigma} = f^{-2}
  const VectorXd ds = -0.5 * c * x / f;
  MatrixXd dds = MatrixXd::Identity(n, n) * (-0.5 * c / f) + (0.25 * c * c / (f * f)) * x * x.transpose();

  out.gamma = MTensor(n, {Slot::Up, Slot::Down, Slot::Down});
  out.dgamma = MTensor(n, {Slot::Up, Slot::Down, Slot::Down, Slot::Down});
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int h = 0; h < n; ++h) {
        const double dki = k == i ? 1.0 : 0.0;
        const double dkh = k == h ? 1.0 : 0.0;
        const double dih = i == h ? 1.0 : 0.0;
        out.gamma(k, i, h) = dki * ds(h) + dkh * ds(i) - dih * ds(k);
        for (int l = 0; l < n; ++l) out.dgamma(k, i, h, l) = dki * dds(h, l) + dkh * dds(i, l) - dih * dds(k, l);
      }

  out.riem = MTensor(n, {Slot::Up, Slot::Down, Slot::Down, Slot::Down});
  for (int h = 0; h < n; ++h)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          out.riem(h, k, i, j) = c * ((h == i ? out.g(j, k) : 0.0) - (h == j ? out.g(i, k) : 0.0));
  return out;
}

BaseFdGeometry fd_base_geometry(const ModelParams& params, const BasePoint& pt) {
  const int n = params.n;
  auto field = [&](const VectorXd& y) { return base_metric(params, y); };
  const MetricJet jet = metric_jet(field, pt.x, true);
  BaseFdGeometry out;
  out.gamma = christoffel_from_jet(jet);
  const MTensor k = riemann_from_jet(jet);
  out.riem = MTensor(n, {Slot::Up, Slot::Down, Slot::Down, Slot::Down});
  for (int h = 0; h < n; ++h)
    for (int kk = 0; kk < n; ++kk)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.riem(h, kk, i, j) = k(h, i, j, kk);
  out.error_estimate = jet.error_estimate;
  return out;
}

double verify_constant_curvature(const ModelParams& params, const BasePoint& pt, CurvatureSource source) {
  const BaseMetricData data = metric_at(params, pt);
  const MTensor riem = source == CurvatureSource::ClosedForm ? data.riem : fd_base_geometry(params, pt).riem;
  const int n = params.n;
  double worst = 0.0;
  for (int h = 0; h < n; ++h)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double model = params.c * ((h == i ? data.g(j, k) : 0.0) - (h == j ? data.g(i, k) : 0.0));
          worst = std::max(worst, std::abs(riem(h, k, i, j) - model));
        }
  return worst;
}

double first_bianchi_residual(const MTensor& riem) {
  const int n = riem.dim();
  double worst = 0.0;
  for (int h = 0; h < n; ++h)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          worst = std::max(worst, std::abs(riem(h, k, i, j) + riem(h, i, j, k) + riem(h, j, k, i)));
  return worst;
}

}  // namespace kahler
