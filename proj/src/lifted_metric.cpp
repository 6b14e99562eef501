#include "kahler/lifted_metric.hpp"

#include "kahler/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kahler {

using Eigen::MatrixXd;
using Eigen::VectorXd;

VProfile VProfile::kahler() { return VProfile{}; }

VProfile VProfile::kahler_offset(double offset) {
  return custom(
      [offset](const ModelParams& m, double t) { return (m.c - m.A * m.A * t) / (m.A * t) + offset; },
      fmt::format("kahler+{}", offset));
}

VProfile VProfile::constant(double value) {
  return custom([value](const ModelParams&, double) { return value; }, fmt::format("constant {}", value));
}

VProfile VProfile::custom(std::function<double(const ModelParams&, double)> v, std::string label) {
  VProfile p;
  p.kind_ = Kind::Custom;
  p.fn_ = std::move(v);
  p.label_ = std::move(label);
  return p;
}

double VProfile::v(const ModelParams& params, double t) const {
  if (kind_ == Kind::Kahler) return (params.c - params.A * params.A * t) / (params.A * t);
  return fn_(params, t);
}

double VProfile::w(const ModelParams& params, double t) const {
  const double vv = v(params, t);
  return -vv / (params.A * t * t * (params.A + 2.0 * vv));
}

TubeVerdict tube_check(const ModelParams& params, const BundlePoint& pt) {
  TubeVerdict out;
  if (pt.p.isZero(0.0)) {
    out.reason = "p = 0: outside the punctured bundle";
    return out;
  }
  const BaseMetricData base = metric_at(params, BasePoint{pt.x});
  out.norm_sq = pt.p.dot(base.g_inv * pt.p);
  if (auto bad = params.admissibility_violation()) {
    out.reason = *bad;
    return out;
  }
  const double bound = 4.0 * params.c / (params.A * params.A);
  if (!(out.norm_sq < bound)) {
    out.reason = fmt::format("|p|^2 = {} >= 4c/A^2 = {}", out.norm_sq, bound);
    return out;
  }
  out.admissible = true;
  return out;
}

MatrixXd LiftedMetricData::adapted_metric() const {
  const int nn = n();
  MatrixXd m = MatrixXd::Zero(2 * nn, 2 * nn);
  m.topLeftCorner(nn, nn) = G;
  m.bottomRightCorner(nn, nn) = H;
  return m;
}

LiftedMetricData metric_components(const Model& model, const BundlePoint& pt) {
  const ModelParams& prm = model.params;
  if (pt.x.size() != prm.n || pt.p.size() != prm.n) throw std::invalid_argument("bundle point has wrong dimension");
  if (model.profile.is_kahler()) {
    const TubeVerdict verdict = tube_check(prm, pt);
    if (!verdict.admissible) throw DomainError(verdict.reason);
  } else if (!(prm.A > 0.0)) {
    throw DomainError("A > 0 required");
  }

  LiftedMetricData d;
  d.base = metric_at(prm, BasePoint{pt.x});
  d.p = pt.p;
  d.t = energy_density(d.base, pt.p);
  d.v = model.profile.v(prm, d.t);
  if (!(prm.A + 2.0 * d.v > 0.0))
    throw DomainError(fmt::format("A + 2v = {} must be positive", prm.A + 2.0 * d.v));
  d.w = model.profile.w(prm, d.t);
  d.g0 = raised_momentum(d.base, pt.p);
  d.frame = adapted_frame(d.base, pt.p);
  d.G = prm.A * d.t * d.base.g + d.v * pt.p * pt.p.transpose();
  d.H = d.base.g_inv / (prm.A * d.t) + d.w * d.g0 * d.g0.transpose();
  return d;
}

MatrixXd kahler_inverse_closed_form(const ModelParams& prm, const LiftedMetricData& d) {
  const double a2t = prm.A * prm.A * d.t;
  const double coeff = (prm.c - a2t) / (prm.A * d.t * d.t * (2.0 * prm.c - a2t));
  return d.base.g_inv / (prm.A * d.t) - coeff * d.g0 * d.g0.transpose();
}

MatrixXd assemble_full_metric(const LiftedMetricData& d) {
  return bilinear_to_coordinate(d.adapted_metric(), d.frame);
}

MatrixXd assemble_full_metric(const Model& model, const BundlePoint& pt) {
  return assemble_full_metric(metric_components(model, pt));
}

double tube_step_scale(const ModelParams& params, double t) {
  const double gap = 1.0 - params.A * params.A * t / (2.0 * params.c);
  return std::clamp(5.0 * gap, 0.05, 1.0);
}

template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> kahler_coordinate_metric(
    const ModelParams& params, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& z) {
  using M = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using V = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const int n = params.n;
  if (z.size() != 2 * n) throw std::invalid_argument("bundle coordinates have wrong dimension");
  const Scalar c = params.c;
  const Scalar a = params.A;
  const V x = z.head(n);
  const V p = z.tail(n);
  const Scalar f = 1 + c / 4 * x.squaredNorm();
  const V sigma = -c / 2 * x / f;
  const Scalar ps = p.dot(sigma);
  // p_k Gamma^k_ih = p_i sigma_h + p_h sigma_i - delta_ih (p . sigma)
  const M g0 = p * sigma.transpose() + sigma * p.transpose() - ps * M::Identity(n, n);
  const Scalar t = f * f * p.squaredNorm() / 2;
  const Scalar v = (c - a * a * t) / (a * t);
  const Scalar w = -v / (a * t * t * (a + 2 * v));
  const V up = f * f * p;
  const M big_g = a * t / (f * f) * M::Identity(n, n) + v * p * p.transpose();
  const M big_h = f * f / (a * t) * M::Identity(n, n) + w * up * up.transpose();
  M out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = big_g + g0.transpose() * big_h * g0;
  out.topRightCorner(n, n) = -g0.transpose() * big_h;
  out.bottomLeftCorner(n, n) = -big_h * g0;
  out.bottomRightCorner(n, n) = big_h;
  return out;
}

template Eigen::MatrixXd kahler_coordinate_metric<double>(const ModelParams&, const Eigen::VectorXd&);
template Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> kahler_coordinate_metric<long double>(
    const ModelParams&, const Eigen::Matrix<long double, Eigen::Dynamic, 1>&);

}  // namespace kahler
