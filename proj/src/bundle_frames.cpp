#include "kahler/bundle_frames.hpp"

#include "kahler/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kahler {

using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd BundlePoint::coords() const {
  VectorXd z(2 * n());
  z << x, p;
  return z;
}

BundlePoint BundlePoint::from_coords(const VectorXd& z) {
  if (z.size() % 2 != 0) throw std::invalid_argument("bundle coordinates must have even length");
  const Eigen::Index n = z.size() / 2;
  return BundlePoint{z.head(n), z.tail(n)};
}

double energy_density(const BaseMetricData& base, const VectorXd& p) {
  if (p.size() != base.g.rows()) throw std::invalid_argument("covector has wrong dimension");
  if (p.isZero(0.0)) throw DomainError("p = 0 lies on the zero section, outside the punctured bundle");
  const double t = 0.5 * p.dot(base.g_inv * p);
  if (!(t > 0.0)) throw DomainError("energy density must be positive");
  return t;
}

double energy_density(const ModelParams& params, const BundlePoint& pt) {
  if (pt.p.size() != params.n) throw std::invalid_argument("covector has wrong dimension");
  if (pt.p.isZero(0.0)) throw DomainError("p = 0 lies on the zero section, outside the punctured bundle");
  return energy_density(metric_at(params, BasePoint{pt.x}), pt.p);
}

VectorXd raised_momentum(const BaseMetricData& base, const VectorXd& p) { return base.g_inv * p; }

MatrixXd contracted_christoffel(const BaseMetricData& base, const VectorXd& p) {
  const int n = static_cast<int>(p.size());
  MatrixXd g0 = MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int h = 0; h < n; ++h)
      for (int k = 0; k < n; ++k) g0(i, h) += p(k) * base.gamma(k, i, h);
  return g0;
}

MTensor contracted_curvature(const BaseMetricData& base, const VectorXd& p) {
  const int n = static_cast<int>(p.size());
  MTensor r0(n, {Slot::Down, Slot::Down, Slot::Down});
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int h = 0; h < n; ++h) s += p(h) * base.riem(h, k, i, j);
        r0(k, i, j) = s;
      }
  return r0;
}

AdaptedFrame adapted_frame(const BaseMetricData& base, const VectorXd& p) {
  const Eigen::Index n = p.size();
  const MatrixXd g0 = contracted_christoffel(base, p);
  AdaptedFrame f;
  f.frame = MatrixXd::Identity(2 * n, 2 * n);
  f.coframe = MatrixXd::Identity(2 * n, 2 * n);
  // delta/delta q^i = d/dq^i + Gamma^0_ih d/dp_h ; Dp_h = dp_h - Gamma^0_hj dq^j
  f.frame.bottomLeftCorner(n, n) = g0.transpose();
  f.coframe.bottomLeftCorner(n, n) = -g0;
  return f;
}

AdaptedFrame adapted_frame(const ModelParams& params, const BundlePoint& pt) {
  return adapted_frame(metric_at(params, BasePoint{pt.x}), pt.p);
}

std::vector<MatrixXd> frame_partials(const BaseMetricData& base, const VectorXd& p) {
  const int n = static_cast<int>(p.size());
  std::vector<MatrixXd> out(static_cast<std::size_t>(2 * n), MatrixXd::Zero(2 * n, 2 * n));
  for (int l = 0; l < n; ++l) {
    MatrixXd& dq = out[static_cast<std::size_t>(l)];
    MatrixXd& dp = out[static_cast<std::size_t>(n + l)];
    for (int i = 0; i < n; ++i)
      for (int h = 0; h < n; ++h) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += p(k) * base.dgamma(k, i, h, l);
        dq(n + h, i) = s;
        dp(n + h, i) = base.gamma(l, i, h);
      }
  }
  return out;
}

double coframe_duality_residual(const AdaptedFrame& f) {
  const MatrixXd pairing = f.coframe * f.frame;
  return (pairing - MatrixXd::Identity(pairing.rows(), pairing.cols())).cwiseAbs().maxCoeff();
}

namespace {

BundleTensor change_basis(const BundleTensor& t, const MatrixXd& up, const MatrixXd& down, Basis target) {
  BundleTensor out{t.comps, target};
  for (int axis = 0; axis < t.comps.rank(); ++axis)
    out.comps = out.comps.transformed_axis(axis, t.comps.slots()[static_cast<std::size_t>(axis)] == Slot::Up ? up : down);
  return out;
}

}  // namespace

BundleTensor to_coordinate(const BundleTensor& t, const AdaptedFrame& f) {
  if (t.basis != Basis::Adapted) throw std::invalid_argument("to_coordinate: tensor is not in the adapted basis");
  if (t.comps.dim() != f.frame.rows()) throw std::invalid_argument("to_coordinate: dimension mismatch");
  return change_basis(t, f.frame, f.coframe.transpose(), Basis::Coordinate);
}

BundleTensor to_adapted(const BundleTensor& t, const AdaptedFrame& f) {
  if (t.basis != Basis::Coordinate) throw std::invalid_argument("to_adapted: tensor is not in the coordinate basis");
  if (t.comps.dim() != f.frame.rows()) throw std::invalid_argument("to_adapted: dimension mismatch");
  return change_basis(t, f.coframe, f.frame.transpose(), Basis::Adapted);
}

MatrixXd bilinear_to_coordinate(const MatrixXd& adapted, const AdaptedFrame& f) {
  return f.coframe.transpose() * adapted * f.coframe;
}

MatrixXd bilinear_to_adapted(const MatrixXd& coordinate, const AdaptedFrame& f) {
  return f.frame.transpose() * coordinate * f.frame;
}

BundleTensor adapted_brackets(const BaseMetricData& base, const VectorXd& p) {
  const int n = static_cast<int>(p.size());
  const MTensor r0 = contracted_curvature(base, p);
  BundleTensor b{MTensor(2 * n, {Slot::Up, Slot::Down, Slot::Down}), Basis::Adapted};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        b.comps(n + k, i, j) = r0(k, i, j);
        b.comps(n + k, n + i, j) = base.gamma(i, j, k);
        b.comps(n + k, j, n + i) = -base.gamma(i, j, k);
      }
  return b;
}

double BracketResiduals::max() const { return std::max({vertical_vertical, mixed, horizontal_horizontal}); }

BracketResiduals verify_brackets(const ModelParams& params, const BundlePoint& pt, const fd::FdConfig& cfg) {
  const int n = params.n;
  const VectorXd z = pt.coords();
  auto frame_field = [&](const VectorXd& y) {
    const BundlePoint q = BundlePoint::from_coords(y);
    return adapted_frame(metric_at(params, BasePoint{q.x}), q.p).frame;
  };
  const MatrixXd frame = frame_field(z);
  const fd::MatrixPartials d = fd::matrix_partials(frame_field, z, cfg);

  auto field_jacobian = [&](int a) {
    MatrixXd j(2 * n, 2 * n);
    for (int e = 0; e < 2 * n; ++e) j.col(e) = d.value[static_cast<std::size_t>(e)].col(a);
    return j;
  };
  auto bracket = [&](int a, int b) {
    return fd::lie_bracket(frame.col(a), field_jacobian(a), frame.col(b), field_jacobian(b));
  };

  const BaseMetricData base = metric_at(params, BasePoint{pt.x});
  const MTensor r0 = contracted_curvature(base, pt.p);

  BracketResiduals out;
  out.error_estimate = 2.0 * 2.0 * n * d.error_estimate * std::max(1.0, frame.cwiseAbs().maxCoeff());
  out.unreliable = d.unreliable;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out.vertical_vertical = std::max(out.vertical_vertical, bracket(n + i, n + j).cwiseAbs().maxCoeff());

      VectorXd mixed_expected = VectorXd::Zero(2 * n);
      for (int k = 0; k < n; ++k) mixed_expected(n + k) = base.gamma(i, j, k);
      out.mixed = std::max(out.mixed, (bracket(n + i, j) - mixed_expected).cwiseAbs().maxCoeff());
      out.mixed = std::max(out.mixed, (bracket(j, n + i) + mixed_expected).cwiseAbs().maxCoeff());

      VectorXd hh_expected = VectorXd::Zero(2 * n);
      for (int k = 0; k < n; ++k) hh_expected(n + k) = r0(k, i, j);
      out.horizontal_horizontal =
          std::max(out.horizontal_horizontal, (bracket(i, j) - hh_expected).cwiseAbs().maxCoeff());
    }
  return out;
}

double energy_derivative_residual(const ModelParams& params, const BundlePoint& pt) {
  const int n = params.n;
  const BaseMetricData base = metric_at(params, BasePoint{pt.x});
  const AdaptedFrame f = adapted_frame(base, pt.p);
  const VectorXd g0 = raised_momentum(base, pt.p);
  auto t_field = [&](const VectorXd& y) {
    VectorXd v(1);
    v(0) = energy_density(params, BundlePoint::from_coords(y));
    return v;
  };
  const VectorXd z = pt.coords();
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    worst = std::max(worst, std::abs(fd::directional_derivative(t_field, z, f.frame.col(k)).value(0)));
    worst = std::max(worst, std::abs(fd::directional_derivative(t_field, z, f.frame.col(n + k)).value(0) - g0(k)));
  }
  return worst;
}

}  // namespace kahler
