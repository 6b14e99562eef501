#include "kahler/connection.hpp"

#include "kahler/metric_jet.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kahler {

using Eigen::MatrixXd;
using Eigen::VectorXd;

BundleTensor assemble_adapted_connection(const LiftedMetricData& d, const MTensor& q, const MTensor& p,
                                         const MTensor& s) {
  const int n = d.n();
  const MTensor& gamma = d.base.gamma;
  BundleTensor omega{MTensor(2 * n, {Slot::Up, Slot::Down, Slot::Down}), Basis::Adapted};
  MTensor& w = omega.comps;
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        w(n + h, n + i, n + j) = q(i, j, h);
        w(n + h, i, n + j) = -gamma(j, i, h);
        w(h, i, n + j) = p(h, j, i);
        w(h, n + i, j) = p(h, i, j);
        w(h, i, j) = gamma(h, i, j);
        w(n + h, i, j) = s(h, i, j);
      }
  return omega;
}

ConnectionCoefficients coefficients_closed_form(const Model& model, const LiftedMetricData& d) {
  if (!model.profile.is_kahler())
    throw std::invalid_argument("closed-form connection coefficients require the Kahler v profile");
  const ModelParams& prm = model.params;
  const int n = d.n();
  const double t = d.t;
  const double c = prm.c;
  const double a2t = prm.A * prm.A * t;
  const MatrixXd& g = d.base.g;
  const MatrixXd& gi = d.base.g_inv;
  const VectorXd& p = d.p;
  const VectorXd& g0 = d.g0;

  ConnectionCoefficients out;
  out.Q = MTensor(n, {Slot::Up, Slot::Up, Slot::Down});
  out.P = MTensor(n, {Slot::Up, Slot::Up, Slot::Down});
  out.S = MTensor(n, {Slot::Down, Slot::Down, Slot::Down});
  const double q_coeff = c / (t * (2.0 * c - a2t));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int h = 0; h < n; ++h) {
        out.Q(i, j, h) = ((gi(i, j) + q_coeff * g0(i) * g0(j)) * p(h) -
                          ((i == h ? g0(j) : 0.0) + (j == h ? g0(i) : 0.0))) /
                         (2.0 * t);
      }
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        out.P(h, i, j) = -out.Q(i, h, j);
        out.S(h, i, j) = 0.5 * (-2.0 * c + a2t) * (g(i, j) * p(h) + g(i, h) * p(j)) + 0.5 * a2t * g(h, j) * p(i) +
                         (3.0 * c - 2.0 * a2t) / (2.0 * t) * p(h) * p(i) * p(j);
      }
  out.omega = assemble_adapted_connection(d, out.Q, out.P, out.S);
  return out;
}

ConnectionCoefficients coefficients_closed_form(const Model& model, const BundlePoint& pt) {
  return coefficients_closed_form(model, metric_components(model, pt));
}

KoszulResult koszul_oracle(const fd::MatrixField& metric, const VectorXd& z, const fd::FdConfig& cfg) {
  const MetricJet jet = metric_jet(metric, z, false, cfg);
  KoszulResult out;
  out.christoffel = BundleTensor{christoffel_from_jet(jet), Basis::Coordinate};
  const double ginv_scale = jet.g.inverse().cwiseAbs().maxCoeff();
  out.error_estimate = 1.5 * static_cast<double>(z.size()) * ginv_scale * jet.error_estimate;
  out.unreliable = jet.unreliable;
  return out;
}

BundleTensor adapted_connection(const BundleTensor& christoffel, const AdaptedFrame& f,
                                const std::vector<MatrixXd>& dframe) {
  if (christoffel.basis != Basis::Coordinate)
    throw std::invalid_argument("adapted_connection: Christoffel symbols must be in the coordinate basis");
  const int m = christoffel.comps.dim();
  const MTensor& gam = christoffel.comps;
  const MatrixXd& phi = f.frame;
  BundleTensor omega{MTensor(m, {Slot::Up, Slot::Down, Slot::Down}), Basis::Adapted};
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      // nabla_{E_a} E_b in coordinate components
      VectorXd v = VectorXd::Zero(m);
      for (int e = 0; e < m; ++e) {
        const double ea = phi(e, a);
        if (ea == 0.0) continue;
        for (int dd = 0; dd < m; ++dd) {
          double s = dframe[static_cast<std::size_t>(e)](dd, b);
          for (int ff = 0; ff < m; ++ff) s += gam(dd, e, ff) * phi(ff, b);
          v(dd) += ea * s;
        }
      }
      const VectorXd w = f.coframe * v;
      for (int c = 0; c < m; ++c) omega.comps(c, a, b) = w(c);
    }
  return omega;
}

fd::MatrixField coordinate_metric_field(const Model& model) {
  return [model](const VectorXd& y) { return assemble_full_metric(model, BundlePoint::from_coords(y)); };
}

namespace {

std::string slot_name(int idx, int n) {
  return idx < n ? fmt::format("h{}", idx) : fmt::format("v{}", idx - n);
}

}  // namespace

ConnectionReport verify_connection(const Model& model, const BundlePoint& pt) {
  const LiftedMetricData d = metric_components(model, pt);
  const int n = d.n();
  const int m = 2 * n;
  const ConnectionCoefficients cf = coefficients_closed_form(model, d);
  const MTensor& w = cf.omega.comps;
  const VectorXd z = pt.coords();

  ConnectionReport rep;

  const KoszulResult kz = koszul_oracle(coordinate_metric_field(model), z);
  const BundleTensor oracle = adapted_connection(kz.christoffel, d.frame, frame_partials(d.base, d.p));
  rep.oracle_error_estimate = kz.error_estimate;
  for (int c = 0; c < m; ++c)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        const double diff = std::abs(w(c, a, b) - oracle.comps(c, a, b));
        if (diff > rep.mismatch || rep.worst_component.empty()) {
          rep.mismatch = std::max(rep.mismatch, diff);
          rep.worst_component =
              fmt::format("nabla_{} {} along {}", slot_name(a, n), slot_name(b, n), slot_name(c, n));
          rep.closed_value = w(c, a, b);
          rep.oracle_value = oracle.comps(c, a, b);
        }
      }

  // (nabla_{E_a} G)(E_b, E_c) = E_a(G_bc) - G(nabla_a E_b, E_c) - G(E_b, nabla_a E_c)
  const MatrixXd gad = d.adapted_metric();
  auto gad_field = [&](const VectorXd& y) {
    return fd::flatten(metric_components(model, BundlePoint::from_coords(y)).adapted_metric());
  };
  for (int a = 0; a < m; ++a) {
    const MatrixXd dg = fd::unflatten(fd::directional_derivative(gad_field, z, d.frame.frame.col(a)).value, m, m);
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        double s = dg(b, c);
        for (int e = 0; e < m; ++e) s -= w(e, a, b) * gad(e, c) + w(e, a, c) * gad(b, e);
        rep.nabla_g = std::max(rep.nabla_g, std::abs(s));
      }
  }

  const BundleTensor br = adapted_brackets(d.base, d.p);
  for (int c = 0; c < m; ++c)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        rep.torsion = std::max(rep.torsion, std::abs(w(c, a, b) - w(c, b, a) - br.comps(c, a, b)));
  return rep;
}

double connection_structure_residual(const ConnectionCoefficients& cf) {
  const int n = cf.Q.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int h = 0; h < n; ++h) {
        worst = std::max(worst, std::abs(cf.Q(i, j, h) - cf.Q(j, i, h)));
        worst = std::max(worst, std::abs(cf.P(h, i, j) + cf.Q(i, h, j)));
      }
  return worst;
}

double horizontal_torsion_residual(const ConnectionCoefficients& cf, const LiftedMetricData& d) {
  const int n = cf.S.dim();
  const MTensor r0 = contracted_curvature(d.base, d.p);
  double worst = 0.0;
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(cf.S(h, i, j) - cf.S(h, j, i) - r0(h, i, j)));
  return worst;
}

double frame_derivative_defect(const MTensorField& field, const Model& model, const BundlePoint& pt,
                               FrameDirection direction, const fd::FdConfig& cfg) {
  const LiftedMetricData d = metric_components(model, pt);
  const int n = d.n();
  const VectorXd z = pt.coords();
  const MTensor t0 = field(pt);
  const ConnectionCoefficients cf =
      direction == FrameDirection::Vertical ? coefficients_closed_form(model, d) : ConnectionCoefficients{};
  auto flat_field = [&](const VectorXd& y) { return field(BundlePoint::from_coords(y)).flattened(); };

  double worst = 0.0;
  for (int l = 0; l < n; ++l) {
    MatrixXd coupling(n, n);
    VectorXd dir;
    if (direction == FrameDirection::Horizontal) {
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) coupling(a, b) = d.base.gamma(a, l, b);
      dir = d.frame.frame.col(l);
    } else {
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) coupling(a, b) = cf.P(a, l, b);
      dir = VectorXd::Unit(2 * n, n + l);
    }
    MTensor rule(n, t0.slots());
    for (int k = 0; k < t0.rank(); ++k) {
      const bool up = t0.slots()[static_cast<std::size_t>(k)] == Slot::Up;
      rule += t0.transformed_axis(k, up ? MatrixXd(-coupling) : MatrixXd(coupling.transpose()));
    }
    const VectorXd lhs = fd::directional_derivative(flat_field, z, dir, cfg).value;
    worst = std::max(worst, (lhs - rule.flattened()).cwiseAbs().maxCoeff());
  }
  return worst;
}

double base_parallel_residual(const Model& model, const BundlePoint& pt) {
  auto g_field = [&](const BundlePoint& q) {
    const LiftedMetricData d = metric_components(model, q);
    MTensor t(d.n(), {Slot::Down, Slot::Down});
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(t.data().data(), d.n(), d.n()) = d.G;
    return t;
  };
  auto h_field = [&](const BundlePoint& q) {
    const LiftedMetricData d = metric_components(model, q);
    MTensor t(d.n(), {Slot::Up, Slot::Up});
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(t.data().data(), d.n(), d.n()) = d.H;
    return t;
  };
  return std::max(frame_derivative_defect(g_field, model, pt, FrameDirection::Horizontal),
                  frame_derivative_defect(h_field, model, pt, FrameDirection::Horizontal));
}

}  // namespace kahler
