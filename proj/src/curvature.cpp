#include "kahler/curvature.hpp"

#include "kahler/complex_structure.hpp"
#include "kahler/metric_jet.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kahler {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string_view family_name(CurvatureFamily f) {
  switch (f) {
    case CurvatureFamily::QQQ: return "QQQ";
    case CurvatureFamily::QQP: return "QQP";
    case CurvatureFamily::PPQ: return "PPQ";
    case CurvatureFamily::PPP: return "PPP";
    case CurvatureFamily::PQQ: return "PQQ";
    case CurvatureFamily::PQP: return "PQP";
  }
  return "?";
}

CurvatureBlocks curvature_closed_form(const Model& model, const LiftedMetricData& d) {
  if (!model.profile.is_kahler())
    throw std::invalid_argument("closed-form curvature blocks require the Kahler v profile");
  const int n = d.n();
  const double A = model.params.A;
  const double c = model.params.c;
  const double t = d.t;
  const double a2 = A * A;
  const double a2t = a2 * t;
  const double edge = 2.0 * c - a2t;
  const MatrixXd& g = d.base.g;
  const MatrixXd& gi = d.base.g_inv;
  const VectorXd& p = d.p;
  const VectorXd& g0 = d.g0;
  auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };

  const std::vector<Slot> lower3 = {Slot::Up, Slot::Down, Slot::Down, Slot::Down};
  const std::vector<Slot> upper3 = {Slot::Up, Slot::Up, Slot::Up, Slot::Down};
  CurvatureBlocks b{MTensor(n, lower3), MTensor(n, lower3), MTensor(n, upper3),
                    MTensor(n, upper3), MTensor(n, lower3), MTensor(n, upper3)};

  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          b.qqq(h, i, j, k) = 0.5 * a2t * (delta(h, i) * g(j, k) - delta(h, j) * g(i, k)) +
                              0.25 * a2 * (g(i, k) * p(j) - g(j, k) * p(i)) * g0(h) -
                              0.25 * a2 * (delta(h, i) * p(j) - delta(h, j) * p(i)) * p(k);
        }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int h = 0; h < n; ++h)
        for (int k = 0; k < n; ++k) {
          b.ppq(i, j, h, k) = -(delta(i, k) * gi(j, h) - delta(j, k) * gi(i, h)) / (2.0 * t) -
                              (gi(i, h) * g0(j) - gi(j, h) * g0(i)) * p(k) / (4.0 * t * t) +
                              (delta(i, k) * g0(j) - delta(j, k) * g0(i)) * g0(h) / (4.0 * t * t);
        }
  // PQQ^i_jkh stored as (i, j, k, h)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int h = 0; h < n; ++h) {
          b.pqq(i, j, k, h) = 0.5 * A * delta(i, j) * d.G(h, k) +
                              edge / (4.0 * t) * (delta(i, k) * p(h) + delta(i, h) * p(k)) * p(j) +
                              0.25 * a2 * (g(j, h) * p(k) + g(j, k) * p(h)) * g0(i) -
                              c / (2.0 * t * t) * g0(i) * p(j) * p(h) * p(k);
        }
  // PQP^{ikh}_j stored as (i, k, h, j)
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int h = 0; h < n; ++h)
        for (int j = 0; j < n; ++j) {
          b.pqp(i, k, h, j) = -0.5 * A * delta(i, j) * d.H(h, k) -
                              (gi(i, h) * g0(k) + gi(i, k) * g0(h)) * p(j) / (4.0 * t * t) -
                              a2 / (4.0 * t * edge) * (delta(h, j) * g0(k) + delta(k, j) * g0(h)) * g0(i) +
                              c / (2.0 * t * t * t * edge) * g0(i) * g0(h) * g0(k) * p(j);
        }
  b.qqp = b.qqq;
  b.qqp *= -1.0;
  b.ppp = b.ppq;
  b.ppp *= -1.0;
  return b;
}

CurvatureBlocks curvature_closed_form(const Model& model, const BundlePoint& pt) {
  return curvature_closed_form(model, metric_components(model, pt));
}

BundleTensor assemble_curvature(const CurvatureBlocks& b) {
  const int n = b.qqq.dim();
  BundleTensor k{MTensor(2 * n, curvature_slots()), Basis::Adapted};
  MTensor& r = k.comps;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int kk = 0; kk < n; ++kk)
        for (int h = 0; h < n; ++h) {
          r(h, i, j, kk) = b.qqq(h, i, j, kk);
          r(n + h, i, j, n + kk) = b.qqp(kk, i, j, h);
          r(h, n + i, n + j, kk) = b.ppq(i, j, h, kk);
          r(n + h, n + i, n + j, n + kk) = b.ppp(i, j, kk, h);
          r(n + h, n + i, j, kk) = b.pqq(i, j, kk, h);
          r(n + h, j, n + i, kk) = -b.pqq(i, j, kk, h);
          r(h, n + i, j, n + kk) = b.pqp(i, kk, h, j);
          r(h, j, n + i, n + kk) = -b.pqp(i, kk, h, j);
        }
  return k;
}

CurvatureBlocks extract_blocks(const BundleTensor& k) {
  if (k.basis != Basis::Adapted) throw std::invalid_argument("extract_blocks: adapted basis required");
  const int n = k.n();
  const MTensor& r = k.comps;
  const std::vector<Slot> lower3 = {Slot::Up, Slot::Down, Slot::Down, Slot::Down};
  const std::vector<Slot> upper3 = {Slot::Up, Slot::Up, Slot::Up, Slot::Down};
  CurvatureBlocks b{MTensor(n, lower3), MTensor(n, lower3), MTensor(n, upper3),
                    MTensor(n, upper3), MTensor(n, lower3), MTensor(n, upper3)};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int kk = 0; kk < n; ++kk)
        for (int h = 0; h < n; ++h) {
          b.qqq(h, i, j, kk) = r(h, i, j, kk);
          b.qqp(kk, i, j, h) = r(n + h, i, j, n + kk);
          b.ppq(i, j, h, kk) = r(h, n + i, n + j, kk);
          b.ppp(i, j, kk, h) = r(n + h, n + i, n + j, n + kk);
          b.pqq(i, j, kk, h) = r(n + h, n + i, j, kk);
          b.pqp(i, kk, h, j) = r(h, n + i, j, n + kk);
        }
  return b;
}

double curvature_structural_residual(const CurvatureBlocks& b) {
  const int n = b.qqq.dim();
  MTensor neg_qqq = b.qqq;
  neg_qqq *= -1.0;
  MTensor neg_ppq = b.ppq;
  neg_ppq *= -1.0;
  double worst = std::max(max_abs_diff(b.qqp, neg_qqq), max_abs_diff(b.ppp, neg_ppq));
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          worst = std::max(worst, std::abs(b.qqq(a, i, j, k) + b.qqq(a, j, i, k)));
          worst = std::max(worst, std::abs(b.ppq(i, j, a, k) + b.ppq(j, i, a, k)));
        }
  return worst;
}

namespace {

// Second-order jet of the coordinate metric. The Kahler profile is evaluated
// in long double so that nested differences stay above round-off.
MetricJet oracle_jet(const Model& model, const VectorXd& z, const fd::FdConfig& second) {
  const fd::FdConfig first = fd::FdConfig::first_derivative();
  if (model.profile.is_kahler()) {
    const ModelParams prm = model.params;
    const fd::ExtMatrixField metric = [prm](const fd::ExtVec& y) { return kahler_coordinate_metric(prm, y); };
    return metric_jet_ext(metric, z, true, first, second);
  }
  return metric_jet(coordinate_metric_field(model), z, true, first, second);
}

}  // namespace

CurvatureOracle curvature_oracle(const Model& model, const BundlePoint& pt) {
  const LiftedMetricData d = metric_components(model, pt);
  const double scale = tube_step_scale(model.params, d.t);
  const MetricJet jet = oracle_jet(model, pt.coords(), fd::FdConfig::second_derivative().scaled(scale));
  CurvatureOracle out;
  out.coordinate = BundleTensor{riemann_from_jet(jet), Basis::Coordinate};
  out.adapted = to_adapted(out.coordinate, d.frame);
  const double ginv = jet.g.inverse().cwiseAbs().maxCoeff();
  out.error_estimate = 2.0 * static_cast<double>(jet.g.rows()) * ginv * jet.error_estimate;
  out.unreliable = jet.unreliable;
  return out;
}

FamilyMismatch family_mismatch(const BundleTensor& closed, const BundleTensor& oracle, CurvatureFamily family) {
  const int n = closed.n();
  int oa = 0, ob = 0, oc = 0;
  switch (family) {
    case CurvatureFamily::QQQ: oa = 0, ob = 0, oc = 0; break;
    case CurvatureFamily::QQP: oa = 0, ob = 0, oc = n; break;
    case CurvatureFamily::PPQ: oa = n, ob = n, oc = 0; break;
    case CurvatureFamily::PPP: oa = n, ob = n, oc = n; break;
    case CurvatureFamily::PQQ: oa = n, ob = 0, oc = 0; break;
    case CurvatureFamily::PQP: oa = n, ob = 0, oc = n; break;
  }
  FamilyMismatch out;
  bool first = true;
  for (int d = 0; d < 2 * n; ++d)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          const double cv = closed.comps(d, oa + a, ob + b, oc + c);
          const double ov = oracle.comps(d, oa + a, ob + b, oc + c);
          const double diff = std::abs(cv - ov);
          if (first || diff > out.value) {
            first = false;
            out.value = diff;
            out.closed_value = cv;
            out.oracle_value = ov;
            out.component = fmt::format("{} (a={}, b={}, c={}) along E_{}", family_name(family), a, b, c, d);
          }
        }
  return out;
}

MatrixXd ricci(const BundleTensor& k) {
  const int m = k.comps.dim();
  MatrixXd ric = MatrixXd::Zero(m, m);
  for (int b = 0; b < m; ++b)
    for (int c = 0; c < m; ++c)
      for (int a = 0; a < m; ++a) ric(b, c) += k.comps(a, a, b, c);
  return ric;
}

double einstein_residual(const MatrixXd& ric, const MatrixXd& metric, const ModelParams& params) {
  return (ric - 0.5 * params.A * params.n * metric).cwiseAbs().maxCoeff();
}

double curvature_bianchi_residual(const BundleTensor& k) {
  const int m = k.comps.dim();
  const MTensor& r = k.comps;
  double worst = 0.0;
  for (int d = 0; d < m; ++d)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int c = 0; c < m; ++c)
          worst = std::max(worst, std::abs(r(d, a, b, c) + r(d, b, c, a) + r(d, c, a, b)));
  return worst;
}

namespace {

// lowered(w, a, b, c) = G(K(E_a, E_b) E_c, E_w)
MTensor lowered(const BundleTensor& k, const MatrixXd& metric) {
  return k.comps.transformed_axis(0, metric.transpose());
}

}  // namespace

double pair_antisymmetry_residual(const BundleTensor& k, const MatrixXd& metric) {
  const MTensor low = lowered(k, metric);
  const int m = low.dim();
  double worst = 0.0;
  for (int w = 0; w < m; ++w)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int c = 0; c < m; ++c) worst = std::max(worst, std::abs(low(w, a, b, c) + low(c, a, b, w)));
  return worst;
}

double kahler_compatibility_residual(const BundleTensor& k, const MatrixXd& metric, const MatrixXd& j) {
  const MTensor low = lowered(k, metric);
  // G(K(X,Y)JZ, JW): transform the Z slot (3) and the W slot (0) with J.
  const MTensor rotated = low.transformed_axis(3, j.transpose()).transformed_axis(0, j.transpose());
  return max_abs_diff(rotated, low);
}

double nabla_k_oracle(const Model& model, const BundlePoint& pt, double* error_estimate) {
  const LiftedMetricData d = metric_components(model, pt);
  const int m = 2 * d.n();
  const VectorXd z = pt.coords();
  const double scale = tube_step_scale(model.params, d.t);
  const fd::FdConfig inner = fd::FdConfig::second_derivative().scaled(scale);

  auto k_field = [&](const VectorXd& y) { return riemann_from_jet(oracle_jet(model, y, inner)).flattened(); };
  const MTensor k0 = riemann_from_jet(oracle_jet(model, z, inner));
  const fd::JacobianResult dk = fd::jacobian(k_field, z, fd::FdConfig::nested_outer().scaled(scale));
  const MTensor gam = koszul_oracle(coordinate_metric_field(model), z).christoffel.comps;

  // nk(e, a, x, y, w) = (nabla_e K)(a; x, y, w)
  MTensor nk(m, {Slot::Down, Slot::Up, Slot::Down, Slot::Down, Slot::Down});
  for (int e = 0; e < m; ++e) {
    MTensor de(m, curvature_slots());
    de.assign_flat(dk.value.col(e));
    MatrixXd ge(m, m);  // ge(a, f) = Gamma^a_{e f}
    for (int a = 0; a < m; ++a)
      for (int f = 0; f < m; ++f) ge(a, f) = gam(a, e, f);
    MTensor cov = de;
    cov += k0.transformed_axis(0, ge);
    for (int axis = 1; axis < 4; ++axis) cov -= k0.transformed_axis(axis, ge.transpose());
    for (int a = 0; a < m; ++a)
      for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y)
          for (int w = 0; w < m; ++w) nk(e, a, x, y, w) = cov(a, x, y, w);
  }
  const BundleTensor adapted = to_adapted(BundleTensor{nk, Basis::Coordinate}, d.frame);
  if (error_estimate) *error_estimate = dk.error_estimate;
  return adapted.comps.max_abs();
}

std::array<double, 8> symmetry_identities(const Model& model, const BundlePoint& pt) {
  auto block_field = [&](MTensor CurvatureBlocks::*member) -> MTensorField {
    return [&model, member](const BundlePoint& q) { return curvature_closed_form(model, q).*member; };
  };
  const std::array<MTensor CurvatureBlocks::*, 4> members{&CurvatureBlocks::qqq, &CurvatureBlocks::ppq,
                                                          &CurvatureBlocks::pqq, &CurvatureBlocks::pqp};
  std::array<double, 8> out{};
  for (std::size_t i = 0; i < members.size(); ++i) {
    const MTensorField f = block_field(members[i]);
    out[i] = frame_derivative_defect(f, model, pt, FrameDirection::Horizontal);
    out[i + 4] = frame_derivative_defect(f, model, pt, FrameDirection::Vertical);
  }
  return out;
}

LocalSymmetryReport nabla_k(const Model& model, const BundlePoint& pt) {
  LocalSymmetryReport rep;
  rep.nabla_k = nabla_k_oracle(model, pt, &rep.nabla_k_error_estimate);
  rep.identities = symmetry_identities(model, pt);
  return rep;
}

double holomorphic_sectional_curvature(const BundleTensor& k, const MatrixXd& metric, const MatrixXd& j,
                                       const VectorXd& x) {
  if (x.isZero(0.0)) throw std::invalid_argument("holomorphic sectional curvature: zero direction");
  const int m = k.comps.dim();
  const VectorXd jx = j * x;
  VectorXd kx = VectorXd::Zero(m);
  for (int d = 0; d < m; ++d)
    for (int a = 0; a < m; ++a) {
      if (x(a) == 0.0) continue;
      for (int b = 0; b < m; ++b) {
        if (jx(b) == 0.0) continue;
        for (int c = 0; c < m; ++c) kx(d) += k.comps(d, a, b, c) * x(a) * jx(b) * jx(c);
      }
    }
  const double norm = x.dot(metric * x);
  return kx.dot(metric * x) / (norm * norm);
}

}  // namespace kahler
