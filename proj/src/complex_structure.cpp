#include "kahler/complex_structure.hpp"

#include <algorithm>
#include <cmath>

namespace kahler {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd j_adapted(const LiftedMetricData& d) {
  const int n = d.n();
  MatrixXd j = MatrixXd::Zero(2 * n, 2 * n);
  j.bottomLeftCorner(n, n) = d.G;
  j.topRightCorner(n, n) = -d.H;
  return j;
}

AlmostComplexData j_matrix(const LiftedMetricData& d) {
  AlmostComplexData out;
  out.adapted = j_adapted(d);
  out.coordinate = d.frame.frame * out.adapted * d.frame.coframe;
  return out;
}

AlmostComplexData j_matrix(const Model& model, const BundlePoint& pt) { return j_matrix(metric_components(model, pt)); }

double j_squared_residual(const MatrixXd& j) {
  return (j * j + MatrixXd::Identity(j.rows(), j.cols())).cwiseAbs().maxCoeff();
}

double hermitian_residual(const MatrixXd& metric, const MatrixXd& j) {
  return (j.transpose() * metric * j - metric).cwiseAbs().maxCoeff();
}

FundamentalForm fundamental_form(const Model& model, const BundlePoint& pt, const fd::FdConfig& cfg) {
  const LiftedMetricData d = metric_components(model, pt);
  const MatrixXd j = j_adapted(d);
  FundamentalForm out;
  out.adapted = d.adapted_metric() * j;
  out.coordinate = bilinear_to_coordinate(out.adapted, d.frame);

  // phi as a coefficient field on R^2n, rebuilt from G and J at every point.
  auto phi_field = [&](const VectorXd& y) -> MatrixXd {
    const LiftedMetricData dy = metric_components(model, BundlePoint::from_coords(y));
    const AlmostComplexData jy = j_matrix(dy);
    return assemble_full_metric(dy) * jy.coordinate;
  };
  const fd::ExteriorDerivative dphi = fd::exterior_derivative_2form(phi_field, pt.coords(), cfg);
  out.dphi_residual = dphi.value.max_abs();
  out.dphi_error_estimate = dphi.error_estimate;
  return out;
}

double phi_block_residual(const FundamentalForm& phi) {
  const Eigen::Index n = phi.adapted.rows() / 2;
  MatrixXd canonical = MatrixXd::Zero(2 * n, 2 * n);
  // phi(d/dp_i, delta_j) = delta^i_j ; phi(delta_j, d/dp_i) = -delta^i_j
  canonical.bottomLeftCorner(n, n) = MatrixXd::Identity(n, n);
  canonical.topRightCorner(n, n) = -MatrixXd::Identity(n, n);
  return std::max((phi.adapted - canonical).cwiseAbs().maxCoeff(), (phi.coordinate - canonical).cwiseAbs().maxCoeff());
}

double NijenhuisData::antisymmetry_residual(Part first, Part second) const {
  const int n = tensor.n();
  const int off_a = first == Part::V ? n : 0;
  const int off_b = second == Part::V ? n : 0;
  double worst = 0.0;
  for (int c = 0; c < 2 * n; ++c)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        worst = std::max(worst, std::abs(tensor.comps(c, off_a + i, off_b + j) + tensor.comps(c, off_b + j, off_a + i)));
  return worst;
}

NijenhuisData nijenhuis_closed_form(const Model& model, const LiftedMetricData& d) {
  const ModelParams& prm = model.params;
  const int n = d.n();
  const MatrixXd& g = d.base.g;
  const VectorXd& p = d.p;
  const MTensor r0 = contracted_curvature(d.base, p);
  const double k = prm.A * d.t * (d.v + prm.A);

  // core(k, i, j) = A t (v + A)(p_i g_jk - p_j g_ik) - R^0_kij
  MTensor core(n, {Slot::Down, Slot::Down, Slot::Down});
  for (int kk = 0; kk < n; ++kk)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) core(kk, i, j) = k * (p(i) * g(j, kk) - p(j) * g(i, kk)) - r0(kk, i, j);

  NijenhuisData out{BundleTensor{MTensor(2 * n, {Slot::Up, Slot::Down, Slot::Down}), Basis::Adapted}};
  MTensor& t = out.tensor.comps;
  const MatrixXd& h = d.H;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int kk = 0; kk < n; ++kk) {
        t(n + kk, i, j) = core(kk, i, j);
        double hv = 0.0;
        double vv = 0.0;
        for (int l = 0; l < n; ++l)
          for (int r = 0; r < n; ++r) {
            hv += h(kk, l) * h(j, r) * core(l, i, r);
            vv += h(i, r) * h(j, l) * core(kk, l, r);
          }
        t(kk, i, n + j) = hv;
        t(kk, n + j, i) = -hv;
        t(n + kk, n + i, n + j) = vv;
      }
  return out;
}

NijenhuisData nijenhuis_closed_form(const Model& model, const BundlePoint& pt) {
  return nijenhuis_closed_form(model, metric_components(model, pt));
}

NijenhuisData nijenhuis_fd(const Model& model, const BundlePoint& pt, const fd::FdConfig& cfg) {
  const int n = model.params.n;
  const int m = 2 * n;
  const VectorXd z = pt.coords();

  auto frame_field = [&](const VectorXd& y) -> MatrixXd {
    const BundlePoint q = BundlePoint::from_coords(y);
    return adapted_frame(metric_at(model.params, BasePoint{q.x}), q.p).frame;
  };
  // Column a: J E_a in coordinate components.
  auto jframe_field = [&](const VectorXd& y) -> MatrixXd {
    const LiftedMetricData dy = metric_components(model, BundlePoint::from_coords(y));
    return dy.frame.frame * j_adapted(dy);
  };

  const LiftedMetricData d = metric_components(model, pt);
  const MatrixXd jc = j_matrix(d).coordinate;
  const MatrixXd e = frame_field(z);
  const MatrixXd je = jframe_field(z);
  const fd::MatrixPartials de = fd::matrix_partials(frame_field, z, cfg);
  const fd::MatrixPartials dje = fd::matrix_partials(jframe_field, z, cfg);

  auto column_jacobian = [&](const fd::MatrixPartials& dm, int a) {
    MatrixXd jac(m, m);
    for (int k = 0; k < m; ++k) jac.col(k) = dm.value[static_cast<std::size_t>(k)].col(a);
    return jac;
  };
  std::vector<MatrixXd> de_cols, dje_cols;
  for (int a = 0; a < m; ++a) {
    de_cols.push_back(column_jacobian(de, a));
    dje_cols.push_back(column_jacobian(dje, a));
  }

  NijenhuisData out{BundleTensor{MTensor(m, {Slot::Up, Slot::Down, Slot::Down}), Basis::Adapted}};
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const auto ua = static_cast<std::size_t>(a);
      const auto ub = static_cast<std::size_t>(b);
      const VectorXd jj = fd::lie_bracket(je.col(a), dje_cols[ua], je.col(b), dje_cols[ub]);
      const VectorXd jx = fd::lie_bracket(je.col(a), dje_cols[ua], e.col(b), de_cols[ub]);
      const VectorXd xj = fd::lie_bracket(e.col(a), de_cols[ua], je.col(b), dje_cols[ub]);
      const VectorXd xx = fd::lie_bracket(e.col(a), de_cols[ua], e.col(b), de_cols[ub]);
      const VectorXd nab = d.frame.coframe * (jj - jc * jx - jc * xj - xx);
      for (int c = 0; c < m; ++c) out.tensor.comps(c, a, b) = nab(c);
    }
  const double scale = std::max({1.0, e.cwiseAbs().maxCoeff(), je.cwiseAbs().maxCoeff(), jc.cwiseAbs().maxCoeff()});
  out.error_estimate = 4.0 * m * scale * scale * std::max(de.error_estimate, dje.error_estimate);
  out.unreliable = de.unreliable || dje.unreliable;
  return out;
}

}  // namespace kahler
