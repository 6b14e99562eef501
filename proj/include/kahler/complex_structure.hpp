#pragma once

#include "kahler/fd_engine.hpp"
#include "kahler/lifted_metric.hpp"
#include "kahler/mtensor.hpp"

#include <Eigen/Dense>

namespace kahler {

/// J(delta_i) = G_ik d/dp_k, J(d/dp_i) = -H^ik delta_k.
/// Column a of each matrix holds the image of the a-th basis vector.
struct AlmostComplexData {
  Eigen::MatrixXd adapted;
  Eigen::MatrixXd coordinate;
};

Eigen::MatrixXd j_adapted(const LiftedMetricData& data);
AlmostComplexData j_matrix(const Model& model, const BundlePoint& pt);
AlmostComplexData j_matrix(const LiftedMetricData& data);

/// max |J^2 + I| in the adapted frame.
double j_squared_residual(const Eigen::MatrixXd& j);

/// max over basis pairs of |G(JX, JY) - G(X, Y)|.
double hermitian_residual(const Eigen::MatrixXd& metric, const Eigen::MatrixXd& j);

/// phi(X, Y) = G(X, JY), as coefficient matrices in both frames.
struct FundamentalForm {
  Eigen::MatrixXd adapted;
  Eigen::MatrixXd coordinate;
  double dphi_residual = 0.0;  // max |d phi| by finite differences
  double dphi_error_estimate = 0.0;
};

FundamentalForm fundamental_form(const Model& model, const BundlePoint& pt,
                                 const fd::FdConfig& cfg = fd::FdConfig::first_derivative());

/// Deviation of phi from the canonical symplectic form: adapted blocks
/// (0, 0 on the diagonal, phi(d/dp_i, delta_j) = delta^i_j) and coordinate
/// coefficients of dp_i ^ dq^i.
double phi_block_residual(const FundamentalForm& phi);

/// N(E_a, E_b) in the adapted frame: comps(c, a, b) is the component along
/// E_c, with E_0..E_{n-1} = delta/delta q and E_n..E_{2n-1} = d/dp.
struct NijenhuisData {
  BundleTensor tensor;
  double error_estimate = 0.0;  // fd only
  bool unreliable = false;

  double max_abs() const { return tensor.comps.max_abs(); }
  /// max |N(X, Y) + N(Y, X)| restricted to one pair family.
  double antisymmetry_residual(Part first, Part second) const;
};

/// Component formulas with the core factor
/// {A t (v + A)(delta^h_i g_jk - delta^h_j g_ik) - R^h_kij} p_h.
NijenhuisData nijenhuis_closed_form(const Model& model, const BundlePoint& pt);
NijenhuisData nijenhuis_closed_form(const Model& model, const LiftedMetricData& data);

/// N(X,Y) = [JX,JY] - J[JX,Y] - J[X,JY] - [X,Y] with finite-difference
/// brackets of the frame fields and their J-images on R^2n.
NijenhuisData nijenhuis_fd(const Model& model, const BundlePoint& pt,
                           const fd::FdConfig& cfg = fd::FdConfig::first_derivative());

}  // namespace kahler
