#pragma once

#include "kahler/fd_engine.hpp"
#include "kahler/mtensor.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>

namespace kahler {

/// Model constants: base dimension n, sectional curvature c of the base and
/// the lift constant A.
struct ModelParams {
  int n = 3;
  double c = 1.0;
  double A = 1.0;

  /// Throws std::invalid_argument for n < 2 or non-finite constants.
  void validate() const;

  /// Set for n = 2: constancy of the sectional curvature cannot be derived
  /// pointwise there and is simply assumed.
  bool low_dimension_warning() const noexcept { return n == 2; }

  /// Reason the Kahler tube is empty for these constants, if it is.
  std::optional<std::string> admissibility_violation() const;
  bool admissible() const { return !admissibility_violation().has_value(); }
};

struct BasePoint {
  Eigen::VectorXd x;
};

/// Base metric and its Levi-Civita data at one chart point.
struct BaseMetricData {
  Eigen::MatrixXd g;
  Eigen::MatrixXd g_inv;
  MTensor gamma;   // Gamma^k_ih as (k, i, h)
  MTensor dgamma;  // d_l Gamma^k_ih as (k, i, h, l)
  MTensor riem;    // R^h_kij as (h, k, i, j)
};

/// Conformal factor 1 + (c/4)|x|^2 of the stereographic chart; the metric is
/// delta_ij / factor^2.
double conformal_factor(double c, const Eigen::VectorXd& x);

/// Closed-form base geometry on the stereographic chart of the space form
/// of curvature c. Throws DomainError when c < 0 and |x|^2 >= -4/c.
BaseMetricData metric_at(const ModelParams& params, const BasePoint& x);

/// Just g_ij(x).
Eigen::MatrixXd base_metric(const ModelParams& params, const Eigen::VectorXd& x);

/// Christoffel symbols and curvature recomputed from g by finite differences,
/// in the same layouts as BaseMetricData.
struct BaseFdGeometry {
  MTensor gamma;
  MTensor riem;
  double error_estimate = 0.0;
};
BaseFdGeometry fd_base_geometry(const ModelParams& params, const BasePoint& x);

enum class CurvatureSource { ClosedForm, FiniteDifference };

/// max |R^h_kij - c (delta^h_i g_jk - delta^h_j g_ik)|.
double verify_constant_curvature(const ModelParams& params, const BasePoint& x,
                                 CurvatureSource source = CurvatureSource::ClosedForm);

/// max |R^h_kij + R^h_ijk + R^h_jki| of a tensor in the (h, k, i, j) layout.
double first_bianchi_residual(const MTensor& riem);

}  // namespace kahler
