#pragma once

#include "kahler/fd_engine.hpp"
#include "kahler/lifted_metric.hpp"
#include "kahler/mtensor.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace kahler {

/// Levi-Civita connection of the Kahler tube metric in the adapted frame.
///
///   nabla_{d/dp_i} d/dp_j     = Q^{ij}_h d/dp_h
///   nabla_{delta_i} d/dp_j    = -Gamma^j_ih d/dp_h + P^{hj}_i delta_h
///   nabla_{d/dp_i} delta_j    = P^{hi}_j delta_h
///   nabla_{delta_i} delta_j   = Gamma^h_ij delta_h + S_hij d/dp_h
struct ConnectionCoefficients {
  MTensor Q;  // Q^{ij}_h stored as (i, j, h)
  MTensor P;  // P^{hi}_j stored as (h, i, j)
  MTensor S;  // S_hij stored as (h, i, j)
  /// comps(c, a, b): E_c component of nabla_{E_a} E_b.
  BundleTensor omega;
};

/// Explicit Kahler-mode coefficients. Throws std::invalid_argument for a
/// custom v profile and DomainError outside the tube.
ConnectionCoefficients coefficients_closed_form(const Model& model, const BundlePoint& pt);
ConnectionCoefficients coefficients_closed_form(const Model& model, const LiftedMetricData& data);

/// Adapted-frame connection table assembled from Q, P, S and the base
/// Christoffel symbols.
BundleTensor assemble_adapted_connection(const LiftedMetricData& data, const MTensor& q, const MTensor& p,
                                         const MTensor& s);

struct KoszulResult {
  /// Coordinate Christoffel symbols: comps(a, b, c) = component a of
  /// nabla_{d_b} d_c.
  BundleTensor christoffel;
  double error_estimate = 0.0;
  bool unreliable = false;
};

/// Christoffel symbols of an arbitrary metric field on R^m from finite
/// differences of its components (the coordinate form of the Koszul formula).
KoszulResult koszul_oracle(const fd::MatrixField& metric, const Eigen::VectorXd& z,
                           const fd::FdConfig& cfg = fd::FdConfig::first_derivative());

/// Coordinate Christoffel symbols re-expressed as adapted-frame connection
/// coefficients, using the analytic derivatives of the frame.
BundleTensor adapted_connection(const BundleTensor& christoffel, const AdaptedFrame& frame,
                                const std::vector<Eigen::MatrixXd>& frame_partials);

/// Metric field z -> coordinate matrix of the lifted metric.
fd::MatrixField coordinate_metric_field(const Model& model);

struct ConnectionReport {
  double nabla_g = 0.0;   // closed-form connection against fd derivatives of G
  double torsion = 0.0;   // closed-form connection against the bracket table
  double mismatch = 0.0;  // closed form vs Koszul oracle
  double oracle_error_estimate = 0.0;
  std::string worst_component;  // where the mismatch peaks
  double closed_value = 0.0;
  double oracle_value = 0.0;
};

ConnectionReport verify_connection(const Model& model, const BundlePoint& pt);

/// max of |Q^{ij}_h - Q^{ji}_h| and |P^{hi}_j + Q^{ih}_j|.
double connection_structure_residual(const ConnectionCoefficients& coeffs);

/// Max deviation of S_hij - S_hji from R^0_hij.
double horizontal_torsion_residual(const ConnectionCoefficients& coeffs, const LiftedMetricData& data);

enum class FrameDirection { Horizontal, Vertical };

using MTensorField = std::function<MTensor(const BundlePoint&)>;

/// Defect of the rule by which M-tensor fields differentiate along the
/// frame:
///   delta_l T = sum_up -Gamma^u_ls T^{..s..} + sum_down Gamma^s_ld T_{..s..}
///   d^l T     = sum_up -P^{ul}_s T^{..s..}    + sum_down P^{sl}_d T_{..s..}
/// The left side is a finite-difference directional derivative of `field`.
/// Returns the max over l and all components.
double frame_derivative_defect(const MTensorField& field, const Model& model, const BundlePoint& pt,
                               FrameDirection direction, const fd::FdConfig& cfg = fd::FdConfig::first_derivative());

/// delta_i G_jk and delta_i H^jk against the base covariant-derivative rule.
double base_parallel_residual(const Model& model, const BundlePoint& pt);

}  // namespace kahler
