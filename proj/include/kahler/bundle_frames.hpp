#pragma once

#include "kahler/base_geometry.hpp"
#include "kahler/fd_engine.hpp"
#include "kahler/mtensor.hpp"

#include <Eigen/Dense>

#include <vector>

namespace kahler {

/// A covector p at the chart point x. Bundle coordinates are z = (q, p)
/// with q = x, so every 2n-vector in this library lists the n horizontal
/// (or q) components before the n vertical (or p) components.
struct BundlePoint {
  Eigen::VectorXd x;
  Eigen::VectorXd p;

  int n() const noexcept { return static_cast<int>(x.size()); }
  Eigen::VectorXd coords() const;
  static BundlePoint from_coords(const Eigen::VectorXd& z);
};

/// t = 1/2 g^ik p_i p_k. Throws DomainError on the zero section.
double energy_density(const ModelParams& params, const BundlePoint& pt);
double energy_density(const BaseMetricData& base, const Eigen::VectorXd& p);

/// g^0k = p_h g^hk.
Eigen::VectorXd raised_momentum(const BaseMetricData& base, const Eigen::VectorXd& p);

/// Gamma^0_ih = p_k Gamma^k_ih.
Eigen::MatrixXd contracted_christoffel(const BaseMetricData& base, const Eigen::VectorXd& p);

/// R^0_kij = p_h R^h_kij, slots (k, i, j).
MTensor contracted_curvature(const BaseMetricData& base, const Eigen::VectorXd& p);

/// Frame (delta/delta q^1..n, d/dp_1..n) and dual coframe (dq^i, Dp_i).
///
/// `frame` holds the frame vectors as columns in coordinate components;
/// `coframe` holds the dual 1-forms as rows, so coframe * frame = I.
struct AdaptedFrame {
  Eigen::MatrixXd frame;
  Eigen::MatrixXd coframe;
};

AdaptedFrame adapted_frame(const BaseMetricData& base, const Eigen::VectorXd& p);
AdaptedFrame adapted_frame(const ModelParams& params, const BundlePoint& pt);

/// d_e of the frame matrix for each coordinate e of z, from the analytic
/// derivatives of the base Christoffel symbols.
std::vector<Eigen::MatrixXd> frame_partials(const BaseMetricData& base, const Eigen::VectorXd& p);

/// max |coframe * frame - I|.
double coframe_duality_residual(const AdaptedFrame& f);

/// Change of frame for tensors on the bundle. Throws std::invalid_argument
/// when the tensor is not in the source basis.
BundleTensor to_coordinate(const BundleTensor& t, const AdaptedFrame& f);
BundleTensor to_adapted(const BundleTensor& t, const AdaptedFrame& f);

/// Convenience for (0,2) tensors stored as matrices.
Eigen::MatrixXd bilinear_to_coordinate(const Eigen::MatrixXd& adapted, const AdaptedFrame& f);
Eigen::MatrixXd bilinear_to_adapted(const Eigen::MatrixXd& coordinate, const AdaptedFrame& f);

/// Closed-form brackets of the adapted frame fields, expanded in the
/// adapted frame: comps(c, a, b) is the E_c component of [E_a, E_b].
BundleTensor adapted_brackets(const BaseMetricData& base, const Eigen::VectorXd& p);

struct BracketResiduals {
  double vertical_vertical = 0.0;     // [d/dp_i, d/dp_j] = 0
  double mixed = 0.0;                 // [d/dp_i, delta/delta q^j] = Gamma^i_jk d/dp_k
  double horizontal_horizontal = 0.0; // [delta_i, delta_j] = R^0_kij d/dp_k
  double error_estimate = 0.0;
  bool unreliable = false;

  double max() const;
};

/// Lie brackets of the adapted frame fields by finite differences on R^2n,
/// compared with their closed forms.
BracketResiduals verify_brackets(const ModelParams& params, const BundlePoint& pt,
                                 const fd::FdConfig& cfg = fd::FdConfig::first_derivative());

/// Directional derivatives of t along the frame: delta_k t = 0 and
/// d/dp_k t = g^0k. Returns max residual over both families.
double energy_derivative_residual(const ModelParams& params, const BundlePoint& pt);

}  // namespace kahler
