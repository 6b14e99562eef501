#pragma once

#include "kahler/mtensor.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

/// Central finite differences with Richardson extrapolation on R^m.
///
/// Every routine returns the estimate together with an error estimate: the
/// gap between the two highest entries of the Richardson tableau plus a
/// round-off floor. A result is flagged `unreliable` when that estimate
/// exceeds `disagreement_factor * reliability_tol`.
namespace kahler::fd {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

using VectorField = std::function<Vec(const Vec&)>;
using MatrixField = std::function<Mat(const Vec&)>;

/// Fields evaluated in extended precision. Differencing happens in long
/// double and results come back as double; this keeps round-off out of
/// nested derivatives of badly conditioned fields.
using ExtVec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
using ExtMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using ExtVectorField = std::function<ExtVec(const ExtVec&)>;
using ExtMatrixField = std::function<ExtMat(const ExtVec&)>;

struct FdConfig {
  /// Relative step; the absolute step along coordinate j is
  /// base_step * (1 + |z_j|).
  double base_step = default_base_step();
  /// Number of Richardson halvings applied on top of the plain central
  /// difference (0, 1 or 2).
  int richardson_levels = 1;
  double disagreement_factor = 10.0;
  double reliability_tol = 1e-6;

  /// Throws std::invalid_argument outside base_step in (1e-8, 1e-2),
  /// richardson_levels in [0, 2].
  void validate() const;

  static double default_base_step();
  /// Default for first derivatives: eps^(1/3), one Richardson level.
  static FdConfig first_derivative();
  /// Step tuned for second differences.
  static FdConfig second_derivative();
  /// Outer level of a nested derivative (differentiating a field that is
  /// itself the output of finite differences).
  static FdConfig nested_outer();

  /// Same config with base_step multiplied by factor, clamped to the valid
  /// range. Used to shrink steps where a field varies on a short scale.
  FdConfig scaled(double factor) const;
};

struct FdResult {
  Vec value;
  double error_estimate = 0.0;
  bool unreliable = false;
};

struct JacobianResult {
  /// Column j holds the partial derivative along coordinate j.
  Mat value;
  double error_estimate = 0.0;
  bool unreliable = false;
};

struct SecondPartials {
  int dim = 0;
  std::vector<Vec> entries;  // row-major (e, f)
  double error_estimate = 0.0;
  bool unreliable = false;

  const Vec& operator()(int e, int f) const {
    return entries[static_cast<std::size_t>(e * dim + f)];
  }
};

FdResult directional_derivative(const VectorField& field, const Vec& z, const Vec& direction,
                                const FdConfig& cfg = FdConfig::first_derivative());

JacobianResult jacobian(const VectorField& field, const Vec& z,
                        const FdConfig& cfg = FdConfig::first_derivative());
JacobianResult jacobian_ext(const ExtVectorField& field, const Vec& z,
                        const FdConfig& cfg = FdConfig::first_derivative());

/// Partial derivatives of a matrix field along each coordinate direction.
struct MatrixPartials {
  std::vector<Mat> value;
  double error_estimate = 0.0;
  bool unreliable = false;
};
MatrixPartials matrix_partials(const MatrixField& field, const Vec& z,
                               const FdConfig& cfg = FdConfig::first_derivative());
MatrixPartials matrix_partials_ext(const ExtMatrixField& field, const Vec& z,
                               const FdConfig& cfg = FdConfig::first_derivative());

SecondPartials second_partials(const VectorField& field, const Vec& z,
                               const FdConfig& cfg = FdConfig::second_derivative());
SecondPartials second_partials_ext(const ExtVectorField& field, const Vec& z,
                               const FdConfig& cfg = FdConfig::second_derivative());

/// [X, Y] = DY X - DX Y, both Jacobians by finite differences.
FdResult lie_bracket(const VectorField& x_field, const VectorField& y_field, const Vec& z,
                     const FdConfig& cfg = FdConfig::first_derivative());

/// Bracket assembled from precomputed values and Jacobians.
Vec lie_bracket(const Vec& x, const Mat& dx, const Vec& y, const Mat& dy);

struct ExteriorDerivative {
  MTensor value;  // (d omega)_{abc}, all slots Down
  double error_estimate = 0.0;
  bool unreliable = false;
};

/// d of a 2-form given by its antisymmetric coefficient matrix field:
/// (d omega)_{abc} = d_a omega_{bc} + d_b omega_{ca} + d_c omega_{ab}.
ExteriorDerivative exterior_derivative_2form(const MatrixField& omega, const Vec& z,
                                             const FdConfig& cfg = FdConfig::first_derivative());

Vec flatten(const Mat& m);
Mat unflatten(const Vec& v, Eigen::Index rows, Eigen::Index cols);

}  // namespace kahler::fd
