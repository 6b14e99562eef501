#pragma once

#include "kahler/base_geometry.hpp"
#include "kahler/bundle_frames.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>

namespace kahler {

/// The function v(t) weighting the p_i p_j term of the horizontal metric.
///
/// Kahler mode uses v = (c - A^2 t)/(A t), the unique choice making J
/// integrable on a space form. Custom profiles exist so that non-integrable
/// structures can be built for negative tests.
class VProfile {
 public:
  enum class Kind { Kahler, Custom };

  static VProfile kahler();
  /// v = kahler v + offset.
  static VProfile kahler_offset(double offset);
  static VProfile constant(double value);
  static VProfile custom(std::function<double(const ModelParams&, double)> v, std::string label);

  Kind kind() const noexcept { return kind_; }
  bool is_kahler() const noexcept { return kind_ == Kind::Kahler; }
  const std::string& label() const noexcept { return label_; }

  double v(const ModelParams& params, double t) const;
  /// w = -v / (A t^2 (A + 2v)).
  double w(const ModelParams& params, double t) const;

 private:
  Kind kind_ = Kind::Kahler;
  std::function<double(const ModelParams&, double)> fn_;
  std::string label_ = "kahler";
};

/// Model constants together with the choice of v.
struct Model {
  ModelParams params;
  VProfile profile = VProfile::kahler();
};

struct TubeVerdict {
  bool admissible = false;
  double norm_sq = 0.0;  // |p|^2 = g^ik p_i p_k
  std::string reason;    // empty when admissible
};

/// Kahler tube membership: 0 < |p|^2 < 4c/A^2.
TubeVerdict tube_check(const ModelParams& params, const BundlePoint& pt);

/// Everything the later modules need at one bundle point.
struct LiftedMetricData {
  BaseMetricData base;
  AdaptedFrame frame;
  Eigen::VectorXd p;
  Eigen::VectorXd g0;  // g^0k
  double t = 0.0;
  double v = 0.0;
  double w = 0.0;
  Eigen::MatrixXd G;  // G_ij = A t g_ij + v p_i p_j
  Eigen::MatrixXd H;  // H^kl = g^kl/(A t) + w g^0k g^0l

  int n() const noexcept { return static_cast<int>(p.size()); }
  /// block-diag(G, H), the metric in the adapted frame.
  Eigen::MatrixXd adapted_metric() const;
};

/// Throws DomainError outside the tube (Kahler mode) or where A + 2v <= 0
/// (custom mode); the message names the violated inequality.
LiftedMetricData metric_components(const Model& model, const BundlePoint& pt);

/// H^ij in the explicit Kahler-mode form
/// g^ij/(A t) - (c - A^2 t)/(A t^2 (2c - A^2 t)) g^0i g^0j.
Eigen::MatrixXd kahler_inverse_closed_form(const ModelParams& params, const LiftedMetricData& data);

/// The full metric in bundle coordinates (q, p): G_ij dq dq + H^ij Dp Dp.
Eigen::MatrixXd assemble_full_metric(const Model& model, const BundlePoint& pt);

/// Multiplier for finite-difference steps on the metric field. The vertical
/// block grows like 1/(2c - A^2 t) near the outer tube edge, so steps shrink
/// with the relative distance to it: min(1, 5 (1 - A^2 t / 2c)), floored at
/// 0.05.
double tube_step_scale(const ModelParams& params, double t);

/// Coordinate-frame metric of the Kahler profile evaluated directly from
/// z = (x, p) in Scalar arithmetic (double or long double). No tube check:
/// callers must stay inside the tube. Agrees with assemble_full_metric to
/// round-off.
template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> kahler_coordinate_metric(
    const ModelParams& params, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& z);
Eigen::MatrixXd assemble_full_metric(const LiftedMetricData& data);

}  // namespace kahler
