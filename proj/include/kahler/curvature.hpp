#pragma once

#include "kahler/connection.hpp"
#include "kahler/lifted_metric.hpp"
#include "kahler/mtensor.hpp"

#include <Eigen/Dense>

#include <array>
#include <string>
#include <string_view>

namespace kahler {

/// The six independent adapted-frame families of the curvature tensor K.
///
///   K(delta_i, delta_j) delta_k = QQQ^h_ijk delta_h
///   K(delta_i, delta_j) d^k     = QQP^k_ijh d^h
///   K(d^i, d^j) delta_k         = PPQ^{ijh}_k delta_h
///   K(d^i, d^j) d^k             = PPP^{ijk}_h d^h
///   K(d^i, delta_j) delta_k     = PQQ^i_jkh d^h
///   K(d^i, delta_j) d^k         = PQP^{ikh}_j delta_h
///
/// Each tensor stores its indices in the printed order, e.g. qqq(h, i, j, k).
struct CurvatureBlocks {
  MTensor qqq, qqp, ppq, ppp, pqq, pqp;
};

enum class CurvatureFamily { QQQ, QQP, PPQ, PPP, PQQ, PQP };
inline constexpr std::array<CurvatureFamily, 6> kCurvatureFamilies{
    CurvatureFamily::QQQ, CurvatureFamily::QQP, CurvatureFamily::PPQ,
    CurvatureFamily::PPP, CurvatureFamily::PQQ, CurvatureFamily::PQP};
std::string_view family_name(CurvatureFamily f);

/// Kahler-mode closed forms. Throws std::invalid_argument for custom v.
CurvatureBlocks curvature_closed_form(const Model& model, const BundlePoint& pt);
CurvatureBlocks curvature_closed_form(const Model& model, const LiftedMetricData& data);

/// Full adapted tensor: comps(d, a, b, c) is the E_d component of
/// K(E_a, E_b) E_c. Components not named by a block are zero.
BundleTensor assemble_curvature(const CurvatureBlocks& blocks);
CurvatureBlocks extract_blocks(const BundleTensor& adapted);

/// Residual of QQP = -QQQ, PPP = -PPQ and first-pair antisymmetry of QQQ
/// and PPQ.
double curvature_structural_residual(const CurvatureBlocks& blocks);

struct CurvatureOracle {
  BundleTensor coordinate;
  BundleTensor adapted;
  double error_estimate = 0.0;
  bool unreliable = false;
};

/// Curvature of the coordinate metric from its first and second
/// finite-difference derivatives, also expressed in the adapted frame.
CurvatureOracle curvature_oracle(const Model& model, const BundlePoint& pt);

struct FamilyMismatch {
  double value = 0.0;  // max |closed - oracle|
  std::string component;
  double closed_value = 0.0;
  double oracle_value = 0.0;
};

/// Worst disagreement over every component of K(E_a, E_b) E_c with
/// (a, b, c) in the family's slot pattern.
FamilyMismatch family_mismatch(const BundleTensor& closed, const BundleTensor& oracle, CurvatureFamily family);

/// Ric(Y, Z) = trace(X -> K(X, Y) Z).
Eigen::MatrixXd ricci(const BundleTensor& k);

/// max |Ric - (A n / 2) G| over all blocks.
double einstein_residual(const Eigen::MatrixXd& ric, const Eigen::MatrixXd& metric, const ModelParams& params);

double curvature_bianchi_residual(const BundleTensor& k);

/// max |G(K(X,Y)Z, W) + G(K(X,Y)W, Z)| over basis vectors.
double pair_antisymmetry_residual(const BundleTensor& k, const Eigen::MatrixXd& metric);

/// max |G(K(X,Y)JZ, JW) - G(K(X,Y)Z, W)| over basis vectors.
double kahler_compatibility_residual(const BundleTensor& k, const Eigen::MatrixXd& metric,
                                     const Eigen::MatrixXd& j);

struct LocalSymmetryReport {
  /// max |nabla K| in the adapted frame, oracle curvature and connection.
  double nabla_k = 0.0;
  double nabla_k_error_estimate = 0.0;
  /// Derivative rules of QQQ, PPQ, PQQ, PQP along delta_l (first four) and
  /// d/dp_l (last four).
  std::array<double, 8> identities{};
};

inline constexpr std::array<std::string_view, 8> kSymmetryIdentityNames{
    "horizontal_QQQ", "horizontal_PPQ", "horizontal_PQQ", "horizontal_PQP",
    "vertical_QQQ",   "vertical_PPQ",   "vertical_PQQ",   "vertical_PQP"};

/// Coordinate nabla K from finite differences of the curvature oracle.
double nabla_k_oracle(const Model& model, const BundlePoint& pt, double* error_estimate = nullptr);

/// The eight derivative identities of the closed-form blocks.
std::array<double, 8> symmetry_identities(const Model& model, const BundlePoint& pt);

LocalSymmetryReport nabla_k(const Model& model, const BundlePoint& pt);

/// G(K(X, JX) JX, X) / G(X, X)^2 for an adapted-frame vector X.
/// Throws std::invalid_argument for X = 0.
double holomorphic_sectional_curvature(const BundleTensor& k, const Eigen::MatrixXd& metric,
                                       const Eigen::MatrixXd& j, const Eigen::VectorXd& x);

}  // namespace kahler
