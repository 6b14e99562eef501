#include "kahler/errors.hpp"
#include "kahler/lifted_metric.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace kahler;
using kahler::testing::canonical_model;
using kahler::testing::canonical_point;
using kahler::testing::config_matrix;
using kahler::testing::random_points;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST(LiftedMetric, CanonicalPoint) {
  const LiftedMetricData d = metric_components(canonical_model(), canonical_point());
  EXPECT_NEAR(d.t, 0.5, 1e-15);
  EXPECT_NEAR(d.v, 1.0, 1e-15);
  EXPECT_NEAR(d.w, -4.0 / 3.0, 1e-15);
  const MatrixXd g_expected = VectorXd{{1.5, 0.5, 0.5}}.asDiagonal();
  const MatrixXd h_expected = VectorXd{{2.0 / 3.0, 2.0, 2.0}}.asDiagonal();
  EXPECT_LT((d.G - g_expected).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((d.H - h_expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(LiftedMetric, ZeroProfileHasNoCorrection) {
  const Model m{ModelParams{3, 1.0, 1.0}, VProfile::constant(0.0)};
  const LiftedMetricData d = metric_components(m, canonical_point());
  EXPECT_EQ(d.w, 0.0);
  EXPECT_LT((d.G - 0.5 * MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((d.H - 2.0 * MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(LiftedMetric, TubeCheck) {
  const ModelParams params{3, 1.0, 1.0};
  const TubeVerdict inside = tube_check(params, BundlePoint{VectorXd::Zero(3), VectorXd{{1.9, 0.0, 0.0}}});
  EXPECT_TRUE(inside.admissible);
  EXPECT_TRUE(inside.reason.empty());

  const TubeVerdict outside = tube_check(params, BundlePoint{VectorXd::Zero(3), VectorXd{{2.1, 0.0, 0.0}}});
  EXPECT_FALSE(outside.admissible);
  EXPECT_NEAR(outside.norm_sq, 4.41, 1e-12);
  EXPECT_NE(outside.reason.find("4.41"), std::string::npos) << outside.reason;

  const TubeVerdict zero = tube_check(params, BundlePoint{VectorXd::Zero(3), VectorXd::Zero(3)});
  EXPECT_FALSE(zero.admissible);
  EXPECT_NE(zero.reason.find("p = 0"), std::string::npos);

  EXPECT_THROW(metric_components(Model{params}, BundlePoint{VectorXd::Zero(3), VectorXd{{2.1, 0.0, 0.0}}}),
               DomainError);
  EXPECT_FALSE(tube_check(ModelParams{3, -1.0, 1.0}, canonical_point()).admissible);
}

TEST(LiftedMetric, ComponentIdentities) {
  for (const ModelParams& params : config_matrix())
    for (const BundlePoint& pt : random_points(params)) {
      const LiftedMetricData d = metric_components(Model{params}, pt);
      const int n = params.n;
      EXPECT_LT((d.G * d.H - MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_LT((kahler_inverse_closed_form(params, d) - d.H).cwiseAbs().maxCoeff(), 1e-12);
      // A t (v + A) = c on the Kahler profile.
      EXPECT_NEAR(params.A * d.t * (d.v + params.A), params.c, 1e-12);
      EXPECT_NEAR(d.w, -d.v / (params.A * d.t * d.t * (params.A + 2.0 * d.v)), 1e-12 * std::abs(d.w));
      EXPECT_GT(Eigen::SelfAdjointEigenSolver<MatrixXd>(d.adapted_metric()).eigenvalues().minCoeff(), 0.0);
      // p is an eigenvector of g^-1 G with eigenvalue A t + 2 v t.
      const VectorXd gp = d.base.g_inv * d.G * d.g0;
      EXPECT_LT((gp - (params.A * d.t + 2.0 * d.v * d.t) * d.g0).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(LiftedMetric, HorizontalAndVerticalAreOrthogonal) {
  for (const BundlePoint& pt : random_points(ModelParams{3, 1.0, 1.0})) {
    const Model m{ModelParams{3, 1.0, 1.0}};
    const LiftedMetricData d = metric_components(m, pt);
    const MatrixXd coord = assemble_full_metric(m, pt);
    const MatrixXd adapted = d.frame.frame.transpose() * coord * d.frame.frame;
    EXPECT_LT(adapted.topRightCorner(3, 3).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((adapted - d.adapted_metric()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(LiftedMetric, CoordinateMetricAtOriginIsBlockDiagonal) {
  const MatrixXd m = assemble_full_metric(canonical_model(), canonical_point());
  EXPECT_EQ(m.topRightCorner(3, 3).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(m.bottomLeftCorner(3, 3).cwiseAbs().maxCoeff(), 0.0);
}

TEST(LiftedMetric, DirectCoordinateMetricMatchesAssembly) {
  for (const ModelParams& params : config_matrix())
    for (const BundlePoint& pt : random_points(params)) {
      const MatrixXd assembled = assemble_full_metric(Model{params}, pt);
      const VectorXd z = pt.coords();
      const MatrixXd direct = kahler_coordinate_metric<double>(params, z);
      const MatrixXd ext = kahler_coordinate_metric<long double>(params, z.cast<long double>()).cast<double>();
      const double scale = assembled.cwiseAbs().maxCoeff();
      EXPECT_LT((direct - assembled).cwiseAbs().maxCoeff(), 1e-13 * scale);
      EXPECT_LT((ext - assembled).cwiseAbs().maxCoeff(), 1e-13 * scale);
    }
}

TEST(LiftedMetric, StepScaleShrinksNearTheOuterEdge) {
  const ModelParams params{3, 1.0, 1.0};
  EXPECT_EQ(tube_step_scale(params, 0.1), 1.0);
  EXPECT_NEAR(tube_step_scale(params, 1.9), 0.25, 1e-12);
  EXPECT_EQ(tube_step_scale(params, 1.999), 0.05);
}

TEST(LiftedMetric, CustomProfileRejectsDegenerateWeight) {
  const Model m{ModelParams{3, 1.0, 1.0}, VProfile::constant(-0.6)};
  EXPECT_THROW(metric_components(m, canonical_point()), DomainError);
  const VProfile off = VProfile::kahler_offset(0.1);
  EXPECT_FALSE(off.is_kahler());
  EXPECT_NEAR(off.v(ModelParams{}, 0.5), 1.1, 1e-15);
}
