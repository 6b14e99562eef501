#include "kahler/connection.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <stdexcept>

using namespace kahler;
using kahler::testing::canonical_model;
using kahler::testing::canonical_point;
using kahler::testing::config_matrix;
using kahler::testing::random_points;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST(Connection, CanonicalCoefficients) {
  const ConnectionCoefficients c = coefficients_closed_form(canonical_model(), canonical_point());
  EXPECT_NEAR(c.Q(0, 0, 0), 1.0 / 3.0, 1e-14);
  EXPECT_NEAR(c.P(0, 0, 0), -1.0 / 3.0, 1e-14);
}

TEST(Connection, StructuralIdentities) {
  for (const ModelParams& params : config_matrix())
    for (const BundlePoint& pt : random_points(params)) {
      const Model m{params};
      const LiftedMetricData d = metric_components(m, pt);
      const ConnectionCoefficients c = coefficients_closed_form(m, d);
      EXPECT_LT(connection_structure_residual(c), 1e-12);
      EXPECT_LT(horizontal_torsion_residual(c, d), 1e-12);
    }
}

TEST(Connection, HorizontalCoefficientIsNotSymmetric) {
  // S_hij - S_hji = R^0_hij, which is nonzero away from the p direction.
  const Model m = canonical_model();
  const ConnectionCoefficients c = coefficients_closed_form(m, canonical_point());
  EXPECT_NEAR(c.S(1, 0, 1) - c.S(1, 1, 0), 1.0, 1e-12);
}

TEST(Connection, ClosedFormMatchesKoszulOracle) {
  for (const ModelParams& params : config_matrix())
    for (const BundlePoint& pt : random_points(params)) {
      const ConnectionReport r = verify_connection(Model{params}, pt);
      EXPECT_LT(r.mismatch, 1e-5) << r.worst_component;
      EXPECT_LT(r.nabla_g, 1e-5);
      EXPECT_LT(r.torsion, 1e-12);
      EXPECT_LT(base_parallel_residual(Model{params}, pt), 1e-6);
    }
}

TEST(Connection, KoszulOracleOfConstantMetricVanishes) {
  MatrixXd g(4, 4);
  g << 2, 1, 0, 0, 1, 3, 0, 0, 0, 0, 1, 0.5, 0, 0, 0.5, 4;
  const fd::MatrixField field = [&](const VectorXd&) { return g; };
  const KoszulResult k = koszul_oracle(field, VectorXd::Constant(4, 0.2));
  EXPECT_EQ(k.christoffel.comps.max_abs(), 0.0);
  EXPECT_EQ(k.christoffel.basis, Basis::Coordinate);
}

TEST(Connection, KoszulOracleOfPolarPlane) {
  // ds^2 = dr^2 + r^2 dth^2: Gamma^r_thth = -r, Gamma^th_rth = 1/r.
  const fd::MatrixField field = [](const VectorXd& z) {
    MatrixXd g = MatrixXd::Identity(2, 2);
    g(1, 1) = z(0) * z(0);
    return g;
  };
  const KoszulResult k = koszul_oracle(field, VectorXd{{2.0, 0.3}});
  EXPECT_NEAR(k.christoffel.comps(0, 1, 1), -2.0, 1e-8);
  EXPECT_NEAR(k.christoffel.comps(1, 0, 1), 0.5, 1e-8);
  EXPECT_NEAR(k.christoffel.comps(1, 1, 0), 0.5, 1e-8);
}

TEST(Connection, CustomProfileHasNoClosedForm) {
  const Model m{ModelParams{3, 1.0, 1.0}, VProfile::kahler_offset(0.1)};
  EXPECT_THROW(coefficients_closed_form(m, canonical_point()), std::invalid_argument);
}
