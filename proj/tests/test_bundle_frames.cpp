#include "kahler/bundle_frames.hpp"
#include "kahler/errors.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <stdexcept>

using namespace kahler;
using kahler::testing::random_points;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

const ModelParams kParams{3, 1.0, 1.0};

BundlePoint point(VectorXd x, VectorXd p) { return BundlePoint{std::move(x), std::move(p)}; }

}  // namespace

TEST(BundleFrames, EnergyDensityExamples) {
  EXPECT_NEAR(energy_density(kParams, point(VectorXd::Zero(3), VectorXd::Unit(3, 0))), 0.5, 1e-15);
  EXPECT_NEAR(energy_density(kParams, point(VectorXd::Zero(3), VectorXd{{3.0, 4.0, 0.0}})), 12.5, 1e-13);
  // F = 2 at x = (2, 0, 0), so g^ij = 4 delta^ij.
  EXPECT_NEAR(energy_density(kParams, point(VectorXd{{2.0, 0.0, 0.0}}, VectorXd::Unit(3, 0))), 2.0, 1e-15);
  EXPECT_THROW(energy_density(kParams, point(VectorXd::Zero(3), VectorXd::Zero(3))), DomainError);
}

TEST(BundleFrames, CoordsRoundTrip) {
  const BundlePoint pt = point(VectorXd{{0.1, 0.2, 0.3}}, VectorXd{{-1.0, 0.5, 2.0}});
  const VectorXd z = pt.coords();
  EXPECT_EQ(z(3), -1.0);
  const BundlePoint back = BundlePoint::from_coords(z);
  EXPECT_EQ(back.x, pt.x);
  EXPECT_EQ(back.p, pt.p);
  EXPECT_THROW(BundlePoint::from_coords(VectorXd::Zero(5)), std::invalid_argument);
}

TEST(BundleFrames, FrameIsIdentityAtOrigin) {
  const AdaptedFrame f = adapted_frame(kParams, point(VectorXd::Zero(3), VectorXd::Unit(3, 1)));
  EXPECT_EQ((f.frame - MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((f.coframe - MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(BundleFrames, FrameStructure) {
  for (const BundlePoint& pt : random_points(kParams)) {
    const BaseMetricData base = metric_at(kParams, BasePoint{pt.x});
    const AdaptedFrame f = adapted_frame(base, pt.p);
    const MatrixXd g0 = contracted_christoffel(base, pt.p);
    // delta_i = d_i + Gamma^0_ih d/dp_h
    EXPECT_LT((f.frame.bottomLeftCorner(3, 3) - g0.transpose()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_EQ((f.frame.topLeftCorner(3, 3) - MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_LT(coframe_duality_residual(f), 1e-12);
    EXPECT_LT((raised_momentum(base, pt.p) - base.g_inv * pt.p).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(BundleFrames, TensorRoundTrip) {
  for (const BundlePoint& pt : random_points(kParams)) {
    const AdaptedFrame f = adapted_frame(kParams, pt);
    BundleTensor t{MTensor(6, {Slot::Up, Slot::Down, Slot::Down}), Basis::Adapted};
    int k = 0;
    for_each_index(6, 3, [&](std::span<const int> i) { t.comps.at(i) = std::sin(1.0 + k++); });
    const BundleTensor back = to_adapted(to_coordinate(t, f), f);
    EXPECT_EQ(back.basis, Basis::Adapted);
    EXPECT_LT(max_abs_diff(back.comps, t.comps), 1e-12);
    EXPECT_THROW(to_adapted(t, f), std::invalid_argument);

    const MatrixXd m = MatrixXd::Random(6, 6);
    EXPECT_LT((bilinear_to_adapted(bilinear_to_coordinate(m, f), f) - m).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(BundleFrames, BracketsMatchClosedForm) {
  for (const BundlePoint& pt : random_points(kParams)) {
    const BracketResiduals r = verify_brackets(kParams, pt);
    EXPECT_LT(r.max(), 1e-6);
    EXPECT_LT(r.vertical_vertical, 1e-6);
  }
}

TEST(BundleFrames, HorizontalBracketIsCurvature) {
  // [delta_i, delta_j] = R^0_kij d/dp_k; at x = 0, p = e1 with c = 1 this is
  // p_h (delta^h_i delta_jk - delta^h_j delta_ik).
  const BaseMetricData base = metric_at(kParams, BasePoint{VectorXd::Zero(3)});
  const BundleTensor b = adapted_brackets(base, VectorXd::Unit(3, 0));
  EXPECT_NEAR(b.comps(3 + 1, 0, 1), 1.0, 1e-15);
  EXPECT_NEAR(b.comps(3 + 1, 1, 0), -1.0, 1e-15);
  EXPECT_NEAR(b.comps(3 + 0, 1, 2), 0.0, 1e-15);
  // Gamma vanishes at the origin, so the mixed brackets do too.
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int c = 0; c < 6; ++c) EXPECT_EQ(b.comps(c, 3 + i, j), 0.0);
}

TEST(BundleFrames, EnergyDerivatives) {
  for (const BundlePoint& pt : random_points(kParams)) EXPECT_LT(energy_derivative_residual(kParams, pt), 1e-6);
}
