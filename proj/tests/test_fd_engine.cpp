#include "kahler/fd_engine.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

using namespace kahler;
using fd::Vec;

namespace {

Vec scalar(double x) { return Vec::Constant(1, x); }

}  // namespace

TEST(FdEngine, SquareHasDerivativeTwoAtOne) {
  const fd::VectorField f = [](const Vec& z) { return scalar(z(0) * z(0)); };
  const fd::FdResult r = fd::directional_derivative(f, scalar(1.0), scalar(1.0));
  EXPECT_NEAR(r.value(0), 2.0, 1e-10);
  EXPECT_FALSE(r.unreliable);
}

TEST(FdEngine, ConstantFieldHasZeroDerivative) {
  const fd::VectorField f = [](const Vec&) { return scalar(3.25); };
  const fd::JacobianResult j = fd::jacobian(f, Vec::Constant(4, 0.3));
  EXPECT_EQ(j.value.cwiseAbs().maxCoeff(), 0.0);
}

TEST(FdEngine, LieBracketOfLinearFields) {
  // [x d_y, d_x] = -d_y
  const fd::VectorField x_dy = [](const Vec& z) { return Vec{{0.0, z(0)}}; };
  const fd::VectorField dx = [](const Vec&) { return Vec{{1.0, 0.0}}; };
  for (const Vec& z : {Vec{{0.0, 0.0}}, Vec{{2.5, -1.0}}, Vec{{-7.0, 3.0}}}) {
    const fd::FdResult b = fd::lie_bracket(x_dy, dx, z);
    EXPECT_NEAR(b.value(0), 0.0, 1e-9);
    EXPECT_NEAR(b.value(1), -1.0, 1e-9);
  }
}

TEST(FdEngine, QuadraticsAreExactToRoundOff) {
  // f = 3 + 2a - b + a^2 - 4ab + 0.5 b^2 + 6c^2 on R^3
  const fd::VectorField f = [](const Vec& z) {
    const double a = z(0), b = z(1), c = z(2);
    return scalar(3.0 + 2.0 * a - b + a * a - 4.0 * a * b + 0.5 * b * b + 6.0 * c * c);
  };
  const Vec z{{0.7, -1.3, 2.0}};
  const fd::JacobianResult j = fd::jacobian(f, z);
  EXPECT_NEAR(j.value(0, 0), 2.0 + 2.0 * 0.7 + 4.0 * 1.3, 1e-9);
  EXPECT_NEAR(j.value(0, 1), -1.0 - 4.0 * 0.7 - 1.3, 1e-9);
  EXPECT_NEAR(j.value(0, 2), 24.0, 1e-9);
  for (int levels = 0; levels <= 2; ++levels) {
    fd::FdConfig cfg = fd::FdConfig::second_derivative();
    cfg.richardson_levels = levels;
    const fd::SecondPartials h = fd::second_partials(f, z, cfg);
    EXPECT_NEAR(h(0, 0)(0), 2.0, 1e-6);
    EXPECT_NEAR(h(0, 1)(0), -4.0, 1e-6);
    EXPECT_NEAR(h(1, 0)(0), -4.0, 1e-6);
    EXPECT_NEAR(h(1, 1)(0), 1.0, 1e-6);
    EXPECT_NEAR(h(2, 2)(0), 12.0, 1e-6);
    EXPECT_NEAR(h(0, 2)(0), 0.0, 1e-6);
  }
}

TEST(FdEngine, ExtendedPrecisionAgreesAndIsTighter) {
  const fd::VectorField f = [](const Vec& z) { return scalar(std::exp(z(0)) * std::sin(z(1))); };
  const fd::ExtVectorField fe = [](const fd::ExtVec& z) {
    fd::ExtVec out(1);
    out(0) = std::exp(z(0)) * std::sin(z(1));
    return out;
  };
  const Vec z{{0.4, 1.1}};
  const double exact = std::exp(0.4) * std::cos(1.1);
  const fd::JacobianResult jd = fd::jacobian(f, z);
  const fd::JacobianResult je = fd::jacobian_ext(fe, z);
  EXPECT_NEAR(jd.value(0, 1), exact, 1e-9);
  EXPECT_NEAR(je.value(0, 1), exact, 1e-9);
  const fd::SecondPartials he = fd::second_partials_ext(fe, z);
  EXPECT_NEAR(he(0, 1)(0), exact, 1e-9);
  EXPECT_NEAR(he(1, 1)(0), -std::exp(0.4) * std::sin(1.1), 1e-9);
}

TEST(FdEngine, ConfigValidation) {
  fd::FdConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.base_step = 1e-9;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.base_step = 0.02;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = fd::FdConfig{};
  cfg.richardson_levels = 3;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  const fd::VectorField f = [](const Vec& z) { return z; };
  EXPECT_THROW(fd::directional_derivative(f, Vec::Zero(2), Vec::Zero(3)), std::invalid_argument);
  EXPECT_NEAR(fd::FdConfig::default_base_step(), std::cbrt(std::numeric_limits<double>::epsilon()), 0.0);
  EXPECT_NO_THROW(fd::FdConfig::second_derivative().scaled(1e-9).validate());
}

TEST(FdEngine, RoundOffIsFlaggedForTinySteps) {
  fd::FdConfig cfg;
  cfg.base_step = 2e-8;
  cfg.richardson_levels = 1;
  cfg.reliability_tol = 1e-12;
  const fd::VectorField f = [](const Vec& z) { return scalar(1e6 * std::cos(z(0))); };
  const fd::FdResult r = fd::directional_derivative(f, scalar(0.3), scalar(1.0), cfg);
  EXPECT_TRUE(r.unreliable);
}

TEST(FdEngine, ClosedTwoFormHasZeroExteriorDerivative) {
  // omega = d(alpha) for alpha = (y z, x^2, sin x) is exact, hence closed.
  const fd::MatrixField omega = [](const Vec& z) {
    const double x = z(0), y = z(1), w = z(2);
    // omega_ab = d_a alpha_b - d_b alpha_a
    Eigen::Matrix3d da;  // da(a, b) = d_a alpha_b
    da << 0.0, 2.0 * x, std::cos(x), w, 0.0, 0.0, y, 0.0, 0.0;
    return fd::Mat(da - da.transpose());
  };
  const fd::ExteriorDerivative d = fd::exterior_derivative_2form(omega, Vec{{0.3, -0.8, 1.7}});
  EXPECT_LT(d.value.max_abs(), 1e-9);
}

// Error estimates must bound the true error on an analytic battery in at
// least 99% of cases at the default configuration.
TEST(FdEngine, ErrorEstimateCoversTrueError) {
  struct Case {
    double (*f)(double);
    double (*df)(double);
  };
  const Case battery[] = {
      {[](double x) { return std::sin(x); }, [](double x) { return std::cos(x); }},
      {[](double x) { return std::exp(x); }, [](double x) { return std::exp(x); }},
      {[](double x) { return std::log(2.0 + x * x); }, [](double x) { return 2.0 * x / (2.0 + x * x); }},
      {[](double x) { return 1.0 / (1.0 + x * x); }, [](double x) { return -2.0 * x / ((1.0 + x * x) * (1.0 + x * x)); }},
      {[](double x) { return x * x * x * x - 3.0 * x; }, [](double x) { return 4.0 * x * x * x - 3.0; }},
      {[](double x) { return std::atan(3.0 * x); }, [](double x) { return 3.0 / (1.0 + 9.0 * x * x); }},
      {[](double x) { return std::cosh(0.5 * x); }, [](double x) { return 0.5 * std::sinh(0.5 * x); }},
  };
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pick(-2.0, 2.0);
  int covered = 0, total = 0;
  for (const Case& c : battery)
    for (int k = 0; k < 200; ++k) {
      const double x = pick(rng);
      const fd::VectorField f = [&](const Vec& z) { return scalar(c.f(z(0))); };
      const fd::FdResult r = fd::directional_derivative(f, scalar(x), scalar(1.0));
      ++total;
      if (std::abs(r.value(0) - c.df(x)) <= r.error_estimate) ++covered;
    }
  EXPECT_GE(static_cast<double>(covered) / total, 0.99) << covered << " of " << total;
}
