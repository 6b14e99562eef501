#include "kahler/fd_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace kahler::fd {

namespace {

template <class Scalar>
using VecT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
constexpr double eps_of() {
  return static_cast<double>(std::numeric_limits<Scalar>::epsilon());
}

template <class Scalar>
double max_abs(const VecT<Scalar>& v) {
  return v.size() == 0 ? 0.0 : static_cast<double>(v.cwiseAbs().maxCoeff());
}

template <class Scalar>
struct Tableau {
  VecT<Scalar> value;
  double gap = 0.0;
  double smallest_step = 0.0;
};

// est(h) returns the plain central-difference estimate at step h; its
// truncation error has an even expansion in h.
template <class Scalar, class Estimate>
Tableau<Scalar> richardson(Estimate&& est, double h, int levels) {
  using V = VecT<Scalar>;
  const int rows = std::max(levels, 1) + 1;
  std::vector<std::vector<V>> t(static_cast<std::size_t>(rows));
  double step = h;
  for (int k = 0; k < rows; ++k) {
    auto& row = t[static_cast<std::size_t>(k)];
    row.push_back(est(step));
    Scalar factor = 4;
    for (int m = 1; m <= k; ++m) {
      const V& fine = row[static_cast<std::size_t>(m - 1)];
      const V& coarse = t[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(m - 1)];
      row.push_back(fine + (fine - coarse) / (factor - 1));
      factor *= 4;
    }
    if (k + 1 < rows) step *= 0.5;
  }
  Tableau<Scalar> out;
  out.smallest_step = step;
  if (levels == 0) {
    out.value = t[0][0];
    out.gap = max_abs<Scalar>(t[1][0] - t[0][0]);
  } else {
    const auto& last = t[static_cast<std::size_t>(levels)];
    out.value = last[static_cast<std::size_t>(levels)];
    out.gap = max_abs<Scalar>(last[static_cast<std::size_t>(levels)] - last[static_cast<std::size_t>(levels - 1)]);
  }
  return out;
}

double step_for(const Vec& z, Eigen::Index j, const FdConfig& cfg) {
  return cfg.base_step * (1.0 + std::abs(z(j)));
}

bool flag(double err, const FdConfig& cfg) {
  return !(err <= cfg.disagreement_factor * cfg.reliability_tol);
}

template <class Scalar, class Field>
FdResult directional_impl(const Field& field, const Vec& z, const Vec& direction, const FdConfig& cfg) {
  using V = VecT<Scalar>;
  cfg.validate();
  if (direction.size() != z.size()) throw std::invalid_argument("directional_derivative: size mismatch");
  const V zs = z.cast<Scalar>();
  const double dnorm = direction.cwiseAbs().maxCoeff();
  if (dnorm == 0.0) {
    FdResult zero;
    zero.value = Vec::Zero(field(zs).size());
    return zero;
  }
  const V dir = direction.cast<Scalar>();
  double zscale = 0.0;
  for (Eigen::Index j = 0; j < z.size(); ++j)
    if (direction(j) != 0.0) zscale = std::max(zscale, std::abs(z(j)));
  const double h = cfg.base_step * (1.0 + zscale) / dnorm;

  double fscale = 0.0;
  auto est = [&](double step) -> V {
    const Scalar s = static_cast<Scalar>(step);
    const V fp = field(V(zs + s * dir));
    const V fm = field(V(zs - s * dir));
    fscale = std::max({fscale, max_abs<Scalar>(fp), max_abs<Scalar>(fm)});
    return (fp - fm) / (2 * s);
  };
  Tableau<Scalar> tab = richardson<Scalar>(est, h, cfg.richardson_levels);
  FdResult out;
  out.value = tab.value.template cast<double>();
  out.error_estimate = tab.gap + 4.0 * eps_of<Scalar>() * fscale / tab.smallest_step;
  out.unreliable = flag(out.error_estimate, cfg);
  return out;
}

template <class Scalar, class Field>
JacobianResult jacobian_impl(const Field& field, const Vec& z, const FdConfig& cfg) {
  JacobianResult out;
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    FdResult col = directional_impl<Scalar>(field, z, Vec::Unit(z.size(), j), cfg);
    if (j == 0) out.value.resize(col.value.size(), z.size());
    out.value.col(j) = col.value;
    out.error_estimate = std::max(out.error_estimate, col.error_estimate);
    out.unreliable = out.unreliable || col.unreliable;
  }
  return out;
}

template <class Scalar, class Field>
SecondPartials second_partials_impl(const Field& field, const Vec& z, const FdConfig& cfg) {
  using V = VecT<Scalar>;
  cfg.validate();
  const int m = static_cast<int>(z.size());
  const V zs = z.cast<Scalar>();
  const V f0 = field(zs);
  SecondPartials out;
  out.dim = m;
  out.entries.assign(static_cast<std::size_t>(m * m), Vec());
  double worst = 0.0;
  for (int e = 0; e < m; ++e) {
    for (int f = e; f < m; ++f) {
      const double he = step_for(z, e, cfg);
      const double hf = step_for(z, f, cfg);
      double fscale = max_abs<Scalar>(f0);
      auto est = [&](double s) -> V {
        const Scalar a = static_cast<Scalar>(he * s);
        const Scalar b = static_cast<Scalar>(hf * s);
        if (e == f) {
          V zp = zs, zm = zs;
          zp(e) += a;
          zm(e) -= a;
          const V fp = field(zp), fm = field(zm);
          fscale = std::max({fscale, max_abs<Scalar>(fp), max_abs<Scalar>(fm)});
          return (fp - 2 * f0 + fm) / (a * a);
        }
        V zpp = zs, zpm = zs, zmp = zs, zmm = zs;
        zpp(e) += a, zpp(f) += b;
        zpm(e) += a, zpm(f) -= b;
        zmp(e) -= a, zmp(f) += b;
        zmm(e) -= a, zmm(f) -= b;
        const V fpp = field(zpp), fpm = field(zpm), fmp = field(zmp), fmm = field(zmm);
        fscale = std::max({fscale, max_abs<Scalar>(fpp), max_abs<Scalar>(fmm)});
        return (fpp - fpm - fmp + fmm) / (4 * a * b);
      };
      // Steps are expressed relative to (he, hf); the tableau works on s.
      Tableau<Scalar> tab = richardson<Scalar>(est, 1.0, cfg.richardson_levels);
      const double hmin = std::min(he, hf) * tab.smallest_step;
      const double err = tab.gap + 8.0 * eps_of<Scalar>() * fscale / (hmin * hmin);
      worst = std::max(worst, err);
      Vec value = tab.value.template cast<double>();
      out.entries[static_cast<std::size_t>(e * m + f)] = value;
      out.entries[static_cast<std::size_t>(f * m + e)] = std::move(value);
    }
  }
  out.error_estimate = worst;
  out.unreliable = flag(worst, cfg);
  return out;
}

ExtVec flatten_ext(const ExtMat& m) { return Eigen::Map<const ExtVec>(m.data(), m.size()); }

}  // namespace

double FdConfig::default_base_step() { return std::cbrt(std::numeric_limits<double>::epsilon()); }

void FdConfig::validate() const {
  if (!(base_step > 1e-8 && base_step < 1e-2))
    throw std::invalid_argument("FdConfig: base_step must lie in (1e-8, 1e-2)");
  if (richardson_levels < 0 || richardson_levels > 2)
    throw std::invalid_argument("FdConfig: richardson_levels must be 0, 1 or 2");
  if (!(disagreement_factor > 0.0)) throw std::invalid_argument("FdConfig: disagreement_factor must be positive");
}

FdConfig FdConfig::first_derivative() { return FdConfig{}; }

FdConfig FdConfig::second_derivative() {
  FdConfig cfg;
  cfg.base_step = 2e-3;
  cfg.richardson_levels = 2;
  return cfg;
}

FdConfig FdConfig::nested_outer() {
  FdConfig cfg;
  cfg.base_step = 5e-3;
  cfg.richardson_levels = 2;
  return cfg;
}

FdConfig FdConfig::scaled(double factor) const {
  FdConfig cfg = *this;
  cfg.base_step = std::clamp(base_step * factor, 2e-8, 9e-3);
  return cfg;
}

FdResult directional_derivative(const VectorField& field, const Vec& z, const Vec& direction,
                                const FdConfig& cfg) {
  return directional_impl<double>(field, z, direction, cfg);
}

JacobianResult jacobian(const VectorField& field, const Vec& z, const FdConfig& cfg) {
  return jacobian_impl<double>(field, z, cfg);
}

JacobianResult jacobian_ext(const ExtVectorField& field, const Vec& z, const FdConfig& cfg) {
  return jacobian_impl<long double>(field, z, cfg);
}

Vec flatten(const Mat& m) { return Eigen::Map<const Vec>(m.data(), m.size()); }

Mat unflatten(const Vec& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const Mat>(v.data(), rows, cols);
}

namespace {

template <class Scalar, class Field>
MatrixPartials partials_from(const Field& flat, const Vec& z, Eigen::Index rows, Eigen::Index cols,
                             const FdConfig& cfg) {
  JacobianResult jac = jacobian_impl<Scalar>(flat, z, cfg);
  MatrixPartials out;
  out.error_estimate = jac.error_estimate;
  out.unreliable = jac.unreliable;
  for (Eigen::Index j = 0; j < z.size(); ++j) out.value.push_back(unflatten(jac.value.col(j), rows, cols));
  return out;
}

}  // namespace

MatrixPartials matrix_partials(const MatrixField& field, const Vec& z, const FdConfig& cfg) {
  const Mat m0 = field(z);
  return partials_from<double>(VectorField([&](const Vec& y) { return flatten(field(y)); }), z, m0.rows(), m0.cols(),
                       cfg);
}

MatrixPartials matrix_partials_ext(const ExtMatrixField& field, const Vec& z, const FdConfig& cfg) {
  const ExtMat m0 = field(z.cast<long double>());
  return partials_from<long double>(ExtVectorField([&](const ExtVec& y) { return flatten_ext(field(y)); }), z, m0.rows(),
                       m0.cols(), cfg);
}

SecondPartials second_partials(const VectorField& field, const Vec& z, const FdConfig& cfg) {
  return second_partials_impl<double>(field, z, cfg);
}

SecondPartials second_partials_ext(const ExtVectorField& field, const Vec& z, const FdConfig& cfg) {
  return second_partials_impl<long double>(field, z, cfg);
}

Vec lie_bracket(const Vec& x, const Mat& dx, const Vec& y, const Mat& dy) { return dy * x - dx * y; }

FdResult lie_bracket(const VectorField& x_field, const VectorField& y_field, const Vec& z,
                     const FdConfig& cfg) {
  JacobianResult dx = jacobian(x_field, z, cfg);
  JacobianResult dy = jacobian(y_field, z, cfg);
  const Vec x = x_field(z);
  const Vec y = y_field(z);
  FdResult out;
  out.value = lie_bracket(x, dx.value, y, dy.value);
  const double xs = x.cwiseAbs().maxCoeff();
  const double ys = y.cwiseAbs().maxCoeff();
  out.error_estimate = static_cast<double>(z.size()) * (dy.error_estimate * xs + dx.error_estimate * ys);
  out.unreliable = flag(out.error_estimate, cfg);
  return out;
}

ExteriorDerivative exterior_derivative_2form(const MatrixField& omega, const Vec& z, const FdConfig& cfg) {
  MatrixPartials d = matrix_partials(omega, z, cfg);
  const int m = static_cast<int>(z.size());
  ExteriorDerivative out{MTensor(m, {Slot::Down, Slot::Down, Slot::Down}), 3.0 * d.error_estimate, false};
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        out.value(a, b, c) = d.value[static_cast<std::size_t>(a)](b, c) +
                             d.value[static_cast<std::size_t>(b)](c, a) +
                             d.value[static_cast<std::size_t>(c)](a, b);
  out.unreliable = flag(out.error_estimate, cfg);
  return out;
}

}  // namespace kahler::fd
