#pragma once

#include "kahler/fd_engine.hpp"
#include "kahler/mtensor.hpp"

#include <vector>

/// Coordinate-frame Levi-Civita data computed from a metric field and its
/// finite-difference derivatives. These routines know nothing about the
/// bundle structure; they serve as the independent oracle for every closed
/// form in the library.
namespace kahler {

struct MetricJet {
  Eigen::MatrixXd g;
  std::vector<Eigen::MatrixXd> dg;                // dg[e] = d_e g
  std::vector<std::vector<Eigen::MatrixXd>> d2g;  // d2g[e][f] = d_e d_f g; empty for first-order jets
  double error_estimate = 0.0;
  bool unreliable = false;
};

MetricJet metric_jet(const fd::MatrixField& metric, const Eigen::VectorXd& z, bool second_order,
                     const fd::FdConfig& first = fd::FdConfig::first_derivative(),
                     const fd::FdConfig& second = fd::FdConfig::second_derivative());

MetricJet metric_jet_ext(const fd::ExtMatrixField& metric, const Eigen::VectorXd& z, bool second_order,
                     const fd::FdConfig& first = fd::FdConfig::first_derivative(),
                     const fd::FdConfig& second = fd::FdConfig::second_derivative());

/// Gamma(a, b, c): component a of nabla_{d_b} d_c. Slots (Up, Down, Down).
MTensor christoffel_from_jet(const MetricJet& jet);

/// K(a, x, y, z): component a of K(d_x, d_y) d_z with
/// K(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z.
/// Requires a second-order jet.
MTensor riemann_from_jet(const MetricJet& jet);

/// Layout shared by every rank-4 curvature tensor in the library.
inline std::vector<Slot> curvature_slots() { return {Slot::Up, Slot::Down, Slot::Down, Slot::Down}; }

}  // namespace kahler
