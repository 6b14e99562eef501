#include "kahler/verify.hpp"

#include "kahler/bundle_frames.hpp"
#include "kahler/complex_structure.hpp"
#include "kahler/connection.hpp"
#include "kahler/curvature.hpp"
#include "kahler/lifted_metric.hpp"
#include "kahler/sampling.hpp"

#include <fmt/format.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>

namespace kahler {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<CheckSpec> kCatalog = {
    {"base.metric_inverse", 1e-12},
    {"base.christoffel_fd", 1e-6},
    {"base.constant_curvature", 1e-6},
    {"base.bianchi", 1e-10},
    {"frames.brackets", 1e-6},
    {"frames.energy_derivatives", 1e-6},
    {"frames.coframe_duality", 1e-12},
    {"frames.round_trip", 1e-12},
    {"metric.inverse_pair", 1e-12},
    {"metric.positivity", 0.0},
    {"metric.orthogonality", 1e-12},
    {"metric.kahler_identity", 1e-14},
    {"metric.weight_consistency", 1e-12},
    {"almost_kahler.j_squared", 1e-12},
    {"almost_kahler.hermitian", 1e-12},
    {"almost_kahler.phi_blocks", 1e-12},
    {"almost_kahler.dphi", 1e-8},
    {"nijenhuis.closed_form", 1e-12},
    {"nijenhuis.finite_difference", 1e-5},
    {"nijenhuis.fd_vs_closed_form", 1e-5},
    {"nijenhuis.antisymmetry", 1e-12},
    {"connection.koszul_vs_closed_form", 1e-5},
    {"connection.metric_compatibility", 1e-5},
    {"connection.torsion", 1e-12},
    {"connection.structure", 1e-12},
    {"connection.horizontal_torsion", 1e-12},
    {"connection.base_parallel", 1e-6},
    {"curvature.block_QQQ", 1e-4},
    {"curvature.block_QQP", 1e-4},
    {"curvature.block_PPQ", 1e-4},
    {"curvature.block_PPP", 1e-4},
    {"curvature.block_PQQ", 1e-4},
    {"curvature.block_PQP", 1e-4},
    {"curvature.structural", 1e-12},
    {"curvature.bianchi", 1e-6},
    {"curvature.pair_antisymmetry", 1e-6},
    {"curvature.kahler_compatibility", 1e-5},
    {"ricci.einstein", 1e-5},
    {"ricci.closed_form", 1e-10},
    {"local_symmetry.nabla_k", 1e-4},
    {"local_symmetry.horizontal_QQQ", 1e-4},
    {"local_symmetry.horizontal_PPQ", 1e-4},
    {"local_symmetry.horizontal_PQQ", 1e-4},
    {"local_symmetry.horizontal_PQP", 1e-4},
    {"local_symmetry.vertical_QQQ", 1e-4},
    {"local_symmetry.vertical_PPQ", 1e-4},
    {"local_symmetry.vertical_PQQ", 1e-4},
    {"local_symmetry.vertical_PQP", 1e-4},
    {"holomorphic.nonconstancy", 1e-3, Bound::Min},
    {"holomorphic.scale_invariance", 1e-10},
};

constexpr std::string_view kNeedsKahler = "closed forms assume the integrable profile v = (c - A^2 t)/(A t)";

std::string block_check(CurvatureFamily f) { return fmt::format("curvature.block_{}", family_name(f)); }

// Running max per check over the sampled points.
struct Tally {
  double worst = 0.0;
  int point = -1;
  bool failed_eval = false;
  std::string note;
  std::string skipped;
};

class Collector {
 public:
  void add(std::string_view name, int point, double value, std::string note = {}) {
    Tally& t = at(name);
    if (t.failed_eval) return;
    if (std::isnan(value)) {
      mark_error(name, point, "residual is NaN");
      return;
    }
    if (t.point < 0 || value > t.worst) {
      t.worst = value;
      t.point = point;
      t.note = std::move(note);
    }
  }

  void mark_error(std::string_view name, int point, std::string_view what) {
    Tally& t = at(name);
    if (t.failed_eval) return;
    t.failed_eval = true;
    t.worst = kNaN;
    t.point = point;
    t.note = fmt::format("evaluation failed at point {}: {}", point, what);
  }

  void skip(std::string_view name, std::string_view why) { at(name).skipped = std::string(why); }

  // Runs fn for one point; any exception marks every check of the group.
  template <class Fn>
  void group(std::initializer_list<std::string_view> names, int point, Fn&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      for (std::string_view n : names) mark_error(n, point, e.what());
    }
  }

  Tally& at(std::string_view name) { return tallies_[std::string(name)]; }

 private:
  std::map<std::string, Tally> tallies_;
};

std::string json_escape(std::string_view s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20)
          out += fmt::format("\\u{:04x}", static_cast<unsigned>(ch));
        else
          out += ch;
    }
  }
  return out;
}

std::string json_number(double x) { return std::isfinite(x) ? fmt::format("{:.17g}", x) : "null"; }

double effective_tolerance(const RunConfig& cfg, const CheckSpec& spec) {
  auto it = cfg.tolerance_overrides.find(std::string(spec.name));
  return it == cfg.tolerance_overrides.end() ? spec.tolerance : it->second;
}

double tolerance_of(const RunConfig& cfg, std::string_view name) { return effective_tolerance(cfg, *find_check(name)); }

Model model_of(const RunConfig& cfg) {
  Model m{cfg.params};
  if (cfg.custom_v_offset) m.profile = VProfile::kahler_offset(*cfg.custom_v_offset);
  return m;
}

MTensor from_matrix(const MatrixXd& m, std::vector<Slot> slots) {
  MTensor t(static_cast<int>(m.rows()), std::move(slots));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) t(static_cast<int>(i), static_cast<int>(j)) = m(i, j);
  return t;
}

// Curvature used for holomorphic sectional curvature: the printed blocks when
// every family agrees with the oracle, the oracle tensor otherwise.
struct PointCurvature {
  BundleTensor closed;
  CurvatureOracle oracle;
  std::array<FamilyMismatch, 6> mismatch;
  bool closed_trusted = true;

  const BundleTensor& for_sectional() const { return closed_trusted ? closed : oracle.adapted; }
};

PointCurvature point_curvature(const RunConfig& cfg, const Model& model, const BundlePoint& pt,
                               const LiftedMetricData& d) {
  PointCurvature out{assemble_curvature(curvature_closed_form(model, d)), curvature_oracle(model, pt), {}, true};
  for (std::size_t f = 0; f < kCurvatureFamilies.size(); ++f) {
    out.mismatch[f] = family_mismatch(out.closed, out.oracle.adapted, kCurvatureFamilies[f]);
    if (!(out.mismatch[f].value < tolerance_of(cfg, block_check(kCurvatureFamilies[f]))))
      out.closed_trusted = false;
  }
  return out;
}

void check_point(const RunConfig& cfg, const Model& model, const BundlePoint& pt, int pid, Collector& col,
                 std::vector<double>& sectional) {
  const ModelParams& prm = cfg.params;
  const bool kahler = model.profile.is_kahler();
  const int n = prm.n;

  col.group({"base.metric_inverse", "base.christoffel_fd", "base.constant_curvature", "base.bianchi"}, pid, [&] {
    const BasePoint x{pt.x};
    const BaseMetricData base = metric_at(prm, x);
    col.add("base.metric_inverse", pid, (base.g * base.g_inv - MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff());
    col.add("base.christoffel_fd", pid, max_abs_diff(fd_base_geometry(prm, x).gamma, base.gamma));
    col.add("base.constant_curvature", pid,
            std::max(verify_constant_curvature(prm, x, CurvatureSource::ClosedForm),
                     verify_constant_curvature(prm, x, CurvatureSource::FiniteDifference)));
    col.add("base.bianchi", pid, first_bianchi_residual(base.riem));
  });

  col.group({"frames.brackets", "frames.energy_derivatives", "frames.coframe_duality"}, pid, [&] {
    const BracketResiduals br = verify_brackets(prm, pt);
    col.add("frames.brackets", pid, br.max());
    col.add("frames.energy_derivatives", pid, energy_derivative_residual(prm, pt));
    col.add("frames.coframe_duality", pid, coframe_duality_residual(adapted_frame(prm, pt)));
  });

  LiftedMetricData d;
  try {
    d = metric_components(model, pt);
  } catch (const std::exception& e) {
    for (const CheckSpec& spec : kCatalog)
      if (!spec.name.starts_with("base.") && !spec.name.starts_with("frames.") && spec.bound == Bound::Max)
        col.mark_error(spec.name, pid, e.what());
    col.mark_error("frames.round_trip", pid, e.what());
    return;
  }
  const MatrixXd gad = d.adapted_metric();
  const MatrixXd gcoord = assemble_full_metric(d);
  const int m = 2 * n;

  col.group({"frames.round_trip"}, pid, [&] {
    const BundleTensor t{from_matrix(gad, {Slot::Down, Slot::Down}), Basis::Adapted};
    const BundleTensor back = to_adapted(to_coordinate(t, d.frame), d.frame);
    col.add("frames.round_trip", pid, max_abs_diff(back.comps, t.comps));
  });

  col.group({"metric.inverse_pair", "metric.positivity", "metric.orthogonality", "metric.kahler_identity",
             "metric.weight_consistency"},
            pid, [&] {
              col.add("metric.inverse_pair", pid, (d.G * d.H - MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff());
              const Eigen::SelfAdjointEigenSolver<MatrixXd> es(gcoord, Eigen::EigenvaluesOnly);
              col.add("metric.positivity", pid, -es.eigenvalues().minCoeff());
              const MatrixXd& phi = d.frame.frame;
              col.add("metric.orthogonality", pid, (phi.transpose() * gcoord * phi - gad).cwiseAbs().maxCoeff());
              if (kahler) {
                col.add("metric.kahler_identity", pid, std::abs(prm.A * d.t * (d.v + prm.A) - prm.c));
                const double a2t = prm.A * prm.A * d.t;
                const double w13 = -(prm.c - a2t) / (prm.A * d.t * d.t * (2.0 * prm.c - a2t));
                col.add("metric.weight_consistency", pid,
                        std::max(std::abs(d.w - w13),
                                 (d.H - kahler_inverse_closed_form(prm, d)).cwiseAbs().maxCoeff()));
              }
            });

  col.group({"almost_kahler.j_squared", "almost_kahler.hermitian", "almost_kahler.phi_blocks", "almost_kahler.dphi"},
            pid, [&] {
              const AlmostComplexData j = j_matrix(d);
              col.add("almost_kahler.j_squared", pid,
                      std::max(j_squared_residual(j.adapted), j_squared_residual(j.coordinate)));
              col.add("almost_kahler.hermitian", pid,
                      std::max(hermitian_residual(gad, j.adapted), hermitian_residual(gcoord, j.coordinate)));
              const FundamentalForm ff = fundamental_form(model, pt);
              col.add("almost_kahler.phi_blocks", pid, phi_block_residual(ff));
              col.add("almost_kahler.dphi", pid, ff.dphi_residual);
            });

  col.group({"nijenhuis.closed_form", "nijenhuis.finite_difference", "nijenhuis.fd_vs_closed_form",
             "nijenhuis.antisymmetry"},
            pid, [&] {
              const NijenhuisData nc = nijenhuis_closed_form(model, d);
              const NijenhuisData nf = nijenhuis_fd(model, pt);
              col.add("nijenhuis.closed_form", pid, nc.max_abs());
              col.add("nijenhuis.finite_difference", pid, nf.max_abs());
              col.add("nijenhuis.fd_vs_closed_form", pid, max_abs_diff(nf.tensor.comps, nc.tensor.comps));
              col.add("nijenhuis.antisymmetry", pid,
                      std::max({nc.antisymmetry_residual(Part::H, Part::H), nc.antisymmetry_residual(Part::H, Part::V),
                                nc.antisymmetry_residual(Part::V, Part::V)}));
            });

  if (!kahler) return;

  col.group({"connection.koszul_vs_closed_form", "connection.metric_compatibility", "connection.torsion",
             "connection.structure", "connection.horizontal_torsion", "connection.base_parallel"},
            pid, [&] {
              const ConnectionReport cr = verify_connection(model, pt);
              col.add("connection.koszul_vs_closed_form", pid, cr.mismatch,
                      fmt::format("closed-form mismatch at {}: closed {:.17g} vs oracle {:.17g}", cr.worst_component,
                                  cr.closed_value, cr.oracle_value));
              col.add("connection.metric_compatibility", pid, cr.nabla_g);
              col.add("connection.torsion", pid, cr.torsion);
              const ConnectionCoefficients cf = coefficients_closed_form(model, d);
              col.add("connection.structure", pid, connection_structure_residual(cf));
              col.add("connection.horizontal_torsion", pid, horizontal_torsion_residual(cf, d));
              col.add("connection.base_parallel", pid, base_parallel_residual(model, pt));
            });

  col.group({"curvature.block_QQQ", "curvature.block_QQP", "curvature.block_PPQ", "curvature.block_PPP",
             "curvature.block_PQQ", "curvature.block_PQP", "curvature.structural", "curvature.bianchi",
             "curvature.pair_antisymmetry", "curvature.kahler_compatibility", "ricci.einstein", "ricci.closed_form",
             "holomorphic.nonconstancy", "holomorphic.scale_invariance"},
            pid, [&] {
              const PointCurvature pc = point_curvature(cfg, model, pt, d);
              for (std::size_t f = 0; f < kCurvatureFamilies.size(); ++f) {
                const FamilyMismatch& fm = pc.mismatch[f];
                col.add(block_check(kCurvatureFamilies[f]), pid, fm.value,
                        fmt::format("printed formula disagrees with oracle at {}: closed {:.17g} vs oracle {:.17g}",
                                    fm.component, fm.closed_value, fm.oracle_value));
              }
              col.add("curvature.structural", pid, curvature_structural_residual(extract_blocks(pc.closed)));
              const BundleTensor& ko = pc.oracle.adapted;
              const MatrixXd jad = j_adapted(d);
              col.add("curvature.bianchi", pid, curvature_bianchi_residual(ko));
              col.add("curvature.pair_antisymmetry", pid, pair_antisymmetry_residual(ko, gad));
              col.add("curvature.kahler_compatibility", pid, kahler_compatibility_residual(ko, gad, jad));
              col.add("ricci.einstein", pid, einstein_residual(ricci(ko), gad, prm));
              col.add("ricci.closed_form", pid, einstein_residual(ricci(pc.closed), gad, prm));

              const BundleTensor& k = pc.for_sectional();
              double scale_gap = 0.0;
              for (int dir = 0; dir < cfg.directions; ++dir) {
                const VectorXd x = sampling::sample_direction(m, cfg.seed, static_cast<std::uint64_t>(pid),
                                                              static_cast<std::uint64_t>(dir));
                const double h = holomorphic_sectional_curvature(k, gad, jad, x);
                sectional.push_back(h);
                if (dir == 0)
                  for (double lambda : {2.0, -0.5, 1e3})
                    scale_gap =
                        std::max(scale_gap, std::abs(holomorphic_sectional_curvature(k, gad, jad, lambda * x) - h));
              }
              col.add("holomorphic.scale_invariance", pid, scale_gap);
            });

  col.group({"local_symmetry.nabla_k", "local_symmetry.horizontal_QQQ", "local_symmetry.horizontal_PPQ",
             "local_symmetry.horizontal_PQQ", "local_symmetry.horizontal_PQP", "local_symmetry.vertical_QQQ",
             "local_symmetry.vertical_PPQ", "local_symmetry.vertical_PQQ", "local_symmetry.vertical_PQP"},
            pid, [&] {
              const LocalSymmetryReport rep = nabla_k(model, pt);
              col.add("local_symmetry.nabla_k", pid, rep.nabla_k);
              for (std::size_t i = 0; i < rep.identities.size(); ++i)
                col.add(fmt::format("local_symmetry.{}", kSymmetryIdentityNames[i]), pid, rep.identities[i]);
            });
}

}  // namespace

std::string_view status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::Skipped: return "SKIPPED";
    case CheckStatus::Adjudicated: return "ADJUDICATED";
  }
  return "FAIL";
}

const std::vector<CheckSpec>& check_catalog() { return kCatalog; }

const CheckSpec* find_check(std::string_view name) {
  for (const CheckSpec& s : kCatalog)
    if (s.name == name) return &s;
  return nullptr;
}

void RunConfig::validate() const {
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (auto bad = params.admissibility_violation()) throw ConfigError(*bad);
  if (points < 1) throw ConfigError(fmt::format("--points must be at least 1 (got {})", points));
  if (directions < 1) throw ConfigError(fmt::format("--directions must be at least 1 (got {})", directions));
  for (const auto& [name, value] : tolerance_overrides) {
    if (!find_check(name)) throw ConfigError(fmt::format("unknown check name in tolerance override: {}", name));
    if (!std::isfinite(value) || value < 0.0)
      throw ConfigError(fmt::format("tolerance for {} must be a finite non-negative number", name));
  }
  if (custom_v_offset && !std::isfinite(*custom_v_offset)) throw ConfigError("custom v offset must be finite");
}

bool CheckReport::verdict() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& r) {
    return r.pass() || r.status == CheckStatus::Skipped;
  });
}

const CheckRecord* CheckReport::find(std::string_view name) const {
  for (const CheckRecord& r : checks)
    if (r.name == name) return &r;
  return nullptr;
}

std::string CheckReport::to_json() const {
  const ModelParams& p = config.params;
  std::string out = "{\n  \"config\": {\n";
  out += fmt::format("    \"n\": {},\n    \"c\": {},\n    \"A\": {},\n", p.n, json_number(p.c), json_number(p.A));
  out += fmt::format("    \"points\": {},\n    \"directions\": {},\n    \"seed\": {},\n", config.points,
                     config.directions, config.seed);
  out += fmt::format("    \"v_profile\": \"{}\",\n", config.custom_v_offset ? "kahler_offset" : "kahler");
  out += fmt::format("    \"custom_v_offset\": {},\n",
                     config.custom_v_offset ? json_number(*config.custom_v_offset) : "null");
  out += "    \"tolerance_overrides\": {";
  bool first = true;
  for (const auto& [name, value] : config.tolerance_overrides) {
    out += fmt::format("{}\"{}\": {}", first ? "" : ", ", json_escape(name), json_number(value));
    first = false;
  }
  out += "},\n";
  out += fmt::format("    \"low_dimension_warning\": {}\n  }},\n", p.low_dimension_warning() ? "true" : "false");
  out += "  \"checks\": [\n";
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const CheckRecord& r = checks[i];
    out += fmt::format(
        "    {{\"name\": \"{}\", \"max_residual\": {}, \"tolerance\": {}, \"bound\": \"{}\", \"status\": \"{}\", "
        "\"pass\": {}, \"worst_point_id\": {}, \"reason\": \"{}\"}}{}\n",
        json_escape(r.name), json_number(r.max_residual), json_number(r.tolerance),
        r.bound == Bound::Max ? "max" : "min", status_name(r.status), r.pass() ? "true" : "false",
        r.worst_point_id < 0 ? std::string("null") : std::to_string(r.worst_point_id), json_escape(r.reason),
        i + 1 < checks.size() ? "," : "");
  }
  out += fmt::format("  ],\n  \"verdict\": \"{}\"\n}}\n", verdict() ? "PASS" : "FAIL");
  return out;
}

CheckReport run_verify(const RunConfig& cfg) {
  cfg.validate();
  const Model model = model_of(cfg);
  Collector col;
  std::vector<double> sectional;

  if (!model.profile.is_kahler())
    for (const CheckSpec& s : kCatalog)
      if (s.name == "metric.kahler_identity" || s.name == "metric.weight_consistency" ||
          s.name.starts_with("connection.") || s.name.starts_with("curvature.") || s.name.starts_with("ricci.") ||
          s.name.starts_with("local_symmetry.") || s.name.starts_with("holomorphic."))
        col.skip(s.name, kNeedsKahler);

  const std::vector<BundlePoint> pts = sampling::sample_points(cfg.params, cfg.seed, cfg.points);
  for (int pid = 0; pid < cfg.points; ++pid)
    check_point(cfg, model, pts[static_cast<std::size_t>(pid)], pid, col, sectional);

  if (!sectional.empty()) {
    const auto [lo, hi] = std::minmax_element(sectional.begin(), sectional.end());
    Tally& t = col.at("holomorphic.nonconstancy");
    if (!t.failed_eval) {
      t.worst = relative_spread(*lo, *hi);
      t.note = fmt::format("H ranges over [{:.17g}, {:.17g}]", *lo, *hi);
    }
  }

  const bool symmetry_ok = [&] {
    for (std::string_view name : {"ricci.einstein", "local_symmetry.nabla_k"}) {
      const Tally& t = col.at(name);
      if (!t.skipped.empty() || t.failed_eval || !(t.worst < tolerance_of(cfg, name))) return false;
    }
    return true;
  }();

  CheckReport rep;
  rep.config = cfg;
  for (const CheckSpec& spec : kCatalog) {
    const Tally& t = col.at(spec.name);
    CheckRecord r;
    r.name = std::string(spec.name);
    r.tolerance = effective_tolerance(cfg, spec);
    r.bound = spec.bound;
    if (!t.skipped.empty()) {
      r.status = CheckStatus::Skipped;
      r.max_residual = kNaN;
      r.reason = t.skipped;
      rep.checks.push_back(std::move(r));
      continue;
    }
    r.max_residual = t.worst;
    r.worst_point_id = spec.bound == Bound::Max ? t.point : -1;
    const bool ok = !t.failed_eval &&
                    (spec.bound == Bound::Max ? t.worst < r.tolerance : t.worst > r.tolerance);
    r.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
    if (!ok) {
      r.reason = t.note;
      if (spec.name.starts_with("curvature.block_") && !t.failed_eval && symmetry_ok)
        r.status = CheckStatus::Adjudicated;
    } else if (spec.bound == Bound::Min) {
      r.reason = t.note;
    }
    rep.checks.push_back(std::move(r));
  }
  return rep;
}

double relative_spread(double lo, double hi) {
  const double scale = std::max(std::abs(lo), std::abs(hi));
  return scale > 0.0 ? (hi - lo) / scale : 0.0;
}

std::string SweepResult::to_csv() const {
  std::string out = "point_id,t,direction_id,hol_sect_curv\n";
  for (const SweepRow& r : rows)
    out += fmt::format("{},{:.17g},{},{:.17g}\n", r.point_id, r.t, r.direction_id, r.hol_sect_curv);
  out += fmt::format("#summary,{:.17g},{:.17g},{:.17g}\n", min, max, rel_spread);
  return out;
}

SweepResult run_sweep(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.custom_v_offset) throw ConfigError("sweep requires the integrable profile (no --custom-v-offset)");
  const Model model = model_of(cfg);
  const int m = 2 * cfg.params.n;
  SweepResult out;
  const std::vector<BundlePoint> pts = sampling::sample_points(cfg.params, cfg.seed, cfg.points);
  for (int pid = 0; pid < cfg.points; ++pid) {
    const BundlePoint& pt = pts[static_cast<std::size_t>(pid)];
    const LiftedMetricData d = metric_components(model, pt);
    const PointCurvature pc = point_curvature(cfg, model, pt, d);
    const MatrixXd gad = d.adapted_metric();
    const MatrixXd jad = j_adapted(d);
    for (int dir = 0; dir < cfg.directions; ++dir) {
      const VectorXd x =
          sampling::sample_direction(m, cfg.seed, static_cast<std::uint64_t>(pid), static_cast<std::uint64_t>(dir));
      out.rows.push_back({pid, d.t, dir, holomorphic_sectional_curvature(pc.for_sectional(), gad, jad, x)});
    }
  }
  const auto [lo, hi] = std::minmax_element(out.rows.begin(), out.rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return a.hol_sect_curv < b.hol_sect_curv;
  });
  out.min = lo->hol_sect_curv;
  out.max = hi->hol_sect_curv;
  out.rel_spread = relative_spread(out.min, out.max);
  return out;
}

}  // namespace kahler
