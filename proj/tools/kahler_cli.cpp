// kahler_tube: certify the Kahler-Einstein structure on the tube over a
// positive space form.
//
//   kahler_tube verify [--dim 3] [--curvature 1] [--lift-const 1] [--points 10]
//                      [--seed 7] [--tol name=value ...] [--custom-v-offset x]
//                      [--report report.json]
//   kahler_tube sweep  [--points 10] [--directions 100] [--out sweep.csv]
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 invalid configuration.

#include "kahler/verify.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

struct Options {
  kahler::RunConfig cfg;
  std::vector<std::string> tol;
  double custom_v_offset = 0.0;
  std::string report;
  std::string out;
};

void add_common(CLI::App& cmd, Options& o) {
  cmd.add_option("--dim", o.cfg.params.n, "base dimension n");
  cmd.add_option("--curvature", o.cfg.params.c, "sectional curvature c of the base");
  cmd.add_option("--lift-const", o.cfg.params.A, "lift constant A");
  cmd.add_option("--points", o.cfg.points, "number of sampled tube points");
  cmd.add_option("--directions", o.cfg.directions, "random directions per point for sectional curvature");
  cmd.add_option("--seed", o.cfg.seed, "sampling seed");
  cmd.add_option("--tol", o.tol, "tolerance override <check>=<value>, repeatable");
}

// "name=value" pairs into the override map; throws ConfigError on bad syntax.
void parse_overrides(const std::vector<std::string>& raw, kahler::RunConfig& cfg) {
  for (const std::string& item : raw) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw kahler::ConfigError(fmt::format("--tol expects <check>=<value>, got '{}'", item));
    const std::string name = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size())
      throw kahler::ConfigError(fmt::format("--tol value for {} is not a number: '{}'", name, value));
    cfg.tolerance_overrides[name] = x;
  }
}

bool write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  f.close();
  if (!f) {
    std::cerr << "error: cannot write " << path << "\n";
    return false;
  }
  return true;
}

void print_summary(const kahler::CheckReport& rep) {
  for (const kahler::CheckRecord& r : rep.checks) {
    const std::string residual = std::isfinite(r.max_residual) ? fmt::format("{:.3e}", r.max_residual) : "-";
    fmt::print("{:<12} {:<38} {:>11} {} {:.1e}", kahler::status_name(r.status), r.name, residual,
               r.bound == kahler::Bound::Max ? "<" : ">", r.tolerance);
    if (!r.pass() && !r.reason.empty()) fmt::print("  ({})", r.reason);
    fmt::print("\n");
  }
  fmt::print("verdict: {}\n", rep.verdict() ? "PASS" : "FAIL");
}

int run_verify(Options& o, bool custom_v) {
  parse_overrides(o.tol, o.cfg);
  if (custom_v) o.cfg.custom_v_offset = o.custom_v_offset;
  o.cfg.validate();
  if (o.cfg.params.low_dimension_warning())
    std::cerr << "warning: n = 2 lies outside the dim >= 3 regime assumed for constant base curvature\n";
  const kahler::CheckReport rep = kahler::run_verify(o.cfg);
  if (o.report.empty()) {
    std::cout << rep.to_json();
  } else {
    if (!write_text(o.report, rep.to_json())) return kExitFail;
    print_summary(rep);
  }
  return rep.verdict() ? 0 : kExitFail;
}

int run_sweep(Options& o) {
  parse_overrides(o.tol, o.cfg);
  o.cfg.validate();
  const kahler::SweepResult res = kahler::run_sweep(o.cfg);
  if (o.out.empty()) {
    std::cout << res.to_csv();
    return 0;
  }
  if (!write_text(o.out, res.to_csv())) return kExitFail;
  fmt::print("{} rows, H in [{:.6g}, {:.6g}], relative spread {:.6g}\n", res.rows.size(), res.min, res.max,
             res.rel_spread);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certify the Kahler-Einstein structure on a cotangent tube"};
  app.require_subcommand(1);

  Options o;
  CLI::App* verify = app.add_subcommand("verify", "run every check and emit a JSON report");
  add_common(*verify, o);
  CLI::Option* offset =
      verify->add_option("--custom-v-offset", o.custom_v_offset, "negative test: v = v_kahler + offset");
  verify->add_option("--report", o.report, "write the JSON report here (default: stdout)");

  CLI::App* sweep = app.add_subcommand("sweep", "holomorphic sectional curvature over random directions");
  add_common(*sweep, o);
  sweep->add_option("--out", o.out, "write the CSV here (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (verify->parsed()) return run_verify(o, offset->count() > 0);
    return run_sweep(o);
  } catch (const kahler::ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}
