#pragma once

#include "kahler/base_geometry.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

/// The certification suite behind the `kahler_tube` CLI: runs every check
/// over seeded tube points and collects one record per check.
namespace kahler {

/// Invalid run configuration; the CLI maps it to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  ModelParams params;
  int points = 10;
  int directions = 100;
  std::uint64_t seed = 7;
  std::map<std::string, double> tolerance_overrides;
  /// Negative-test mode: v = v_kahler + offset.
  std::optional<double> custom_v_offset;

  /// Throws ConfigError: non-positive counts, unknown override names,
  /// negative or non-finite overrides, n < 2, and constants with an empty
  /// tube (c <= 0 or A <= 0).
  void validate() const;
};

enum class CheckStatus { Pass, Fail, Skipped, Adjudicated };
std::string_view status_name(CheckStatus s);

/// Max checks pass when the residual stays below the tolerance; min checks
/// (non-constancy) when it exceeds it.
enum class Bound { Max, Min };

struct CheckSpec {
  std::string_view name;
  double tolerance;
  Bound bound = Bound::Max;
};

/// Every check in run order with its default tolerance.
const std::vector<CheckSpec>& check_catalog();
const CheckSpec* find_check(std::string_view name);

struct CheckRecord {
  std::string name;
  double max_residual = 0.0;  // NaN when a point could not be evaluated
  double tolerance = 0.0;
  Bound bound = Bound::Max;
  CheckStatus status = CheckStatus::Pass;
  int worst_point_id = -1;
  std::string reason;

  /// Adjudicated records count as passing.
  bool pass() const { return status == CheckStatus::Pass || status == CheckStatus::Adjudicated; }
};

struct CheckReport {
  RunConfig config;
  std::vector<CheckRecord> checks;

  bool verdict() const;
  const CheckRecord* find(std::string_view name) const;
  /// Deterministic JSON; numbers carry 17 significant digits.
  std::string to_json() const;
};

/// Validates cfg, then runs the full suite. Failing checks never abort the
/// run; in custom-v mode the checks that need the integrable profile are
/// reported as skipped.
CheckReport run_verify(const RunConfig& cfg);

struct SweepRow {
  int point_id = 0;
  double t = 0.0;
  int direction_id = 0;
  double hol_sect_curv = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double min = 0.0;
  double max = 0.0;
  double rel_spread = 0.0;

  std::string to_csv() const;
};

/// Holomorphic sectional curvature over cfg.points x cfg.directions random
/// adapted-frame directions. Requires the integrable profile.
SweepResult run_sweep(const RunConfig& cfg);

/// (max - min) / max(|min|, |max|); 0 for an empty or all-zero sample.
double relative_spread(double lo, double hi);

}  // namespace kahler
