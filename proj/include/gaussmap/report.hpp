#pragma once

// Run configuration, suite orchestration and machine-readable reports.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gaussmap/catalog.hpp"

namespace gaussmap::report {

inline constexpr const char* kConfigSchema = "gaussmap.config.v1";
inline constexpr const char* kReportSchema = "gaussmap.report.v1";

/// Canonical suite order; reports always list suites in this order.
const std::vector<std::string>& suite_names();
/// Shortest round-trip decimal form of x, as written in reports.
std::string json_number(double x);
/// Default tolerance per "<suite>.<check>" key. Lower bounds and band edges
/// share the table.
const std::map<std::string, double>& default_tolerances();

struct CustomChart {
  int m = 0;
  int n = 0;
  std::vector<std::string> components;
  std::vector<Interval> domain;
  DerivativeMode mode = DerivativeMode::ForwardDual;
  std::optional<Interval> t_range;
  double t0 = 0.0;
  int sheet = 1;
};

struct RunConfig {
  std::optional<catalog::FixtureRequest> fixture;
  std::optional<CustomChart> custom;
  std::vector<std::string> suites;  // canonical order, no duplicates
  double fd_step = 1e-5;
  double t_step = 1e-4;
  std::uint64_t seed = 42;
  std::optional<int> samples;
  std::map<std::string, double> tolerances;  // overrides only
  std::string output_directory = "gaussmap_out";
  std::vector<std::string> formats = {"json", "csv"};

  double tolerance(const std::string& key) const;
};

/// Parses and validates a config document. Throws ConfigError carrying the
/// line and column for malformed JSON, or a JSON pointer for schema errors.
RunConfig parse_config(std::string_view text);

/// Builds the fixture described by a config (catalog or custom chart).
/// Throws ConfigError for bad expressions and FixtureError otherwise.
catalog::Fixture build_fixture(const RunConfig& config);

using Cell = std::variant<std::monostate, double, std::string>;

struct CheckResult {
  enum class Mode { Upper, Lower, Band };
  std::string name;
  Mode mode = Mode::Upper;
  double tolerance = 0.0;  // upper or lower bound
  double band_lo = 0.0, band_hi = 0.0;
  std::string status;  // pass, fail, skipped
  std::string reason;
  std::vector<double> values;
  double max = 0.0, median = 0.0, min = 0.0;
};

struct SuiteResult {
  std::string name;
  std::string status;  // pass, fail, skipped
  std::string reason;
  std::vector<CheckResult> checks;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  double seconds = 0.0;  // wall clock; kept out of the report document
};

struct Report {
  std::string fixture_label;
  std::string fixture_name;
  std::map<std::string, double> fixture_params;
  std::string fixture_kind;
  int m = 0, n = 0;
  double t0 = 0.0;
  double fd_step = 0.0, t_step = 0.0;
  std::uint64_t seed = 0;
  int samples = 0;
  std::vector<catalog::SelfTestResult> self_test;
  std::vector<SuiteResult> suites;
  bool passed = true;
};

/// Runs the configured suites. Throws FixtureError when the fixture cannot be
/// built or fails its self-test.
Report run(const RunConfig& config);

/// Deterministic JSON document (no timing information).
std::string to_json(const Report& report);
/// CSV text of one suite's sample table.
std::string to_csv(const SuiteResult& suite);
/// Writes <suite>.csv for every suite. Throws Error when the path is unwritable.
void emit_plotdata(const Report& report, const std::string& directory);
/// Writes report.json and/or CSV files per `formats`, plus timing.json.
void write_outputs(const Report& report, const std::string& directory, const std::vector<std::string>& formats);

}  // namespace gaussmap::report
