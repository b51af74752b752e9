#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gaussmap/gaussmap.h"

namespace {

// exit codes
constexpr int kPass = 0;
constexpr int kSuiteFailure = 1;
constexpr int kConfigError = 2;
constexpr int kFixtureError = 3;

bool read_file(const std::string& path, std::string& text) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  text = ss.str();
  return true;
}

int exit_code(gm_status s) {
  switch (s) {
    case GM_OK: return kPass;
    case GM_CONFIG_ERROR:
    case GM_INVALID_ARGUMENT: return kConfigError;
    case GM_FIXTURE_ERROR: return kFixtureError;
    default: return kSuiteFailure;
  }
}

void report_error(const char* what) {
  std::cerr << "error: " << what << ": " << gm_last_error() << "\n";
}

int cmd_validate(const std::string& path) {
  std::string text;
  if (!read_file(path, text)) {
    std::cerr << "error: cannot read config " << path << "\n";
    return kConfigError;
  }
  const gm_status s = gm_validate_config(text.c_str());
  if (s != GM_OK) {
    report_error("invalid config");
    return exit_code(s);
  }
  std::cout << "config is valid\n";
  return kPass;
}

int cmd_run(const std::string& path, const std::string& out, const std::optional<std::uint64_t>& seed,
            const std::optional<double>& fd_step, bool quiet) {
  std::string text;
  if (!read_file(path, text)) {
    std::cerr << "error: cannot read config " << path << "\n";
    return kConfigError;
  }
  gm_run_options opts{};
  if (seed) {
    opts.has_seed = 1;
    opts.seed = *seed;
  }
  if (fd_step) {
    opts.has_fd_step = 1;
    opts.fd_step = *fd_step;
  }
  gm_report* rep = nullptr;
  const gm_status s = gm_run(text.c_str(), &opts, &rep);
  if (!rep) {
    report_error(s == GM_FIXTURE_ERROR ? "fixture" : s == GM_CONFIG_ERROR ? "invalid config" : "run failed");
    return exit_code(s);
  }
  std::string dir = gm_report_config_directory(rep);
  if (const char* env = std::getenv("GAUSSMAP_OUT_DIR"); env && *env) dir = env;
  if (!out.empty()) dir = out;
  int code = gm_report_passed(rep) ? kPass : kSuiteFailure;
  if (gm_report_write(rep, dir.c_str()) != GM_OK) {
    report_error("cannot write outputs");
    code = kSuiteFailure;
  }
  if (!quiet) {
    for (size_t i = 0; i < gm_report_suite_count(rep); ++i) {
      std::cout << gm_report_suite_name(rep, i) << ": " << gm_report_suite_status(rep, i);
      const std::string reason = gm_report_suite_reason(rep, i);
      if (!reason.empty()) std::cout << " (" << reason << ")";
      std::cout << "\n";
    }
    std::cout << (code == kPass ? "PASS" : "FAIL") << " -> " << dir << "\n";
  }
  gm_report_free(rep);
  return code;
}

int cmd_list(bool as_json) {
  char* text = nullptr;
  if (gm_list_fixtures_json(&text) != GM_OK) {
    report_error("list-fixtures");
    return kSuiteFailure;
  }
  if (as_json) {
    std::cout << text << "\n";
  } else {
    const auto list = nlohmann::json::parse(text);
    for (const auto& f : list) {
      std::cout << f["name"].get<std::string>() << " [" << f["kind"].get<std::string>() << "] "
                << f["description"].get<std::string>() << "\n";
      for (const auto& p : f["params"]) {
        const bool integral = p["integer"].get<bool>();
        auto num = [&](const nlohmann::json& v) {
          return integral ? std::to_string(v.get<long long>()) : v.dump();
        };
        std::cout << "    " << p["name"].get<std::string>() << " = " << num(p["default"]) << " in [" << num(p["min"])
                  << ", " << num(p["max"]) << "]" << (integral ? " integer" : "") << "  "
                  << p["doc"].get<std::string>() << "\n";
      }
      if (f["takes_base"].get<bool>()) std::cout << "    base: any immersion fixture object\n";
    }
  }
  gm_string_free(text);
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gaussmap: numerical checks for the Gauss maps of immersions into spheres"};
  app.require_subcommand(1);

  std::string config, out;
  std::uint64_t seed_value = 0;
  double fd_value = 0.0;
  bool quiet = false, as_json = false;

  auto* run = app.add_subcommand("run", "run the suites named by a config file");
  run->add_option("--config", config, "config JSON file")->required();
  run->add_option("--out", out, "output directory (overrides GAUSSMAP_OUT_DIR and the config)");
  auto* seed_opt = run->add_option("--seed", seed_value, "sampling seed");
  auto* fd_opt = run->add_option("--fd-step", fd_value, "base finite-difference step");
  run->add_flag("-q,--quiet", quiet, "no per-suite summary");

  auto* validate = app.add_subcommand("validate", "check a config file against the schema");
  validate->add_option("--config", config, "config JSON file")->required();

  auto* list = app.add_subcommand("list-fixtures", "print the fixture catalog");
  list->add_flag("--json", as_json, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kConfigError;
  }
  if (*run) {
    std::optional<std::uint64_t> seed;
    std::optional<double> fd_step;
    if (seed_opt->count()) seed = seed_value;
    if (fd_opt->count()) fd_step = fd_value;
    return cmd_run(config, out, seed, fd_step, quiet);
  }
  if (*validate) return cmd_validate(config);
  return cmd_list(as_json);
}
