#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gaussmap/gaussmap.h"

using json = nlohmann::json;

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  gm_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("version and validation") {
  CHECK(std::string(gm_version()).size() > 0);
  CHECK(gm_validate_config(R"J({"fixture": {"name": "clifford"}})J") == GM_OK);
  CHECK(std::string(gm_last_error()).empty());
  CHECK(gm_validate_config("{\"fixture\": {\"name\": \"clifford\"},\n \"suites\": [1,]}") == GM_CONFIG_ERROR);
  CHECK(gm_last_error_line() == 2);
  CHECK(gm_last_error_column() > 0);
  CHECK(std::string(gm_last_error()).find("line 2") != std::string::npos);
  CHECK(gm_validate_config(R"J({"fixture": {"name": "clifford"}, "suites": ["x"]})J") == GM_CONFIG_ERROR);
  CHECK(gm_last_error_line() == 0);
  CHECK(gm_validate_config(nullptr) == GM_INVALID_ARGUMENT);
  // a successful call clears the message
  CHECK(gm_validate_config(R"J({"fixture": {"name": "veronese"}})J") == GM_OK);
  CHECK(std::string(gm_last_error()).empty());
}

TEST_CASE("run status codes") {
  gm_report* r = nullptr;
  CHECK(gm_run(R"J({"fixture": {"name": "klein"}})J", nullptr, &r) == GM_FIXTURE_ERROR);
  CHECK(r == nullptr);
  CHECK(std::string(gm_last_error()).find("klein") != std::string::npos);
  CHECK(gm_run("{", nullptr, &r) == GM_CONFIG_ERROR);
  CHECK(gm_run(R"J({"fixture": {"name": "clifford"}})J", nullptr, nullptr) == GM_INVALID_ARGUMENT);

  const char* strict = R"J({"fixture": {"name": "perturbed_torus"}, "suites": ["meancurvature"],
      "numeric": {"samples": 4, "tolerances": {"meancurvature.formula_vs_oracle": 1e-15}}})J";
  REQUIRE(gm_run(strict, nullptr, &r) == GM_SUITE_FAILURE);
  CHECK(gm_report_passed(r) == 0);
  CHECK(std::string(gm_report_suite_status(r, 0)) == "fail");
  gm_report_free(r);
}

TEST_CASE("report accessors") {
  gm_report* r = nullptr;
  const char* cfg = R"J({"fixture": {"name": "perturbed_torus"}, "suites": ["legendrian", "theorem"],
      "numeric": {"samples": 6}, "output": {"directory": "elsewhere", "formats": ["json", "csv"]}})J";
  REQUIRE(gm_run(cfg, nullptr, &r) == GM_OK);
  CHECK(gm_report_passed(r) == 1);
  REQUIRE(gm_report_suite_count(r) == 2);
  CHECK(std::string(gm_report_suite_name(r, 0)) == "legendrian");
  CHECK(std::string(gm_report_suite_status(r, 1)) == "skipped");
  CHECK(std::string(gm_report_suite_reason(r, 1)).find("NotConformal") != std::string::npos);
  CHECK(gm_report_suite_name(r, 2) == nullptr);
  CHECK(std::string(gm_report_config_directory(r)) == "elsewhere");

  char* text = nullptr;
  REQUIRE(gm_report_json(r, &text) == GM_OK);
  const json doc = json::parse(take(text));
  CHECK(doc["suites"].size() == 2);
  REQUIRE(gm_report_csv(r, "legendrian", &text) == GM_OK);
  CHECK(take(text).rfind("u1,u2,", 0) == 0);
  CHECK(gm_report_csv(r, "palmer", &text) == GM_INVALID_ARGUMENT);

  const auto dir = std::filesystem::temp_directory_path() / "gaussmap_test_c_api";
  std::filesystem::remove_all(dir);
  CHECK(gm_report_write(r, dir.string().c_str()) == GM_OK);
  CHECK(std::filesystem::exists(dir / "report.json"));
  CHECK(std::filesystem::exists(dir / "timing.json"));
  CHECK(std::filesystem::exists(dir / "theorem.csv"));

  // a regular file where the directory should go
  const auto blocker = dir / "blocker";
  std::ofstream(blocker.string()) << "x";
  CHECK(gm_report_write(r, (blocker / "sub").string().c_str()) == GM_IO_ERROR);
  CHECK(std::string(gm_last_error()).size() > 0);
  gm_report_free(r);
  gm_report_free(nullptr);
}

TEST_CASE("run options override the config") {
  const char* cfg = R"J({"fixture": {"name": "clifford"}, "suites": ["legendrian"], "numeric": {"samples": 4}})J";
  gm_report* a = nullptr;
  gm_report* b = nullptr;
  gm_run_options opt{};
  opt.has_seed = 1;
  opt.seed = 99;
  REQUIRE(gm_run(cfg, &opt, &a) == GM_OK);
  REQUIRE(gm_run(cfg, nullptr, &b) == GM_OK);
  char* ta = nullptr;
  char* tb = nullptr;
  gm_report_json(a, &ta);
  gm_report_json(b, &tb);
  const json ja = json::parse(take(ta)), jb = json::parse(take(tb));
  CHECK(ja["numeric"]["seed"] == 99);
  CHECK(jb["numeric"]["seed"] == 42);
  gm_report_free(a);
  gm_report_free(b);
}

TEST_CASE("fixture list") {
  char* text = nullptr;
  REQUIRE(gm_list_fixtures_json(&text) == GM_OK);
  const json list = json::parse(take(text));
  REQUIRE(list.is_array());
  CHECK(list.size() == 10);
  bool seen = false;
  for (const auto& f : list)
    if (f["name"] == "clifford") seen = true;
  CHECK(seen);
}

TEST_CASE("fixture evaluation") {
  gm_fixture* f = nullptr;
  CHECK(gm_fixture_create(R"J({"name": "nope"})J", &f) == GM_FIXTURE_ERROR);
  CHECK(gm_fixture_create("[", &f) == GM_CONFIG_ERROR);
  REQUIRE(gm_fixture_create(R"J({"name": "geodesic_sphere", "params": {"rho": 0.7}})J", &f) == GM_OK);
  CHECK(gm_fixture_m(f) == 2);
  CHECK(gm_fixture_n(f) == 3);
  REQUIRE(gm_fixture_dim(f) == 2);

  const double x[2] = {0.4, 1.1};
  double p[4], v[4];
  REQUIRE(gm_fixture_mu(f, x, p, v) == GM_OK);
  double pp = 0, vv = 0, pv = 0;
  for (int i = 0; i < 4; ++i) {
    pp += p[i] * p[i];
    vv += v[i] * v[i];
    pv += p[i] * v[i];
  }
  CHECK(pp == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(vv == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(pv) < 1e-14);

  double g[6];
  REQUIRE(gm_fixture_gamma(f, x, g) == GM_OK);
  double gg = 0;
  for (double c : g) gg += c * c;
  CHECK(gg == doctest::Approx(1.0).epsilon(1e-13));

  double formula[6], oracle[6];
  REQUIRE(gm_fixture_mean_curvature(f, x, formula, oracle) == GM_OK);
  for (int i = 0; i < 6; ++i) {
    CHECK(std::abs(formula[i]) < 1e-4);
    CHECK(std::abs(formula[i] - oracle[i]) < 1e-3);
  }
  CHECK(gm_fixture_mean_curvature(f, x, nullptr, oracle) == GM_OK);

  CHECK(gm_fixture_mu(f, nullptr, p, v) == GM_INVALID_ARGUMENT);
  gm_fixture_free(f);
  gm_fixture_free(nullptr);
}
