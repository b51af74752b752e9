#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "gaussmap/errors.hpp"
#include "gaussmap/report.hpp"

using namespace gaussmap;
using namespace gaussmap::report;
using json = nlohmann::json;

namespace {

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("gaussmap_test_report_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

const json& check_of(const json& doc, const std::string& suite, const std::string& check) {
  for (const auto& s : doc["suites"])
    if (s["name"] == suite)
      for (const auto& c : s["checks"])
        if (c["name"] == check) return c;
  static const json none;
  return none;
}

}  // namespace

TEST_CASE("config defaults") {
  const RunConfig c = parse_config(R"J({"fixture": {"name": "clifford"}})J");
  REQUIRE(c.fixture);
  CHECK(c.fixture->name == "clifford");
  CHECK(c.suites == suite_names());
  CHECK(c.fd_step == 1e-5);
  CHECK(c.t_step == 1e-4);
  CHECK(c.seed == 42);
  CHECK_FALSE(c.samples);
  CHECK(c.output_directory == "gaussmap_out");
  CHECK(c.formats == std::vector<std::string>{"json", "csv"});
  CHECK(c.tolerance("theorem.h_gamma") == 1e-4);
  CHECK(c.tolerance("algebra.bracket") == 1e-13);
}

TEST_CASE("config fields") {
  const RunConfig c = parse_config(R"J({
    "schema": "gaussmap.config.v1",
    "fixture": {"name": "rigid_rotation", "params": {"t": 0.1}, "base": {"name": "clifford", "params": {"n": 4}}},
    "suites": ["variations", "algebra", "theorem"],
    "numeric": {"fd_step": 1e-4, "t_step": 1e-3, "seed": 7, "samples": 10,
                "tolerances": {"theorem.h_gamma": 2e-4}},
    "output": {"directory": "out", "formats": ["csv"]}
  })J");
  CHECK(c.suites == std::vector<std::string>{"algebra", "theorem", "variations"});
  CHECK(c.fixture->params.at("t") == 0.1);
  REQUIRE(c.fixture->base);
  CHECK(c.fixture->base->params.at("n") == 4);
  CHECK(c.seed == 7);
  CHECK(*c.samples == 10);
  CHECK(c.tolerance("theorem.h_gamma") == 2e-4);
  CHECK(c.formats == std::vector<std::string>{"csv"});
}

TEST_CASE("malformed JSON reports line and column") {
  try {
    parse_config("{\n  \"fixture\": {\"name\": \"clifford\"},\n  \"suites\": [\"algebra\",]\n}");
    FAIL("accepted");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 24);
    CHECK(std::string(e.what()).find("malformed JSON") != std::string::npos);
    CHECK(std::string(e.what()).find("line 3, column 24") != std::string::npos);
  }
  try {
    parse_config("");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 1);
  }
}

TEST_CASE("schema violations name the offending path") {
  CHECK(config_error(R"J({"fixture": {"name": "clifford"}, "colour": 1})J").find("colour") != std::string::npos);
  CHECK(config_error(R"J({"suites": ["algebra"]})J").find("exactly one") != std::string::npos);
  CHECK(config_error(R"J({"fixture": {"name": "clifford"}, "custom": {}})J").find("exactly one") != std::string::npos);
  CHECK(config_error(R"J({"fixture": {"name": "clifford"}, "suites": ["algebra", "nope"]})J").find("/suites/1") != std::string::npos);
  CHECK(config_error(R"J({"fixture": {"name": "clifford"}, "suites": ["algebra", "algebra"]})J").find("duplicate") != std::string::npos);
  CHECK(config_error(R"J({"fixture": {"name": "clifford"}, "suites": []})J").find("/suites") != std::string::npos);
  CHECK(config_error(R"J({"fixture": {"name": "clifford"}, "numeric": {"fd_step": 0.5}})J").find("/numeric/fd_step") != std::string::npos);
  CHECK(config_error(R"J({"fixture": {"name": "clifford"}, "numeric": {"seed": -1}})J").find("/numeric/seed") != std::string::npos);
  CHECK(config_error(R"J({"fixture": {"name": "clifford"}, "numeric": {"samples": 5000}})J").find("/numeric/samples") != std::string::npos);
  CHECK(config_error(R"J({"fixture": {"name": "clifford"}, "numeric": {"tolerances": {"x.y": 1}}})J").find("x.y") != std::string::npos);
  CHECK(config_error(R"J({"fixture": {"name": "clifford"}, "numeric": {"tolerances": {"theorem.h_gamma": 0}}})J").find("positive") != std::string::npos);
  CHECK(config_error(R"J({"fixture": {"name": "clifford"}, "output": {"formats": ["pdf"]}})J").find("/output/formats/0") != std::string::npos);
  CHECK(config_error(R"J({"fixture": {"name": "clifford"}, "output": {"directory": ""}})J").find("/output/directory") != std::string::npos);
  CHECK(config_error(R"J({"fixture": {"name": "clifford", "extra": 1}})J").find("/fixture") != std::string::npos);
  CHECK(config_error(R"J({"schema": "v0", "fixture": {"name": "clifford"}})J").find("/schema") != std::string::npos);
}

TEST_CASE("custom charts") {
  const std::string good = R"J({"custom": {"m": 1, "n": 2,
      "components": ["sin(0.5) * cos(u1)", "sin(0.5) * sin(u1)", "cos(0.5)"],
      "domain": [{"lo": 0, "hi": 6.283185307179586, "periodic": true}]},
      "suites": ["meancurvature"]})J";
  const RunConfig c = parse_config(good);
  REQUIRE(c.custom);
  CHECK(c.custom->components.size() == 3);
  const auto fx = build_fixture(c);
  CHECK(fx.chart.n() == 2);
  CHECK(fx.label == "custom(m=1, n=2)");
  CHECK(fx.loops.size() == 1);

  // wrong component count, bad dimension, t0 outside t_range
  CHECK_FALSE(config_error(R"J({"custom": {"m": 1, "n": 2, "components": ["1", "0"], "domain": [[0, 1]]}})J").empty());
  CHECK_FALSE(config_error(R"J({"custom": {"m": 2, "n": 2, "components": ["1", "0", "0"], "domain": [[0, 1], [0, 1]]}})J").empty());
  CHECK_FALSE(config_error(R"J({"custom": {"m": 1, "n": 2, "components": ["cos(u1)", "sin(u1)", "0"],
      "domain": [[0, 1]], "t_range": [0, 1], "t0": 2}})J").empty());

  // expression errors carry the component and offset
  const std::string bad = R"J({"custom": {"m": 1, "n": 2, "components": ["cos(u1)", "sin(u1) +", "u2"],
      "domain": [[0, 1]]}})J";
  try {
    parse_config(bad);
    FAIL("accepted");
  } catch (const ConfigError& e) {
    const std::string w = e.what();
    CHECK(w.find("/custom/components/1") != std::string::npos);
    CHECK(w.find("offset 10") != std::string::npos);
  }
}

TEST_CASE("run: clifford, legendrian and theorem") {
  RunConfig c = parse_config(R"J({"fixture": {"name": "clifford"}, "suites": ["legendrian", "theorem"],
                                 "numeric": {"samples": 16}})J");
  const Report r = run(c);
  CHECK(r.passed);
  REQUIRE(r.suites.size() == 2);
  CHECK(r.suites[0].name == "legendrian");
  CHECK(r.suites[1].status == "pass");
  const json doc = json::parse(to_json(r));
  CHECK(doc["schema"] == kReportSchema);
  CHECK(doc["fixture"]["label"] == "clifford(n=3)");
  CHECK(doc["fixture"]["params"]["n"] == 3);
  CHECK(doc["fixture"]["params"]["n"].is_number_integer());
  CHECK(doc["numeric"]["samples"] == 16);
  const json& h = check_of(doc, "theorem", "h_gamma");
  CHECK(h["status"] == "pass");
  CHECK(h["count"] == 16);
  CHECK(h["max"].get<double>() < 1e-4);
  CHECK(h["median"].get<double>() <= h["max"].get<double>());
  CHECK(h["min"].get<double>() <= h["median"].get<double>());
  CHECK(doc["passed"] == true);
  CHECK_FALSE(doc.contains("seconds"));
}

TEST_CASE("run: non-conformal theorem is skipped with a reason") {
  const Report r = run(parse_config(R"J({"fixture": {"name": "perturbed_torus"}, "suites": ["theorem"],
                                        "numeric": {"samples": 8}})J"));
  CHECK(r.passed);
  REQUIRE(r.suites.size() == 1);
  CHECK(r.suites[0].status == "skipped");
  CHECK(r.suites[0].reason.find("NotConformal") != std::string::npos);
}

TEST_CASE("run: tightened tolerance fails the suite") {
  const Report r = run(parse_config(R"J({"fixture": {"name": "perturbed_torus"}, "suites": ["meancurvature"],
      "numeric": {"samples": 8, "tolerances": {"meancurvature.formula_vs_oracle": 1e-14}}})J"));
  CHECK_FALSE(r.passed);
  CHECK(r.suites[0].status == "fail");
  CHECK(r.suites[0].reason.find("formula_vs_oracle") != std::string::npos);
}

TEST_CASE("run: fixture failures raise FixtureError") {
  CHECK_THROWS_AS(run(parse_config(R"J({"fixture": {"name": "nope"}})J")), FixtureError);
  // not on the unit sphere
  CHECK_THROWS_AS(run(parse_config(R"J({"custom": {"m": 1, "n": 2, "components": ["2*cos(u1)", "2*sin(u1)", "0"],
      "domain": [[0, 1]]}, "suites": ["algebra"]})J")),
                  FixtureError);
}

TEST_CASE("CSV tables") {
  const Report r = run(parse_config(R"J({"fixture": {"name": "geodesic_sphere"}, "suites": ["theorem"],
                                        "numeric": {"samples": 12}})J"));
  const std::string csv = to_csv(r.suites[0]);
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "u1,u2,residual1,residual2,h_gamma_norm,side2_lhs,side2_rhs");
  int rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++rows;
    // residual1 is the third column
    std::istringstream cells(line);
    std::string a, b, r1;
    std::getline(cells, a, ',');
    std::getline(cells, b, ',');
    std::getline(cells, r1, ',');
    CHECK(std::stod(r1) < 1e-4);
  }
  CHECK(rows == 12);

  SuiteResult empty;
  empty.columns = {"u1", "value"};
  CHECK(to_csv(empty) == "u1,value\n");

  SuiteResult quoted;
  quoted.columns = {"quantity", "value"};
  quoted.rows = {{std::string("a,b"), 1.5}, {std::string("say \"hi\""), std::monostate{}}};
  CHECK(to_csv(quoted) == "quantity,value\n\"a,b\",1.5\n\"say \"\"hi\"\"\",\n");
}

TEST_CASE("outputs are deterministic and timing is kept apart") {
  const std::string text = R"J({"fixture": {"name": "hopf_tilt"}, "suites": ["legendrian", "variations"],
                               "numeric": {"samples": 8}})J";
  const Report a = run(parse_config(text));
  const Report b = run(parse_config(text));
  CHECK(to_json(a) == to_json(b));
  const auto d1 = scratch("a"), d2 = scratch("b");
  write_outputs(a, d1.string(), {"json", "csv"});
  write_outputs(b, d2.string(), {"json", "csv"});
  for (const char* f : {"report.json", "legendrian.csv", "variations.csv"}) {
    CAPTURE(f);
    REQUIRE(std::filesystem::exists(d1 / f));
    CHECK(slurp(d1 / f) == slurp(d2 / f));
  }
  const json timing = json::parse(slurp(d1 / "timing.json"));
  CHECK(timing["schema"] == "gaussmap.timing.v1");
  CHECK(timing["suites"].contains("variations"));
  // a different seed changes the sample table
  const Report c = run(parse_config(R"J({"fixture": {"name": "hopf_tilt"}, "suites": ["legendrian", "variations"],
                                        "numeric": {"samples": 8, "seed": 43}})J"));
  CHECK(to_json(c) != to_json(a));

  const auto only_csv = scratch("csv");
  write_outputs(a, only_csv.string(), {"csv"});
  CHECK_FALSE(std::filesystem::exists(only_csv / "report.json"));
  CHECK(std::filesystem::exists(only_csv / "variations.csv"));
}

TEST_CASE("unwritable output is an error") {
  const auto file = scratch("blocker");
  std::ofstream(file.string()) << "x";
  const Report r = run(parse_config(R"J({"fixture": {"name": "clifford"}, "suites": ["algebra"],
                                        "numeric": {"samples": 2}})J"));
  CHECK_THROWS_AS(emit_plotdata(r, (file / "sub").string()), Error);
  CHECK_THROWS_AS(write_outputs(r, file.string(), {"json"}), Error);
  std::filesystem::remove(file);
}

TEST_CASE("numbers round-trip") {
  for (double x : {0.1, 1e-300, 123456.789, -2.5e-17, 1.0 / 3.0}) CHECK(std::stod(json_number(x)) == x);
}
