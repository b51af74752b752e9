#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "gaussmap/errors.hpp"
#include "gaussmap/expr.hpp"
#include "gaussmap/report.hpp"

namespace gaussmap::report {

using json = nlohmann::json;

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"algebra", "legendrian", "metric", "meancurvature",
                                                 "theorem", "palmer", "variations"};
  return names;
}

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> tol = {
      {"algebra.bracket", 1e-13},
      {"algebra.j0_square", 1e-13},
      {"algebra.j0_isometry", 1e-13},
      {"algebra.j0_exchange", 1e-13},
      {"algebra.lambda0", 1e-13},
      {"algebra.ad_invariance", 1e-10},
      {"algebra.curvature", 1e-13},
      {"legendrian.theta", 1e-8},
      {"legendrian.lagrangian", 1e-8},
      {"legendrian.reeb_norm", 1e-12},
      {"legendrian.plucker_metric", 1e-10},
      {"legendrian.lambda_pullback", 1e-8},
      {"metric.horizontal_identity", 1e-6},
      {"metric.conformal_factor", 1e-6},
      {"meancurvature.formula_vs_oracle", 1e-3},
      {"meancurvature.reeb_component", 1e-5},
      {"meancurvature.convergence_lo", 3.0},
      {"meancurvature.convergence_hi", 5.0},
      {"meancurvature.nabla_symmetry", 1e-3},
      {"meancurvature.nabla_zero", 1e-4},
      {"theorem.h_gamma", 1e-4},
      {"theorem.eq_horizontal", 1e-3},
      {"theorem.eq_vertical", 1e-3},
      {"theorem.conformal", 1e-6},
      {"palmer.oracle", 1e-3},
      {"palmer.isoparametric", 1e-5},
      {"palmer.umbilic", 1e-4},
      {"variations.closedness", 1e-4},
      {"variations.sigma_v_period", 1e-4},
      {"variations.sigma_h_period", 1e-4},
      {"variations.potential", 1e-4},
      {"variations.monitor_small", 1e-3},
      {"variations.monitor_floor", 0.1},
      {"variations.monitor_closed_form", 1e-6},
      {"variations.monitor_constant", 1e-6},
  };
  return tol;
}

double RunConfig::tolerance(const std::string& key) const {
  const auto it = tolerances.find(key);
  if (it != tolerances.end()) return it->second;
  return default_tolerances().at(key);
}

namespace {

void line_column(std::string_view text, std::size_t byte, int& line, int& column) {
  line = 1;
  column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (const auto& [k, v] : obj.items()) {
    if (std::find_if(keys.begin(), keys.end(), [&](const char* s) { return k == s; }) == keys.end()) {
      std::string valid;
      for (const char* s : keys) valid += (valid.empty() ? "" : ", ") + std::string(s);
      fail(where + "/" + k, "unknown key (allowed: " + valid + ")");
    }
  }
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(where, "expected a finite number");
  return d;
}

long long integer(const json& v, const std::string& where) {
  if (!v.is_number_integer() && !(v.is_number_float() && v.get<double>() == std::floor(v.get<double>()))) {
    fail(where, "expected an integer");
  }
  return v.is_number_float() ? static_cast<long long>(v.get<double>()) : v.get<long long>();
}

std::string string(const json& v, const std::string& where) {
  if (!v.is_string()) fail(where, "expected a string");
  return v.get<std::string>();
}

catalog::FixtureRequest parse_fixture(const json& j, const std::string& where) {
  only_keys(j, where, {"name", "params", "base"});
  if (!j.contains("name")) fail(where, "missing required key 'name'");
  catalog::FixtureRequest req;
  req.name = string(j["name"], where + "/name");
  if (j.contains("params")) {
    const json& p = j["params"];
    if (!p.is_object()) fail(where + "/params", "expected an object");
    for (const auto& [k, v] : p.items()) req.params[k] = number(v, where + "/params/" + k);
  }
  if (j.contains("base")) req.base = std::make_shared<catalog::FixtureRequest>(parse_fixture(j["base"], where + "/base"));
  return req;
}

Interval parse_interval(const json& j, const std::string& where) {
  Interval iv;
  if (j.is_array()) {
    if (j.size() != 2) fail(where, "expected [lo, hi]");
    iv.lo = number(j[0], where + "/0");
    iv.hi = number(j[1], where + "/1");
  } else {
    only_keys(j, where, {"lo", "hi", "periodic"});
    if (!j.contains("lo") || !j.contains("hi")) fail(where, "interval needs 'lo' and 'hi'");
    iv.lo = number(j["lo"], where + "/lo");
    iv.hi = number(j["hi"], where + "/hi");
    if (j.contains("periodic")) {
      if (!j["periodic"].is_boolean()) fail(where + "/periodic", "expected a boolean");
      iv.periodic = j["periodic"].get<bool>();
    }
  }
  if (!(iv.hi > iv.lo)) fail(where, "interval must have hi > lo");
  return iv;
}

CustomChart parse_custom(const json& j, const std::string& where) {
  only_keys(j, where, {"m", "n", "components", "domain", "derivative_mode", "t_range", "t0", "sheet"});
  for (const char* k : {"m", "n", "components", "domain"}) {
    if (!j.contains(k)) fail(where, std::string("missing required key '") + k + "'");
  }
  CustomChart c;
  c.m = static_cast<int>(integer(j["m"], where + "/m"));
  c.n = static_cast<int>(integer(j["n"], where + "/n"));
  if (c.m < 1 || c.m > expr::kMaxU) fail(where + "/m", "must be in [1, 9]");
  if (c.n <= c.m || c.n > 8) fail(where + "/n", "must satisfy m < n <= 8");
  const json& comps = j["components"];
  if (!comps.is_array() || comps.size() != static_cast<std::size_t>(c.n + 1)) {
    fail(where + "/components", "expected an array of n+1 expression strings");
  }
  for (std::size_t i = 0; i < comps.size(); ++i) c.components.push_back(string(comps[i], where + "/components/" + std::to_string(i)));
  const json& dom = j["domain"];
  if (!dom.is_array() || dom.size() != static_cast<std::size_t>(c.m)) fail(where + "/domain", "expected m intervals");
  for (std::size_t i = 0; i < dom.size(); ++i) c.domain.push_back(parse_interval(dom[i], where + "/domain/" + std::to_string(i)));
  if (j.contains("derivative_mode")) {
    const std::string mode = string(j["derivative_mode"], where + "/derivative_mode");
    if (mode == "forward-dual") {
      c.mode = DerivativeMode::ForwardDual;
    } else if (mode == "finite-difference") {
      c.mode = DerivativeMode::FiniteDifference;
    } else {
      fail(where + "/derivative_mode", "expected 'forward-dual' or 'finite-difference'");
    }
  }
  if (j.contains("t_range")) c.t_range = parse_interval(j["t_range"], where + "/t_range");
  if (j.contains("t0")) c.t0 = number(j["t0"], where + "/t0");
  if (j.contains("sheet")) {
    const auto s = integer(j["sheet"], where + "/sheet");
    if (s != 1 && s != -1) fail(where + "/sheet", "must be 1 or -1");
    c.sheet = static_cast<int>(s);
  }
  if (c.t_range && (c.t0 <= c.t_range->lo || c.t0 >= c.t_range->hi)) fail(where + "/t0", "must lie inside t_range");
  // syntax and names only; evaluation waits for the run
  for (std::size_t i = 0; i < c.components.size(); ++i) {
    try {
      (void)expr::parse(c.components[i], expr::VariableSet{c.m, c.t_range.has_value()});
    } catch (const ParseError& e) {
      fail(where + "/components/" + std::to_string(i), e.what());
    }
  }
  return c;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    int line = 0, column = 0;
    line_column(text, e.byte == 0 ? 0 : e.byte - 1, line, column);
    std::string msg = e.what();
    const auto pos = msg.find("syntax error");
    throw ConfigError("malformed JSON: " + (pos == std::string::npos ? msg : msg.substr(pos)), line, column);
  }
  RunConfig cfg;
  only_keys(doc, "", {"schema", "fixture", "custom", "suites", "numeric", "output"});
  if (doc.contains("schema") && string(doc["schema"], "/schema") != kConfigSchema) {
    fail("/schema", std::string("expected '") + kConfigSchema + "'");
  }
  if (doc.contains("fixture") == doc.contains("custom")) fail("", "exactly one of 'fixture' and 'custom' is required");
  if (doc.contains("fixture")) cfg.fixture = parse_fixture(doc["fixture"], "/fixture");
  if (doc.contains("custom")) cfg.custom = parse_custom(doc["custom"], "/custom");

  if (doc.contains("suites")) {
    const json& s = doc["suites"];
    if (!s.is_array() || s.empty()) fail("/suites", "expected a non-empty array of suite names");
    std::vector<std::string> chosen;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string name = string(s[i], "/suites/" + std::to_string(i));
      const auto& all = suite_names();
      if (std::find(all.begin(), all.end(), name) == all.end()) {
        std::string valid;
        for (const auto& a : all) valid += (valid.empty() ? "" : ", ") + a;
        fail("/suites/" + std::to_string(i), "unknown suite '" + name + "' (valid: " + valid + ")");
      }
      if (std::find(chosen.begin(), chosen.end(), name) != chosen.end()) fail("/suites/" + std::to_string(i), "duplicate suite");
      chosen.push_back(name);
    }
    for (const auto& name : suite_names())
      if (std::find(chosen.begin(), chosen.end(), name) != chosen.end()) cfg.suites.push_back(name);
  } else {
    cfg.suites = suite_names();
  }

  if (doc.contains("numeric")) {
    const json& nm = doc["numeric"];
    only_keys(nm, "/numeric", {"fd_step", "t_step", "seed", "samples", "tolerances"});
    if (nm.contains("fd_step")) {
      cfg.fd_step = number(nm["fd_step"], "/numeric/fd_step");
      if (!(cfg.fd_step > 0.0 && cfg.fd_step <= 0.1)) fail("/numeric/fd_step", "must lie in (0, 0.1]");
    }
    if (nm.contains("t_step")) {
      cfg.t_step = number(nm["t_step"], "/numeric/t_step");
      if (!(cfg.t_step > 0.0 && cfg.t_step <= 0.1)) fail("/numeric/t_step", "must lie in (0, 0.1]");
    }
    if (nm.contains("seed")) {
      if (!nm["seed"].is_number_unsigned() && !(nm["seed"].is_number_integer() && nm["seed"].get<long long>() >= 0)) {
        fail("/numeric/seed", "expected a non-negative integer");
      }
      cfg.seed = nm["seed"].get<std::uint64_t>();
    }
    if (nm.contains("samples")) {
      const auto s = integer(nm["samples"], "/numeric/samples");
      if (s < 1 || s > 4096) fail("/numeric/samples", "must lie in [1, 4096]");
      cfg.samples = static_cast<int>(s);
    }
    if (nm.contains("tolerances")) {
      const json& t = nm["tolerances"];
      if (!t.is_object()) fail("/numeric/tolerances", "expected an object");
      for (const auto& [k, v] : t.items()) {
        if (!default_tolerances().count(k)) fail("/numeric/tolerances/" + k, "unknown tolerance key");
        const double d = number(v, "/numeric/tolerances/" + k);
        if (!(d > 0.0)) fail("/numeric/tolerances/" + k, "must be positive");
        cfg.tolerances[k] = d;
      }
    }
  }

  if (doc.contains("output")) {
    const json& out = doc["output"];
    only_keys(out, "/output", {"directory", "formats"});
    if (out.contains("directory")) {
      cfg.output_directory = string(out["directory"], "/output/directory");
      if (cfg.output_directory.empty()) fail("/output/directory", "must not be empty");
    }
    if (out.contains("formats")) {
      const json& f = out["formats"];
      if (!f.is_array()) fail("/output/formats", "expected an array");
      cfg.formats.clear();
      for (std::size_t i = 0; i < f.size(); ++i) {
        const std::string fmt = string(f[i], "/output/formats/" + std::to_string(i));
        if (fmt != "json" && fmt != "csv") fail("/output/formats/" + std::to_string(i), "expected 'json' or 'csv'");
        if (std::find(cfg.formats.begin(), cfg.formats.end(), fmt) == cfg.formats.end()) cfg.formats.push_back(fmt);
      }
    }
  }
  return cfg;
}

namespace {

ImmersionChart expression_chart(const CustomChart& c, const std::vector<expr::Expr>& comps, double t) {
  auto bind = [t, m = c.m](const Vec& u) {
    expr::Bindings b;
    for (int i = 0; i < m; ++i) b.u(i + 1, u(i));
    b.t(t);
    return b;
  };
  auto value = [comps, bind](const Vec& u) {
    const expr::Bindings b = bind(u);
    Vec f(static_cast<Eigen::Index>(comps.size()));
    for (std::size_t i = 0; i < comps.size(); ++i) f(static_cast<Eigen::Index>(i)) = comps[i].evaluate(b);
    return f;
  };
  ImmersionChart::DirectionalFn dir;
  if (c.mode == DerivativeMode::ForwardDual) {
    dir = [comps, bind, m = c.m](const Vec& u, const Vec& d, Vec& val, Vec& der) {
      const expr::Bindings b = bind(u);
      expr::Seeds seeds{};
      for (int i = 0; i < m; ++i) seeds[static_cast<std::size_t>(i)] = d(i);
      val.resize(static_cast<Eigen::Index>(comps.size()));
      der.resize(static_cast<Eigen::Index>(comps.size()));
      for (std::size_t i = 0; i < comps.size(); ++i) {
        const Dual r = comps[i].evaluate_dual(b, seeds);
        val(static_cast<Eigen::Index>(i)) = r.v;
        der(static_cast<Eigen::Index>(i)) = r.d;
      }
    };
  }
  return ImmersionChart(c.m, c.n, c.domain, value, dir);
}

}  // namespace

catalog::Fixture build_fixture(const RunConfig& config) {
  if (config.fixture) return catalog::get(*config.fixture);
  if (!config.custom) throw ConfigError("config names no fixture");
  const CustomChart& c = *config.custom;
  std::vector<expr::Expr> comps;
  bool uses_t = false;
  for (std::size_t i = 0; i < c.components.size(); ++i) {
    try {
      comps.push_back(expr::parse(c.components[i], expr::VariableSet{c.m, c.t_range.has_value()}));
    } catch (const ParseError& e) {
      throw ConfigError("/custom/components/" + std::to_string(i) + ": " + e.what());
    }
    uses_t = uses_t || comps.back().uses_time();
  }
  catalog::Fixture fx;
  fx.descriptor.name = "custom";
  fx.descriptor.description = "chart defined by expressions";
  fx.label = "custom(m=" + std::to_string(c.m) + ", n=" + std::to_string(c.n) + ")";
  if (c.t_range) {
    DeformationFamily fam;
    fam.interval = *c.t_range;
    fam.t_step = config.t_step;
    fam.at = [c, comps](double t) { return UnitNormalChart(expression_chart(c, comps, t), {}, c.sheet); };
    fx.descriptor.kind = catalog::Kind::Deformation;
    fx.family = fam;
    fx.t0 = c.t0;
  }
  (void)uses_t;
  fx.chart = UnitNormalChart(expression_chart(c, comps, c.t0), {}, c.sheet);
  fx.loops = catalog::periodic_loops(fx.chart);
  return fx;
}

}  // namespace gaussmap::report
