// Acceptance runner: one PASS/FAIL line per criterion, driven through the C API.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gaussmap/gaussmap.h"

using json = nlohmann::json;

namespace {

std::string g_out = "acceptance_out";

struct Outcome {
  gm_status status = GM_INTERNAL_ERROR;
  json doc;
  std::string text;
  double seconds = 0.0;
};

std::map<std::string, double> g_slowest;  // suite -> worst wall clock

Outcome run(const json& config) {
  Outcome o;
  gm_report* rep = nullptr;
  const auto t0 = std::chrono::steady_clock::now();
  o.status = gm_run(config.dump().c_str(), nullptr, &rep);
  o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!rep) {
    std::fprintf(stderr, "  run failed (%d): %s\n", static_cast<int>(o.status), gm_last_error());
    return o;
  }
  char* text = nullptr;
  if (gm_report_json(rep, &text) == GM_OK) {
    o.text = text;
    o.doc = json::parse(o.text);
    gm_string_free(text);
  }
  gm_report_free(rep);
  for (const auto& s : config["suites"]) {
    auto& w = g_slowest[s.get<std::string>()];
    w = std::max(w, o.seconds);
  }
  return o;
}

json fixture(const std::string& name, const json& params = json::object()) {
  json f = {{"name", name}};
  if (!params.empty()) f["params"] = params;
  return f;
}

json config(const json& fx, const std::vector<std::string>& suites) {
  return {{"fixture", fx}, {"suites", suites}, {"output", {{"directory", g_out}}}};
}

const json* find_suite(const json& doc, const std::string& suite) {
  if (!doc.contains("suites")) return nullptr;
  for (const auto& s : doc["suites"])
    if (s["name"] == suite) return &s;
  return nullptr;
}

const json* find_check(const json& doc, const std::string& suite, const std::string& check) {
  const json* s = find_suite(doc, suite);
  if (!s) return nullptr;
  for (const auto& c : (*s)["checks"])
    if (c["name"] == check) return &c;
  return nullptr;
}

// Collects failures of one criterion.
class Criterion {
 public:
  explicit Criterion(int number) : number_(number) {}

  void fail(const std::string& why) {
    ok_ = false;
    if (notes_.size() < 6) notes_.push_back(why);
  }

  // max of a check must be measured and strictly below `bound`
  double below(const Outcome& o, const std::string& label, const std::string& suite, const std::string& check,
               double bound) {
    const json* c = find_check(o.doc, suite, check);
    if (!c) {
      fail(label + ": " + suite + "." + check + " missing");
      return NAN;
    }
    if ((*c)["status"] == "skipped" || !c->contains("max") || (*c)["max"].is_null()) {
      fail(label + ": " + suite + "." + check + " not measured" +
           (c->contains("reason") ? " (" + (*c)["reason"].get<std::string>() + ")" : ""));
      return NAN;
    }
    const double mx = (*c)["max"].get<double>();
    if (!(mx < bound)) {
      std::ostringstream os;
      os << label << ": " << suite << "." << check << " max " << mx << " >= " << bound;
      fail(os.str());
    }
    worst_[check] = std::max(worst_[check], mx);
    return mx;
  }

  void expect(bool cond, const std::string& why) {
    if (!cond) fail(why);
  }

  void note(const std::string& s) { extra_ += (extra_.empty() ? "" : "; ") + s; }

  bool report(const std::string& title) {
    std::ostringstream os;
    for (const auto& [k, v] : worst_) os << (os.tellp() > 0 ? ", " : "") << k << " " << v;
    std::printf("criterion %d: %s  %s", number_, ok_ ? "PASS" : "FAIL", title.c_str());
    if (!worst_.empty()) std::printf("  [worst: %s]", os.str().c_str());
    if (!extra_.empty()) std::printf("  [%s]", extra_.c_str());
    std::printf("\n");
    for (const auto& n : notes_) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
    return ok_;
  }

 private:
  int number_;
  bool ok_ = true;
  std::vector<std::string> notes_;
  std::map<std::string, double> worst_;
  std::string extra_;
};

std::vector<std::pair<std::string, json>> all_fixtures() {
  return {{"totally_geodesic", fixture("totally_geodesic")},
          {"clifford", fixture("clifford")},
          {"generalized_clifford", fixture("generalized_clifford")},
          {"geodesic_sphere", fixture("geodesic_sphere")},
          {"small_circle", fixture("small_circle")},
          {"veronese", fixture("veronese")},
          {"rotational_torus", fixture("rotational_torus")},
          {"perturbed_torus", fixture("perturbed_torus")},
          {"rigid_rotation", fixture("rigid_rotation")},
          {"hopf_tilt", fixture("hopf_tilt")}};
}

bool criterion1() {
  Criterion c(1);
  const std::vector<std::pair<std::string, json>> cases = {
      {"n=2", fixture("small_circle", {{"n", 2}})},
      {"n=3", fixture("clifford")},
      {"n=4", fixture("veronese")},
      {"n=5", fixture("clifford", {{"n", 5}})},
      {"n=8", fixture("totally_geodesic", {{"m", 2}, {"n", 8}})}};
  for (const auto& [label, fx] : cases) {
    const Outcome o = run(config(fx, {"algebra"}));
    c.expect(o.status == GM_OK, label + ": algebra suite did not pass");
    for (const char* k : {"bracket", "j0_square", "j0_isometry", "j0_exchange", "lambda0", "curvature"})
      c.below(o, label, "algebra", k, 1e-13);
    c.below(o, label, "algebra", "ad_invariance", 1e-10);
  }
  return c.report("algebra: bracket relations, ad^2 nu0 = -I on q, lambda0 = <J0 a, b>, Ad-invariance");
}

bool criterion2() {
  Criterion c(2);
  for (const auto& [label, fx] : all_fixtures()) {
    const Outcome o = run(config(fx, {"legendrian"}));
    c.expect(o.status == GM_OK, label + ": legendrian suite did not pass");
    c.below(o, label, "legendrian", "theta", 1e-8);
    c.below(o, label, "legendrian", "lagrangian", 1e-8);
    c.below(o, label, "legendrian", "reeb_norm", 1e-12);
    c.below(o, label, "legendrian", "plucker_metric", 1e-10);
    c.below(o, label, "legendrian", "lambda_pullback", 1e-8);
  }
  return c.report("contact/metric: theta(dmu) = 0, gamma^* lambda_Q = 0, Reeb norm, Pluecker metric, lambda_Q frame formula");
}

bool criterion3() {
  Criterion c(3);
  for (const auto& [label, fx] : all_fixtures()) {
    const Outcome o = run(config(fx, {"metric"}));
    c.expect(o.status == GM_OK, label + ": metric suite did not pass");
    c.below(o, label, "metric", "horizontal_identity", 1e-6);
  }
  const Outcome cl = run(config(fixture("clifford"), {"metric"}));
  c.below(cl, "clifford", "metric", "conformal_factor", 1e-6);
  return c.report("induced metric: horizontal identity on every fixture, Clifford conformal factor 1/2");
}

bool criterion4() {
  Criterion c(4);
  int measured = 0, exact = 0;
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& [label, fx] : all_fixtures()) {
    const Outcome o = run(config(fx, {"meancurvature"}));
    c.expect(o.status == GM_OK, label + ": meancurvature suite did not pass");
    c.below(o, label, "meancurvature", "formula_vs_oracle", 1e-3);
    c.below(o, label, "meancurvature", "reeb_component", 1e-5);
    const json* r = find_check(o.doc, "meancurvature", "convergence_ratio");
    if (!r) {
      c.fail(label + ": convergence_ratio missing");
      continue;
    }
    if ((*r)["status"] == "skipped") {
      // both step sizes already at round-off: nothing to halve
      const std::string why = r->value("reason", "");
      c.expect(why.find("round-off") != std::string::npos, label + ": convergence skipped: " + why);
      ++exact;
      continue;
    }
    const double a = (*r)["min"].get<double>(), b = (*r)["max"].get<double>();
    lo = std::min(lo, a);
    hi = std::max(hi, b);
    c.expect(a >= 3.0 && b <= 5.0, label + ": step-halving ratio outside [3, 5]");
    ++measured;
  }
  c.expect(measured >= 5, "too few fixtures with a measurable convergence ratio");
  std::ostringstream os;
  os << "halving ratio " << lo << ".." << hi << " on " << measured << " fixtures, " << exact << " exact to round-off";
  c.note(os.str());
  return c.report("mean curvature: formula vs tension oracle, ~4x under step halving, Reeb component");
}

bool criterion5() {
  Criterion c(5);
  const std::vector<std::pair<std::string, json>> zero = {
      {"totally_geodesic", fixture("totally_geodesic")},
      {"clifford", fixture("clifford")},
      {"generalized_clifford(minimal)", fixture("generalized_clifford", {{"minimal", 1}})},
      {"geodesic_sphere", fixture("geodesic_sphere")},
      {"veronese", fixture("veronese")}};
  for (const auto& [label, fx] : zero) {
    const Outcome o = run(config(fx, {"theorem"}));
    c.expect(o.status == GM_OK, label + ": theorem suite did not pass");
    c.below(o, label, "theorem", "h_gamma", 1e-4);
  }
  const std::vector<std::pair<std::string, json>> conformal = {
      {"totally_geodesic", fixture("totally_geodesic")},
      {"clifford", fixture("clifford")},
      {"generalized_clifford(p=q=2)", fixture("generalized_clifford", {{"p", 2}, {"q", 2}})},
      {"geodesic_sphere", fixture("geodesic_sphere")},
      {"veronese", fixture("veronese")},
      {"small_circle", fixture("small_circle")},
      {"clifford(n=5)", fixture("clifford", {{"n", 5}})}};
  for (const auto& [label, fx] : conformal) {
    const Outcome o = run(config(fx, {"theorem"}));
    c.below(o, label, "theorem", "eq_horizontal", 1e-3);
    const json* v = find_check(o.doc, "theorem", "eq_vertical");
    if (v && (*v)["status"] != "skipped") c.below(o, label, "theorem", "eq_vertical", 1e-3);
  }
  // small circle: vertical equation with nonzero sides
  {
    const Outcome o = run(config(fixture("small_circle"), {"theorem"}));
    const json* s = find_suite(o.doc, "theorem");
    double smallest = INFINITY, gap = 0.0;
    std::size_t rows = 0;
    if (s) {
      const auto& cols = (*s)["table"]["columns"];
      const auto li = std::find(cols.begin(), cols.end(), "side2_lhs") - cols.begin();
      const auto ri = std::find(cols.begin(), cols.end(), "side2_rhs") - cols.begin();
      for (const auto& row : (*s)["table"]["rows"]) {
        if (row[li].is_null() || row[ri].is_null()) continue;
        const double l = row[li].get<double>(), r = row[ri].get<double>();
        smallest = std::min(smallest, std::abs(l));
        gap = std::max(gap, std::abs(l - r));
        ++rows;
      }
    }
    c.expect(rows > 0, "small_circle: no vertical-equation sides recorded");
    c.expect(smallest > 1e-6, "small_circle: vertical-equation side vanishes");
    c.expect(gap < 1e-4, "small_circle: sides differ by more than 1e-4");
    std::ostringstream os;
    os << "small_circle sides: min |lhs| " << smallest << ", max |lhs - rhs| " << gap;
    c.note(os.str());
  }
  {
    const Outcome o = run(config(fixture("perturbed_torus"), {"theorem", "legendrian"}));
    const json* s = find_suite(o.doc, "theorem");
    c.expect(o.status == GM_OK, "perturbed_torus: run did not exit cleanly");
    c.expect(s && (*s)["status"] == "skipped", "perturbed_torus: theorem suite not skipped");
    c.expect(s && s->value("reason", "").find("NotConformal") != std::string::npos,
             "perturbed_torus: refusal reason does not name NotConformal");
    const json* eq = find_check(o.doc, "theorem", "eq_horizontal");
    if (eq) c.note("perturbed_torus: " + eq->value("reason", "").substr(0, 48) + "...");
  }
  return c.report("theorem: H_gamma = 0 on the listed fixtures, both equations where conformal, small_circle, refusal");
}

bool criterion6() {
  Criterion c(6);
  const std::vector<std::pair<std::string, json>> iso = {
      {"clifford", fixture("clifford")},
      {"generalized_clifford", fixture("generalized_clifford")},
      {"generalized_clifford(p=2,q=3)", fixture("generalized_clifford", {{"p", 2}, {"q", 3}})},
      {"geodesic_sphere", fixture("geodesic_sphere")},
      {"totally_geodesic(m=2,n=3)", fixture("totally_geodesic", {{"m", 2}, {"n", 3}})},
      {"small_circle(n=2)", fixture("small_circle", {{"n", 2}})}};
  for (const auto& [label, fx] : iso) {
    const Outcome o = run(config(fx, {"palmer"}));
    c.expect(o.status == GM_OK, label + ": palmer suite did not pass");
    c.below(o, label, "palmer", "isoparametric", 1e-5);
  }
  for (const auto& [label, fx] : std::vector<std::pair<std::string, json>>{
           {"rotational_torus", fixture("rotational_torus")},
           {"perturbed_torus", fixture("perturbed_torus")}}) {
    const Outcome o = run(config(fx, {"palmer"}));
    c.expect(o.status == GM_OK, label + ": palmer suite did not pass");
    c.below(o, label, "palmer", "oracle", 1e-3);
  }
  for (const auto& [label, fx] : std::vector<std::pair<std::string, json>>{
           {"geodesic_sphere", fixture("geodesic_sphere")},
           {"geodesic_sphere(n=4)", fixture("geodesic_sphere", {{"n", 4}, {"rho", 1.9}})}}) {
    const Outcome o = run(config(fx, {"palmer"}));
    c.below(o, label, "palmer", "umbilic", 1e-4);
  }
  return c.report("Palmer form: zero on isoparametric fixtures, matches oracle, umbilic fallback");
}

bool criterion7() {
  Criterion c(7);
  int loops = 0;
  for (const auto& [label, fx] : all_fixtures()) {
    const Outcome o = run(config(fx, {"variations"}));
    c.expect(o.status == GM_OK, label + ": variations suite did not pass");
    const json* h = find_check(o.doc, "variations", "sigma_h_period");
    if (h && (*h)["status"] != "skipped") {
      c.below(o, label, "variations", "sigma_h_period", 1e-4);
      loops += (*h)["count"].get<int>();
    } else if (label != "totally_geodesic" && label != "small_circle" && label != "veronese" &&
               label != "geodesic_sphere") {
      c.fail(label + ": no sigma_H period measured");
    }
    if (label == "rigid_rotation" || label == "hopf_tilt") {
      c.below(o, label, "variations", "closedness", 1e-4);
      c.below(o, label, "variations", "sigma_v_period", 1e-4);
    }
    if (label == "hopf_tilt") {
      c.below(o, label, "variations", "monitor_small", 1e-3);
      const json* f = find_check(o.doc, "variations", "monitor_floor");
      c.expect(f && (*f)["status"] == "pass" && (*f)["min"].get<double>() >= 0.1,
               "hopf_tilt: monitor not bounded below at t = 0.5");
      if (f) c.note("hopf_tilt monitor at t = 0.5: " + std::to_string((*f)["min"].get<double>()));
    }
  }
  // the variation of a rigid rotation of the Veronese surface
  {
    json rr = fixture("rigid_rotation");
    rr["base"] = fixture("veronese");
    const Outcome o = run(config(rr, {"variations"}));
    c.expect(o.status == GM_OK, "rigid_rotation(veronese): variations suite did not pass");
    c.below(o, "rigid_rotation(veronese)", "variations", "closedness", 1e-4);
    c.below(o, "rigid_rotation(veronese)", "variations", "sigma_v_period", 1e-4);
    c.below(o, "rigid_rotation(veronese)", "variations", "sigma_h_period", 1e-4);
  }
  c.note(std::to_string(loops) + " sigma_H periods");
  return c.report("variations: d sigma_V = 0, sigma_V and sigma_H periods vanish, Hopf transversality monitor");
}

json random_chart_s3() {
  return {{"m", 2},
          {"n", 3},
          {"components",
           {"cos(u1) * cos(pi/4 + 0.15*sin(u1 + 2*u2) + 0.1*cos(3*u1))",
            "sin(u1) * cos(pi/4 + 0.15*sin(u1 + 2*u2) + 0.1*cos(3*u1))",
            "cos(u2) * sin(pi/4 + 0.15*sin(u1 + 2*u2) + 0.1*cos(3*u1))",
            "sin(u2) * sin(pi/4 + 0.15*sin(u1 + 2*u2) + 0.1*cos(3*u1))"}},
          {"domain", {{{"lo", 0}, {"hi", 2 * M_PI}, {"periodic", true}}, {{"lo", 0}, {"hi", 2 * M_PI}, {"periodic", true}}}}};
}

json random_chart_s4() {
  const std::string c3 = "(0.8 + 0.3*sin(u1 + u2))", c4 = "(0.5 + 0.4*cos(u1 - 2*u2))";
  return {{"m", 2},
          {"n", 4},
          {"components",
           {"cos(u1)", "sin(u1) * cos(u2)", "sin(u1) * sin(u2) * cos" + c3,
            "sin(u1) * sin(u2) * sin" + c3 + " * cos" + c4, "sin(u1) * sin(u2) * sin" + c3 + " * sin" + c4}},
          {"domain", {{0.5, 1.4}, {0.5, 1.4}}}};
}

bool criterion8() {
  Criterion c(8);
  for (const auto& [label, cfg] : std::vector<std::pair<std::string, json>>{
           {"perturbed_torus", config(fixture("perturbed_torus"), {"meancurvature"})},
           {"rotational_torus", config(fixture("rotational_torus"), {"meancurvature"})},
           {"custom chart in S^3", {{"custom", random_chart_s3()}, {"suites", {"meancurvature"}}, {"output", {{"directory", g_out}}}}},
           {"custom chart in S^4", {{"custom", random_chart_s4()}, {"suites", {"meancurvature"}}, {"output", {{"directory", g_out}}}}}}) {
    const Outcome o = run(cfg);
    c.expect(o.status == GM_OK, label + ": meancurvature suite did not pass");
    c.below(o, label, "meancurvature", "nabla_symmetry", 1e-3);
  }
  for (const auto& [label, fx] : std::vector<std::pair<std::string, json>>{
           {"totally_geodesic", fixture("totally_geodesic")},
           {"clifford", fixture("clifford")},
           {"generalized_clifford", fixture("generalized_clifford")},
           {"geodesic_sphere", fixture("geodesic_sphere")},
           {"veronese", fixture("veronese")}}) {
    const Outcome o = run(config(fx, {"meancurvature"}));
    c.below(o, label, "meancurvature", "nabla_zero", 1e-4);
  }
  return c.report("covariant derivative of II: totally symmetric on random charts, zero on parallel fixtures");
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool criterion9() {
  Criterion c(9);
  std::vector<std::string> suites = {"algebra", "legendrian", "metric", "meancurvature", "theorem", "palmer", "variations"};
  for (const auto& [label, cfg] : std::vector<std::pair<std::string, json>>{
           {"perturbed_torus", config(fixture("perturbed_torus"), suites)},
           {"hopf_tilt", config(fixture("hopf_tilt"), suites)}}) {
    std::vector<std::string> texts;
    std::vector<std::map<std::string, std::string>> files;
    for (int k = 0; k < 2; ++k) {
      gm_report* rep = nullptr;
      const gm_status st = gm_run(cfg.dump().c_str(), nullptr, &rep);
      if (!rep) {
        c.fail(label + ": run failed: " + gm_last_error());
        break;
      }
      c.expect(st == GM_OK, label + ": not every suite passed");
      char* text = nullptr;
      gm_report_json(rep, &text);
      texts.emplace_back(text ? text : "");
      gm_string_free(text);
      const auto dir = std::filesystem::path(g_out) / ("determinism_" + label + "_" + std::to_string(k));
      std::filesystem::remove_all(dir);
      c.expect(gm_report_write(rep, dir.string().c_str()) == GM_OK, label + ": write failed");
      std::map<std::string, std::string> contents;
      for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.path().filename() != "timing.json") contents[e.path().filename().string()] = slurp(e.path());
      files.push_back(contents);
      gm_report_free(rep);
    }
    if (texts.size() == 2) {
      c.expect(!texts[0].empty() && texts[0] == texts[1], label + ": report JSON differs between runs");
      c.expect(files[0] == files[1], label + ": written report/CSV files differ between runs");
      c.expect(files[0].size() == suites.size() + 1, label + ": expected report.json and one CSV per suite");
      c.note(label + " " + std::to_string(texts[0].size()) + " bytes x2");
    }
  }
  return c.report("determinism: identical config and seed give byte-identical reports");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_out = argv[1];
  std::filesystem::create_directories(g_out);
  std::printf("gaussmap %s acceptance\n", gm_version());
  bool ok = true;
  ok = criterion1() && ok;
  ok = criterion2() && ok;
  ok = criterion3() && ok;
  ok = criterion4() && ok;
  ok = criterion5() && ok;
  ok = criterion6() && ok;
  ok = criterion7() && ok;
  ok = criterion8() && ok;
  ok = criterion9() && ok;
  double slowest = 0.0;
  std::string which;
  for (const auto& [s, t] : g_slowest)
    if (t > slowest) {
      slowest = t;
      which = s;
    }
  std::printf("slowest single run: %.2f s (%s)%s\n", slowest, which.c_str(), slowest < 60.0 ? "" : "  exceeds 60 s");
  std::printf("%s\n", ok ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return ok ? 0 : 1;
}
