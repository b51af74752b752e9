#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gaussmap/errors.hpp"
#include "gaussmap/report.hpp"

namespace gaussmap::report {

using ojson = nlohmann::ordered_json;

std::string json_number(double x) { return ojson(x).dump(); }

namespace {

const char* mode_name(CheckResult::Mode m) {
  switch (m) {
    case CheckResult::Mode::Upper: return "upper";
    case CheckResult::Mode::Lower: return "lower";
    case CheckResult::Mode::Band: return "band";
  }
  return "upper";
}

ojson cell_json(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) return std::isfinite(*d) ? ojson(*d) : ojson(nullptr);
  if (const std::string* s = std::get_if<std::string>(&c)) return *s;
  return nullptr;
}

std::string cell_csv(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) return std::isfinite(*d) ? json_number(*d) : std::string();
  if (const std::string* s = std::get_if<std::string>(&c)) {
    if (s->find_first_of(",\"\n") == std::string::npos) return *s;
    std::string out = "\"";
    for (char ch : *s) {
      if (ch == '"') out += '"';
      out += ch;
    }
    return out + "\"";
  }
  return {};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw Error("cannot write " + path.string());
}

void make_directory(const std::string& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec || !std::filesystem::is_directory(directory)) {
    throw Error("cannot create output directory " + directory + (ec ? ": " + ec.message() : ""));
  }
}

}  // namespace

std::string to_json(const Report& r) {
  ojson doc;
  doc["schema"] = kReportSchema;
  ojson fx;
  fx["name"] = r.fixture_name;
  fx["label"] = r.fixture_label;
  fx["kind"] = r.fixture_kind;
  fx["params"] = ojson::object();
  for (const auto& [k, v] : r.fixture_params) {
    if (v == std::round(v) && std::abs(v) < 1e15) {
      fx["params"][k] = static_cast<long long>(v);
    } else {
      fx["params"][k] = v;
    }
  }
  fx["m"] = r.m;
  fx["n"] = r.n;
  if (r.fixture_kind == "deformation") fx["t0"] = r.t0;
  doc["fixture"] = fx;
  doc["numeric"] = {{"fd_step", r.fd_step}, {"t_step", r.t_step}, {"seed", r.seed}, {"samples", r.samples}};
  ojson st = ojson::array();
  for (const auto& s : r.self_test) {
    st.push_back({{"quantity", s.quantity},
                  {"observed", s.observed},
                  {"expected", s.expected},
                  {"tolerance", s.tolerance},
                  {"pass", s.pass}});
  }
  doc["self_test"] = st;
  ojson suites = ojson::array();
  for (const auto& s : r.suites) {
    ojson js;
    js["name"] = s.name;
    js["status"] = s.status;
    if (!s.reason.empty()) js["reason"] = s.reason;
    ojson checks = ojson::array();
    for (const auto& c : s.checks) {
      ojson jc;
      jc["name"] = c.name;
      jc["status"] = c.status;
      if (!c.reason.empty()) jc["reason"] = c.reason;
      if (c.status != "skipped" || !c.values.empty()) {
        jc["mode"] = mode_name(c.mode);
        if (c.mode == CheckResult::Mode::Band) {
          jc["band"] = {c.band_lo, c.band_hi};
        } else {
          jc["tolerance"] = c.tolerance;
        }
        jc["count"] = c.values.size();
        jc["max"] = c.max;
        jc["median"] = c.median;
        jc["min"] = c.min;
      }
      checks.push_back(jc);
    }
    js["checks"] = checks;
    ojson table;
    table["columns"] = s.columns;
    ojson rows = ojson::array();
    for (const auto& row : s.rows) {
      ojson jr = ojson::array();
      for (const auto& c : row) jr.push_back(cell_json(c));
      rows.push_back(jr);
    }
    table["rows"] = rows;
    js["table"] = table;
    suites.push_back(js);
  }
  doc["suites"] = suites;
  doc["passed"] = r.passed;
  return doc.dump(2) + "\n";
}

std::string to_csv(const SuiteResult& s) {
  std::ostringstream out;
  for (std::size_t i = 0; i < s.columns.size(); ++i) out << (i ? "," : "") << s.columns[i];
  out << "\n";
  for (const auto& row : s.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_csv(row[i]);
    out << "\n";
  }
  return out.str();
}

void emit_plotdata(const Report& report, const std::string& directory) {
  make_directory(directory);
  for (const auto& s : report.suites) write_file(std::filesystem::path(directory) / (s.name + ".csv"), to_csv(s));
}

void write_outputs(const Report& report, const std::string& directory, const std::vector<std::string>& formats) {
  make_directory(directory);
  for (const auto& f : formats) {
    if (f == "json") write_file(std::filesystem::path(directory) / "report.json", to_json(report));
    if (f == "csv") emit_plotdata(report, directory);
  }
  ojson timing;
  timing["schema"] = "gaussmap.timing.v1";
  ojson suites = ojson::object();
  double total = 0.0;
  for (const auto& s : report.suites) {
    suites[s.name] = s.seconds;
    total += s.seconds;
  }
  timing["suites"] = suites;
  timing["total_seconds"] = total;
  write_file(std::filesystem::path(directory) / "timing.json", timing.dump(2) + "\n");
}

}  // namespace gaussmap::report
