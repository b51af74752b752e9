#include "gaussmap/gaussmap.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include <json.hpp>

#include "gaussmap/errors.hpp"
#include "gaussmap/report.hpp"

using namespace gaussmap;

struct gm_report {
  report::Report result;
  report::RunConfig config;
  std::string json;
};

struct gm_fixture {
  catalog::Fixture fixture;
};

namespace {

thread_local std::string g_error;
thread_local int g_line = 0;
thread_local int g_column = 0;

gm_status set_error(gm_status status, const std::string& message, int line = 0, int column = 0) {
  g_error = message;
  g_line = line;
  g_column = column;
  return status;
}

void clear_error() {
  g_error.clear();
  g_line = 0;
  g_column = 0;
}

template <class F>
gm_status guarded(F&& body) {
  clear_error();
  try {
    return body();
  } catch (const ConfigError& e) {
    return set_error(GM_CONFIG_ERROR, e.what(), e.line(), e.column());
  } catch (const FixtureError& e) {
    return set_error(GM_FIXTURE_ERROR, e.what());
  } catch (const DimensionError& e) {
    return set_error(GM_INVALID_ARGUMENT, e.what());
  } catch (const DomainError& e) {
    return set_error(GM_INVALID_ARGUMENT, e.what());
  } catch (const Error& e) {
    return set_error(GM_NUMERICAL_ERROR, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(GM_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return set_error(GM_INTERNAL_ERROR, e.what());
  } catch (...) {
    return set_error(GM_INTERNAL_ERROR, "unknown error");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

const report::SuiteResult* suite_at(const gm_report* r, size_t i) {
  if (!r || i >= r->result.suites.size()) return nullptr;
  return &r->result.suites[i];
}

}  // namespace

extern "C" {

const char* gm_version(void) { return "1.0.0"; }

const char* gm_last_error(void) { return g_error.c_str(); }
int gm_last_error_line(void) { return g_line; }
int gm_last_error_column(void) { return g_column; }

void gm_string_free(char* s) { std::free(s); }

gm_status gm_validate_config(const char* config_json) {
  return guarded([&] {
    if (!config_json) return set_error(GM_INVALID_ARGUMENT, "config text is NULL");
    (void)report::parse_config(config_json);
    return GM_OK;
  });
}

gm_status gm_run(const char* config_json, const gm_run_options* options, gm_report** out) {
  return guarded([&] {
    if (!config_json || !out) return set_error(GM_INVALID_ARGUMENT, "config text and output handle are required");
    *out = nullptr;
    report::RunConfig cfg = report::parse_config(config_json);
    if (options && options->has_seed) cfg.seed = options->seed;
    if (options && options->has_fd_step) {
      if (!(options->fd_step > 0.0 && options->fd_step <= 0.1)) {
        throw ConfigError("fd_step must lie in (0, 0.1]");
      }
      cfg.fd_step = options->fd_step;
    }
    auto handle = std::make_unique<gm_report>();
    handle->result = report::run(cfg);
    handle->config = cfg;
    handle->json = report::to_json(handle->result);
    const bool passed = handle->result.passed;
    *out = handle.release();
    if (!passed) return set_error(GM_SUITE_FAILURE, "at least one suite failed");
    return GM_OK;
  });
}

int gm_report_passed(const gm_report* report) { return report && report->result.passed ? 1 : 0; }

gm_status gm_report_json(const gm_report* report, char** out) {
  return guarded([&] {
    if (!report || !out) return set_error(GM_INVALID_ARGUMENT, "report and output are required");
    *out = copy_string(report->json);
    return GM_OK;
  });
}

gm_status gm_report_csv(const gm_report* report, const char* suite, char** out) {
  return guarded([&] {
    if (!report || !suite || !out) return set_error(GM_INVALID_ARGUMENT, "report, suite and output are required");
    for (const auto& s : report->result.suites) {
      if (s.name == suite) {
        *out = copy_string(report::to_csv(s));
        return GM_OK;
      }
    }
    return set_error(GM_INVALID_ARGUMENT, std::string("suite '") + suite + "' is not in the report");
  });
}

const char* gm_report_config_directory(const gm_report* report) {
  return report ? report->config.output_directory.c_str() : "";
}

gm_status gm_report_write(const gm_report* report, const char* directory) {
  return guarded([&] {
    if (!report || !directory || !*directory) return set_error(GM_INVALID_ARGUMENT, "report and directory are required");
    try {
      report::write_outputs(report->result, directory, report->config.formats);
    } catch (const Error& e) {
      return set_error(GM_IO_ERROR, e.what());
    }
    return GM_OK;
  });
}

size_t gm_report_suite_count(const gm_report* report) { return report ? report->result.suites.size() : 0; }

const char* gm_report_suite_name(const gm_report* report, size_t index) {
  const auto* s = suite_at(report, index);
  return s ? s->name.c_str() : nullptr;
}

const char* gm_report_suite_status(const gm_report* report, size_t index) {
  const auto* s = suite_at(report, index);
  return s ? s->status.c_str() : nullptr;
}

const char* gm_report_suite_reason(const gm_report* report, size_t index) {
  const auto* s = suite_at(report, index);
  return s ? s->reason.c_str() : nullptr;
}

void gm_report_free(gm_report* report) { delete report; }

gm_status gm_list_fixtures_json(char** out) {
  return guarded([&] {
    if (!out) return set_error(GM_INVALID_ARGUMENT, "output is required");
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const auto& d : catalog::registry()) {
      nlohmann::ordered_json params = nlohmann::ordered_json::array();
      for (const auto& p : d.params) {
        params.push_back({{"name", p.name},
                          {"default", p.default_value},
                          {"min", p.lo},
                          {"max", p.hi},
                          {"integer", p.integer},
                          {"doc", p.doc}});
      }
      list.push_back({{"name", d.name},
                      {"kind", d.kind == catalog::Kind::Deformation ? "deformation" : "immersion"},
                      {"description", d.description},
                      {"takes_base", d.takes_base},
                      {"params", params}});
    }
    *out = copy_string(list.dump(2));
    return GM_OK;
  });
}

gm_status gm_fixture_create(const char* fixture_json, gm_fixture** out) {
  return guarded([&] {
    if (!fixture_json || !out) return set_error(GM_INVALID_ARGUMENT, "fixture text and output handle are required");
    *out = nullptr;
    const report::RunConfig cfg = report::parse_config(std::string("{\"fixture\": ") + fixture_json + "}");
    auto handle = std::make_unique<gm_fixture>();
    handle->fixture = report::build_fixture(cfg);
    *out = handle.release();
    return GM_OK;
  });
}

void gm_fixture_free(gm_fixture* fixture) { delete fixture; }

int gm_fixture_m(const gm_fixture* f) { return f ? f->fixture.chart.m() : 0; }
int gm_fixture_n(const gm_fixture* f) { return f ? f->fixture.chart.n() : 0; }
int gm_fixture_dim(const gm_fixture* f) { return f ? f->fixture.chart.dim() : 0; }

namespace {

Vec point_of(const gm_fixture* f, const double* x) {
  return Eigen::Map<const Vec>(x, f->fixture.chart.dim());
}

void copy_out(const Vec& v, double* out) {
  if (out) std::memcpy(out, v.data(), static_cast<std::size_t>(v.size()) * sizeof(double));
}

}  // namespace

gm_status gm_fixture_mu(const gm_fixture* f, const double* x, double* p, double* v) {
  return guarded([&] {
    if (!f || !x || !p || !v) return set_error(GM_INVALID_ARGUMENT, "fixture, point and outputs are required");
    const auto mu = f->fixture.chart.mu(point_of(f, x));
    copy_out(mu.p(), p);
    copy_out(mu.v(), v);
    return GM_OK;
  });
}

gm_status gm_fixture_gamma(const gm_fixture* f, const double* x, double* plucker) {
  return guarded([&] {
    if (!f || !x || !plucker) return set_error(GM_INVALID_ARGUMENT, "fixture, point and output are required");
    copy_out(f->fixture.chart.gamma(point_of(f, x)).plucker(), plucker);
    return GM_OK;
  });
}

gm_status gm_fixture_mean_curvature(const gm_fixture* f, const double* x, double* formula, double* oracle) {
  return guarded([&] {
    if (!f || !x) return set_error(GM_INVALID_ARGUMENT, "fixture and point are required");
    const auto mc = mean_curvature(f->fixture.chart, point_of(f, x));
    copy_out(mc.h_gamma, formula);
    copy_out(mc.oracle_h_gamma, oracle);
    return GM_OK;
  });
}

}  // extern "C"
