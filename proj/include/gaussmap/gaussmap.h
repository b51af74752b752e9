#ifndef GAUSSMAP_GAUSSMAP_H
#define GAUSSMAP_GAUSSMAP_H

/* C interface to the gaussmap library. Handles are opaque; strings returned
 * through char** are heap copies released with gm_string_free. Every call
 * that returns a gm_status other than GM_OK leaves a message readable with
 * gm_last_error on the calling thread. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define GM_API __declspec(dllexport)
#else
#define GM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gm_status {
  GM_OK = 0,
  GM_SUITE_FAILURE = 1, /* the run completed and at least one suite failed */
  GM_CONFIG_ERROR = 2,
  GM_FIXTURE_ERROR = 3,
  GM_INVALID_ARGUMENT = 4,
  GM_IO_ERROR = 5,
  GM_NUMERICAL_ERROR = 6,
  GM_INTERNAL_ERROR = 7
} gm_status;

typedef struct gm_report gm_report;
typedef struct gm_fixture gm_fixture;

typedef struct gm_run_options {
  int has_seed;
  uint64_t seed;
  int has_fd_step;
  double fd_step;
} gm_run_options;

GM_API const char* gm_version(void);

/* Message of the last failed call on this thread, "" if none. */
GM_API const char* gm_last_error(void);
/* 1-based position of a JSON syntax error, 0 otherwise. */
GM_API int gm_last_error_line(void);
GM_API int gm_last_error_column(void);

GM_API void gm_string_free(char* s);

/* Schema validation only; nothing is computed. */
GM_API gm_status gm_validate_config(const char* config_json);

/* Runs the configured suites. On GM_OK or GM_SUITE_FAILURE *out receives a
 * report owned by the caller. options may be NULL. */
GM_API gm_status gm_run(const char* config_json, const gm_run_options* options, gm_report** out);

GM_API int gm_report_passed(const gm_report* report);
GM_API gm_status gm_report_json(const gm_report* report, char** out);
GM_API gm_status gm_report_csv(const gm_report* report, const char* suite, char** out);
/* Output directory named by the config (or the default). */
GM_API const char* gm_report_config_directory(const gm_report* report);
/* Writes the configured formats and timing.json into directory. */
GM_API gm_status gm_report_write(const gm_report* report, const char* directory);
/* Number of suites and their names and statuses ("pass", "fail", "skipped"). */
GM_API size_t gm_report_suite_count(const gm_report* report);
GM_API const char* gm_report_suite_name(const gm_report* report, size_t index);
GM_API const char* gm_report_suite_status(const gm_report* report, size_t index);
GM_API const char* gm_report_suite_reason(const gm_report* report, size_t index);
GM_API void gm_report_free(gm_report* report);

/* JSON array describing every catalog fixture and its parameters. */
GM_API gm_status gm_list_fixtures_json(char** out);

/* fixture_json is a config "fixture" object, e.g. {"name":"clifford"}. */
GM_API gm_status gm_fixture_create(const char* fixture_json, gm_fixture** out);
GM_API void gm_fixture_free(gm_fixture* fixture);
GM_API int gm_fixture_m(const gm_fixture* fixture);
GM_API int gm_fixture_n(const gm_fixture* fixture);
/* Dimension of the unit normal bundle chart, n - 1. */
GM_API int gm_fixture_dim(const gm_fixture* fixture);
/* x has gm_fixture_dim entries; p and v receive n + 1 entries each. */
GM_API gm_status gm_fixture_mu(const gm_fixture* fixture, const double* x, double* p, double* v);
/* plucker receives (n + 1) n / 2 entries. */
GM_API gm_status gm_fixture_gamma(const gm_fixture* fixture, const double* x, double* plucker);
/* Mean curvature of gamma from the component formulas and from the tension
 * oracle, (n + 1) n / 2 entries each; either pointer may be NULL. */
GM_API gm_status gm_fixture_mean_curvature(const gm_fixture* fixture, const double* x, double* formula,
                                           double* oracle);

#ifdef __cplusplus
}
#endif

#endif
