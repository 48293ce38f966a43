#ifndef MUSTAFIN_H
#define MUSTAFIN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MustafinStatus {
  MUSTAFIN_STATUS_OK = 0,
  MUSTAFIN_STATUS_NULL_POINTER = 1,
  MUSTAFIN_STATUS_INVALID_UTF8 = 2,
  MUSTAFIN_STATUS_INVALID_INPUT = 3,
  MUSTAFIN_STATUS_PARSE = 4,
  MUSTAFIN_STATUS_COMPUTATION = 5,
  MUSTAFIN_STATUS_PANIC = 6,
} MustafinStatus;

// A plane curve over a prime field.
typedef struct MustafinCurve MustafinCurve;

// Result of a run, with its JSON text.
typedef struct MustafinReport MustafinReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread; empty if none. Valid until the next call.
const char *mustafin_last_error(void);

// Library version as a static string.
const char *mustafin_version(void);

// Validates and runs a JSON run configuration. On success `*out` owns a report that must
// be released with [`mustafin_report_free`].
//
// # Safety
// `config_json` must be a NUL-terminated string and `out` a valid pointer.
enum MustafinStatus mustafin_run_json(const char *config_json, struct MustafinReport **out);

// Overall verdict of a report.
//
// # Safety
// `report` must come from [`mustafin_run_json`]; `out` must be valid.
enum MustafinStatus mustafin_report_verdict(const struct MustafinReport *report, bool *out);

// JSON text of a report, owned by the report.
//
// # Safety
// `report` must come from [`mustafin_run_json`] and not be freed.
const char *mustafin_report_json(const struct MustafinReport *report);

// # Safety
// `report` must come from [`mustafin_run_json`] or be null.
void mustafin_report_free(struct MustafinReport *report);

// Parses a curve in `u1, u2, u3` (and `t`) over `GF(prime)`.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum MustafinStatus mustafin_curve_parse(uint32_t prime,
                                         const char *text,
                                         struct MustafinCurve **out);

// Degree of a curve.
//
// # Safety
// `curve` must come from [`mustafin_curve_parse`]; `out` must be valid.
enum MustafinStatus mustafin_curve_degree(const struct MustafinCurve *curve, uint32_t *out);

// Number of star-like trials among `trials` seeded random configurations of `n_plus_1`
// lattices.
//
// # Safety
// `curve` must come from [`mustafin_curve_parse`]; `successes` must be valid.
enum MustafinStatus mustafin_curve_star_like(const struct MustafinCurve *curve,
                                             size_t n_plus_1,
                                             size_t trials,
                                             uint64_t seed,
                                             size_t *successes);

// # Safety
// `curve` must come from [`mustafin_curve_parse`] or be null.
void mustafin_curve_free(struct MustafinCurve *curve);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MUSTAFIN_H */
