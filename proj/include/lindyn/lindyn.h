/* C interface to liblindyn.
 *
 * Every call returns a lindyn_status; 0 is success. On failure the message of
 * the most recent error on the calling thread is available from
 * lindyn_last_error(). Strings handed out by the library are owned by the
 * caller and released with lindyn_string_free().
 */
#ifndef LINDYN_H
#define LINDYN_H

#include <stdint.h>

#if defined(_WIN32)
#  ifdef LINDYN_BUILDING
#    define LINDYN_API __declspec(dllexport)
#  else
#    define LINDYN_API __declspec(dllimport)
#  endif
#else
#  define LINDYN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef int lindyn_status;

enum {
  LINDYN_OK = 0,
  LINDYN_NON_CONTRACTING = 1,
  LINDYN_NO_CONVERGENCE = 2,
  LINDYN_KIND_MISMATCH = 3,
  LINDYN_NOT_INVERTIBLE = 4,
  LINDYN_CIRCLE_EIGENVALUE = 5,
  LINDYN_INVALID_SPLITTING = 6,
  LINDYN_HYPOTHESIS_FAILED = 7,
  LINDYN_NOT_CERTIFIED = 8,
  LINDYN_BAD_FACTOR = 9,
  LINDYN_CANNOT_SEPARATE = 10,
  LINDYN_NOT_CONTRACTION = 11,
  LINDYN_TRAJECTORY_BUDGET = 12,
  LINDYN_NOT_CONTRACTIVE_SPECTRUM = 13,
  LINDYN_NOT_HOMOCLINIC = 14,
  LINDYN_NOT_A_CHAIN = 15,
  LINDYN_CONFIG_INVALID = 16,
  LINDYN_IO_ERROR = 17,
  LINDYN_INVALID_ARGUMENT = 18,
  LINDYN_INTERNAL = 19
};

typedef struct lindyn_operator lindyn_operator;

LINDYN_API const char* lindyn_version(void);
LINDYN_API const char* lindyn_error_name(lindyn_status code);
/* Thread-local; empty string when the last call succeeded. */
LINDYN_API const char* lindyn_last_error(void);
LINDYN_API void lindyn_string_free(char* s);

/* Operator description in the scenario JSON grammar. */
LINDYN_API lindyn_status lindyn_operator_from_json(const char* json, lindyn_operator** out);
LINDYN_API void lindyn_operator_free(lindyn_operator* op);
LINDYN_API lindyn_status lindyn_operator_norm(const lindyn_operator* op, double* out);
LINDYN_API lindyn_status lindyn_operator_spectral_radius(const lindyn_operator* op, double* out);

/* splitting_json may be NULL for dense operators (spectral splitting). */
LINDYN_API lindyn_status lindyn_classify_json(const lindyn_operator* op, const char* splitting_json, char** out_json);
LINDYN_API lindyn_status lindyn_shad_bounds(const lindyn_operator* op, const char* splitting_json, double* lower,
                                            double* upper);

/* failed_tasks may be NULL. A scenario with failed tasks still returns LINDYN_OK. */
LINDYN_API lindyn_status lindyn_run_scenario(const char* scenario_json, char** out_report, int* failed_tasks);
LINDYN_API lindyn_status lindyn_run_scenario_file(const char* path, char** out_report, int* failed_tasks);
LINDYN_API lindyn_status lindyn_run_suite(uint64_t seed, int size, char** out_json, int* all_pass);
/* JSON array of {"name","description"}. */
LINDYN_API lindyn_status lindyn_list_examples(char** out_json);

#ifdef __cplusplus
}
#endif

#endif
