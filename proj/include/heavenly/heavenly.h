#ifndef HEAVENLY_H
#define HEAVENLY_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define HV_API __declspec(dllexport)
#else
#define HV_API __attribute__((visibility("default")))
#endif

typedef enum hv_error {
  HV_OK = 0,
  HV_E_INTERNAL = 1,
  HV_E_INVALID_ARGUMENT = 2,
  HV_E_UNKNOWN_ID = 3,
  HV_E_UNKNOWN_SOLUTION = 4,
  HV_E_MISSING_JET = 5,
  HV_E_SAMPLE_AT_POLE = 6,
  HV_E_NUMERIC_ABORT = 7
} hv_error;

typedef enum hv_status { HV_PASS = 0, HV_FAIL = 1, HV_CONDITIONAL = 2, HV_INFO = 3 } hv_status;

typedef struct hv_spec hv_spec;
typedef struct hv_result hv_result;

typedef struct hv_grid {
  int nx;
  int ny;
  double dt;
  double cfl;
} hv_grid;

HV_API const char* hv_version(void);

/* Message of the last failed call on this thread; empty after success. */
HV_API const char* hv_last_error(void);
/* Step index of the last HV_E_NUMERIC_ABORT on this thread, or -1. */
HV_API int hv_last_abort_step(void);

/* Strings returned through char** are owned by the caller. */
HV_API void hv_string_free(char* s);

HV_API hv_error hv_catalog_list_json(char** out);
HV_API hv_error hv_catalog_json(char** out);
/* empty JSON array when every entry is sound */
HV_API hv_error hv_catalog_validate_json(char** out);

/* k <= 0 opens the base entry; k >= 1 instantiates the family `id`. */
HV_API hv_error hv_spec_open(const char* id, int k, hv_spec** out);
HV_API void hv_spec_close(hv_spec* spec);
HV_API const char* hv_spec_id(const hv_spec* spec);
HV_API int hv_spec_casimir_count(const hv_spec* spec);
HV_API int hv_spec_variant_count(const hv_spec* spec);
HV_API const char* hv_spec_variant_label(const hv_spec* spec, int i);
HV_API hv_error hv_spec_json(const hv_spec* spec, char** out);
/* PDE and the two ψ equations */
HV_API hv_error hv_spec_describe(const hv_spec* spec, char** out);

/* variant may be NULL for the main entry */
HV_API hv_error hv_verify_lax(const hv_spec* spec, const char* variant, hv_result** out);
/* index is 1-based */
HV_API hv_error hv_verify_casimir(const hv_spec* spec, int index, int extra_orders, hv_result** out);
HV_API hv_error hv_verify_exactness(const hv_spec* spec, hv_result** out);

/* mms residual, numeric Lax check and, for exact solutions, the flow check.
   flow_h <= 0 skips the flow check. */
HV_API hv_error hv_check_numeric(const hv_spec* spec, const char* solution, int samples, uint64_t seed, double flow_h,
                                 hv_result** out);

HV_API hv_grid hv_grid_default(void);
HV_API hv_error hv_simulate_dkp(hv_grid grid, const char* init, double tmax, int record_every, hv_result** out);
HV_API hv_error hv_dkp_richardson(hv_grid grid, const char* init, double tmax, double* ratio);

HV_API hv_status hv_result_status(const hv_result* r);
/* borrowed; valid until hv_result_free */
HV_API const char* hv_result_json(const hv_result* r);
HV_API const char* hv_result_text(const hv_result* r);
/* simulation diagnostics; empty for other results */
HV_API const char* hv_result_csv(const hv_result* r);
HV_API void hv_result_free(hv_result* r);

#ifdef __cplusplus
}
#endif

#endif
