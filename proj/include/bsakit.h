#ifndef BSAKIT_H
#define BSAKIT_H

/* C interface to the bsakit library. Every call returns a bsakit_status;
 * on failure bsakit_last_error() describes the problem (thread-local).
 * Strings returned through char** are owned by the caller and released with
 * bsakit_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define BSAKIT_API __declspec(dllexport)
#else
#define BSAKIT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as CLI exit codes. */
typedef enum {
  BSAKIT_OK = 0,
  BSAKIT_ERR_PARSE = 2,
  BSAKIT_ERR_VALIDATION = 3,
  BSAKIT_ERR_NOT_ENTANGLED = 4,
  BSAKIT_ERR_CERTIFICATE = 5,
  BSAKIT_ERR_BAD_MAP = 6,
  BSAKIT_ERR_NUMERIC = 7,
  BSAKIT_ERR_ARGUMENT = 8
} bsakit_status;

typedef struct {
  double herm;
  double psd;
  double eig;
  double rank;
  double cert;
} bsakit_tolerances;

typedef struct bsakit_state bsakit_state;
typedef struct bsakit_map bsakit_map;
typedef struct bsakit_decomposition bsakit_decomposition;

BSAKIT_API const char* bsakit_last_error(void);
BSAKIT_API void bsakit_string_free(char* s);

/* Defaults multiplied by scale. */
BSAKIT_API bsakit_status bsakit_tolerances_scaled(double scale, bsakit_tolerances* out);
/* Defaults multiplied by BSAKIT_TOLERANCE_SCALE when set (must be a positive number). */
BSAKIT_API bsakit_status bsakit_tolerances_from_env(bsakit_tolerances* out);

/* tol may be NULL for defaults in every call below. */
BSAKIT_API bsakit_status bsakit_state_from_json(const char* json, const bsakit_tolerances* tol, bsakit_state** out);
BSAKIT_API bsakit_status bsakit_state_from_bell_diagonal(const double p[4], bsakit_state** out);
BSAKIT_API void bsakit_state_free(bsakit_state* s);
BSAKIT_API bsakit_status bsakit_state_to_json(const bsakit_state* s, char** json);
/* Bell-basis weights; *exact is 0 when the state has off-diagonal Bell coherences. */
BSAKIT_API bsakit_status bsakit_state_bell_weights(const bsakit_state* s, double p[4], int* exact);
BSAKIT_API bsakit_status bsakit_state_label(const bsakit_state* s, char** label);

BSAKIT_API bsakit_status bsakit_concurrence(const bsakit_state* s, const bsakit_tolerances* tol, double lambdas[4],
                                            double* concurrence, double* eof_bits);
BSAKIT_API bsakit_status bsakit_separable(const bsakit_state* s, const bsakit_tolerances* tol, int* separable,
                                          double* min_pt_eigenvalue);

/* Requires a Bell-diagonal state; BSAKIT_ERR_NOT_ENTANGLED when max p <= 1/2. */
BSAKIT_API bsakit_status bsakit_lsd_decompose(const bsakit_state* s, bsakit_decomposition** out);
BSAKIT_API void bsakit_decomposition_free(bsakit_decomposition* d);
BSAKIT_API bsakit_status bsakit_decomposition_lambda(const bsakit_decomposition* d, double* lambda);
BSAKIT_API bsakit_status bsakit_decomposition_to_json(const bsakit_decomposition* d, char** json);
/* Certificate as JSON; *passed mirrors its verdict. */
BSAKIT_API bsakit_status bsakit_decomposition_verify(const bsakit_decomposition* d, const bsakit_tolerances* tol,
                                                     int* passed, char** certificate_json);

/* Validation failures of the map report BSAKIT_ERR_BAD_MAP. */
BSAKIT_API bsakit_status bsakit_map_from_json(const char* json, bsakit_map** out);
BSAKIT_API void bsakit_map_free(bsakit_map* m);

BSAKIT_API bsakit_status bsakit_lqcc_apply(const bsakit_map* m, const bsakit_state* s, const bsakit_tolerances* tol,
                                           bsakit_state** out, double* success_prob);
BSAKIT_API bsakit_status bsakit_lqcc_check_law(const bsakit_map* m, const bsakit_state* s,
                                               const bsakit_tolerances* tol, double* predicted, double* actual);
BSAKIT_API bsakit_status bsakit_lqcc_transport(const bsakit_map* m, const bsakit_decomposition* d,
                                               const bsakit_tolerances* tol, bsakit_decomposition** out);
/* Certificate of the transported decomposition of source d. */
BSAKIT_API bsakit_status bsakit_lqcc_verify_transported(const bsakit_map* m, const bsakit_decomposition* d,
                                                        const bsakit_tolerances* tol, int* passed,
                                                        int* pass_asserted, char** certificate_json);

BSAKIT_API bsakit_status bsakit_oracle_search(const bsakit_state* s, long budget, int restarts, uint64_t seed,
                                              const bsakit_tolerances* tol, double* best_lambda, char** result_json);

/* Re-serializes a JSON document with every floating-point number written to
 * 17 significant digits; indent < 0 gives compact output. */
BSAKIT_API bsakit_status bsakit_format_json(const char* json, int indent, char** out);

/* count Bell-diagonal samples, 4 doubles each, drawn in order from one seeded stream. */
BSAKIT_API bsakit_status bsakit_random_bd(uint64_t seed, size_t count, int entangled_only, double* out);

#ifdef __cplusplus
}
#endif

#endif
