#ifndef KLOOSTLAB_KLOOSTLAB_H
#define KLOOSTLAB_KLOOSTLAB_H

/*
 * C interface to kloostlab: Kloosterman sums, the divisor function in
 * arithmetic progressions, van der Corput lemma checks, bound expressions and
 * window factorizations, sweeps and lemma suites.
 *
 * Every fallible call returns a kl_status. On failure the message is
 * available from kl_last_error() on the same thread until the next call.
 * Strings returned through char** are owned by the caller and released with
 * kl_free_string; handles are released with their matching *_free.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define KL_API __declspec(dllexport)
#else
#define KL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kl_status {
  KL_OK = 0,
  KL_ERR_DOMAIN = 1,
  KL_ERR_NOT_INVERTIBLE = 2,
  KL_ERR_NOT_COPRIME = 3,
  KL_ERR_NOT_SQUAREFREE = 4,
  KL_ERR_INFEASIBLE = 5,
  KL_ERR_PARSE = 6,
  KL_ERR_IO = 7,
  KL_ERR_NULL_ARGUMENT = 8,
  KL_ERR_INTERNAL = 9
} kl_status;

typedef struct kl_sum {
  double re;
  double im;
  double err; /* absolute rounding-error bound */
} kl_sum;

/* [offset, offset + length) */
typedef struct kl_interval {
  int64_t offset;
  uint64_t length;
} kl_interval;

typedef struct kl_factored kl_factored;
typedef struct kl_bound_report kl_bound_report;
typedef struct kl_sweep_config kl_sweep_config;
typedef struct kl_sweep_result kl_sweep_result;
typedef struct kl_lemma_report kl_lemma_report;

KL_API const char* kl_version(void);
KL_API const char* kl_status_name(kl_status status);
KL_API const char* kl_last_error(void);
KL_API void kl_free_string(char* s);
KL_API void kl_free_u64_array(uint64_t* values);

/* Arithmetic */
KL_API kl_status kl_inv_mod(int64_t a, uint64_t q, uint64_t* out);
KL_API kl_status kl_crt_pair(int64_t r1, uint64_t q1, int64_t r2, uint64_t q2, uint64_t* out);
KL_API kl_status kl_factorize(uint64_t n, kl_factored** out);
KL_API void kl_factored_free(kl_factored* f);
KL_API uint64_t kl_factored_value(const kl_factored* f);
KL_API size_t kl_factored_count(const kl_factored* f);
KL_API kl_status kl_factored_get(const kl_factored* f, size_t i, uint64_t* prime,
                                 unsigned* exponent);
KL_API int kl_factored_squarefree(const kl_factored* f);
KL_API kl_status kl_multiplicative_profile(uint64_t n, unsigned l, int* mu, uint64_t* phi,
                                           uint64_t* tau_l);
KL_API double kl_nearest_int_distance(double x);
/* Squarefree n in [lo, hi] with every prime factor <= bound; release with
 * kl_free_u64_array. */
KL_API kl_status kl_smooth_squarefree_moduli(uint64_t lo, uint64_t hi, uint64_t bound,
                                             uint64_t** values, size_t* count);

/* Kloosterman sums */
KL_API kl_status kl_complete_kloosterman(int64_t a, int64_t b, uint64_t q, int direct,
                                         kl_sum* out);
KL_API kl_status kl_kloosterman_crt(int64_t a, int64_t b, uint64_t q0, uint64_t q1, kl_sum* out);
KL_API kl_status kl_incomplete_kloosterman(int64_t a, uint64_t q, kl_interval interval,
                                           kl_sum* out);
KL_API kl_status kl_normalized_kl(int64_t a, uint64_t p, double* out);

/* Divisor function in progressions; method 0 = hyperbola, 1 = sieve.
 * Rationals come back as "num/den" or "num". */
KL_API kl_status kl_divisor_sum_ap(uint64_t x, uint64_t q, int64_t a, int method, uint64_t* out);
KL_API kl_status kl_divisor_main_term(uint64_t x, uint64_t q, char** exact, double* value);
KL_API kl_status kl_error_term(uint64_t x, uint64_t q, int64_t a, int method, char** exact,
                               double* value);

/* Completion and differencing */
KL_API kl_status kl_interval_fourier(kl_interval interval, uint64_t q, int64_t k, kl_sum* out);
KL_API kl_status kl_completion_check(int64_t a, uint64_t q, kl_interval interval, kl_sum* direct,
                                     kl_sum* completed, double* deviation, double* tolerance);
KL_API kl_status kl_partial_sum_max(int64_t a, uint64_t q, int64_t m, uint64_t k, uint64_t r,
                                    double* out);
/* sum_{k mod q} e_q(-kb) prod_i S(a, k + s_i; q) for squarefree q. */
KL_API kl_status kl_shifted_product_sum(int64_t a, const int64_t* shifts, size_t count, int64_t b,
                                        uint64_t q, kl_sum* out);
KL_API kl_status kl_t_eval(int64_t a_prime, const uint64_t* parts, size_t part_count,
                           const int64_t* h, kl_interval interval, kl_sum* out);
KL_API kl_status kl_vanishing_lemma_check(uint64_t p, unsigned l, uint64_t* counterexamples);
KL_API kl_status kl_onediff_ratio(int64_t a, uint64_t q0, uint64_t q1, int64_t m,
                                  kl_interval interval, const int64_t* shifts, size_t count,
                                  double* lhs, double* rhs_core, double* ratio);

/* Bounds and factorizations */
KL_API kl_status kl_shortkloost_rhs(uint64_t n, const uint64_t* parts, size_t part_count,
                                    double eps, double computed, kl_bound_report** out);
KL_API kl_status kl_divisorthm_rhs(uint64_t x, const uint64_t parts[4], double delta, double eps,
                                   double computed, kl_bound_report** out);
KL_API void kl_bound_report_free(kl_bound_report* r);
KL_API size_t kl_bound_term_count(const kl_bound_report* r);
KL_API kl_status kl_bound_term(const kl_bound_report* r, size_t i, const char** name, double* raw,
                               double* weight, double* value);
KL_API double kl_bound_total(const kl_bound_report* r);
KL_API double kl_bound_total_eps0(const kl_bound_report* r);
KL_API double kl_bound_ratio(const kl_bound_report* r);
KL_API double kl_bound_ratio_eps0(const kl_bound_report* r);
KL_API kl_status kl_target_sizes(uint64_t x, uint64_t q, double out[4]);
KL_API kl_status kl_admissible(double varpi, double eta, int* out);
KL_API kl_status kl_target_windows(uint64_t x, uint64_t q, double eta, double lo[4],
                                   double hi[4]);
/* *feasible is 0 and parts untouched when no assignment fits. */
KL_API kl_status kl_factorize_to_windows(uint64_t q, const double lo[4], const double hi[4],
                                         uint64_t parts[4], int* feasible);
KL_API kl_status kl_exponent_fit(const double* scales, const double* values, size_t count,
                                 double* slope, double* intercept, double* residual);

/* Sweeps */
KL_API kl_status kl_sweep_config_from_json(const char* json, kl_sweep_config** out);
KL_API kl_status kl_sweep_config_to_json(const kl_sweep_config* c, char** out);
KL_API void kl_sweep_config_free(kl_sweep_config* c);
KL_API kl_status kl_sweep_run(const kl_sweep_config* c, kl_sweep_result** out);
KL_API void kl_sweep_result_free(kl_sweep_result* r);
/* The report in the configured format (CSV or JSON). */
KL_API kl_status kl_sweep_render(const kl_sweep_result* r, char** out);
KL_API kl_status kl_sweep_summary_line(const kl_sweep_result* r, char** out);
KL_API size_t kl_sweep_row_count(const kl_sweep_result* r);

typedef struct kl_sweep_row_info {
  uint64_t x;
  uint64_t q;
  uint64_t a;
  int has_e;
  double abs_e;
  double qe_over_x;
  int has_split;
  uint64_t split[4];
  int has_ratio;
  double ratio;
} kl_sweep_row_info;

KL_API kl_status kl_sweep_row(const kl_sweep_result* r, size_t i, kl_sweep_row_info* out);
KL_API kl_status kl_sweep_fit(const kl_sweep_result* r, int* has_fit, double* slope,
                              double* residual);
KL_API kl_status kl_verify_report(const char* text, uint64_t seed, uint64_t* rows,
                                  uint64_t* checked, uint64_t* mismatches, char** first_mismatch);

/* Lemma suites: "weil", "completion", "vanishing", "product-sums", "onediff". */
KL_API kl_status kl_lemma_suite_run(const char* suite, int full, unsigned jobs,
                                    kl_lemma_report** out);
KL_API void kl_lemma_report_free(kl_lemma_report* r);
KL_API int kl_lemma_report_passed(const kl_lemma_report* r);
KL_API kl_status kl_lemma_report_render(const kl_lemma_report* r, char** out);

#ifdef __cplusplus
}
#endif

#endif
