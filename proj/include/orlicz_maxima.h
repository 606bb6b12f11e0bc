/*
 * orlicz_maxima: norms generated by random variables and expected maxima of
 * weighted products, behind a plain C interface.
 *
 * All functions return an om_status; results come back through out
 * parameters. Objects are opaque handles created by om_*_create-style
 * functions and released with the matching om_*_free. A human-readable
 * message for the most recent failure on the calling thread is available
 * from om_last_error_message().
 *
 * Coefficient matrices are passed row-major with n rows and m columns. Rows
 * carry the inner index i (the first law of a product estimate), columns the
 * outer index j (the second law).
 */

#ifndef ORLICZ_MAXIMA_H
#define ORLICZ_MAXIMA_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define OM_API __declspec(dllexport)
#else
#define OM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define OM_VERSION_STRING "0.1.0"

typedef enum om_status {
  OM_OK = 0,
  OM_ERR_INVALID_ARGUMENT = 1, /* null pointer, malformed value */
  OM_ERR_DOMAIN = 2,           /* parameter outside the documented domain */
  OM_ERR_UNSUPPORTED = 3,      /* operation undefined for this object */
  OM_ERR_ACCURACY = 4,         /* quadrature missed the requested tolerance */
  OM_ERR_BRACKET = 5,          /* root bracketing failed */
  OM_ERR_DIVERGENCE = 6,       /* semi-infinite integral shows no decay */
  OM_ERR_IO = 7,               /* file could not be written */
  OM_ERR_INTERNAL = 8
} om_status;

OM_API const char* om_version(void);
OM_API const char* om_status_name(om_status status);
/* Message for the last failing call on this thread; empty string if none. */
OM_API const char* om_last_error_message(void);

/* ------------------------------------------------------------------ */
/* Distributions                                                      */
/* ------------------------------------------------------------------ */

typedef struct om_dist om_dist;

/* log-gamma(1,p): density p x^-(p+1) on [1, inf), tail y^-p; requires p > 1. */
OM_API om_status om_dist_create_loggamma(double p, om_dist** out);
OM_API om_status om_dist_create_gaussian(om_dist** out);
/* Symmetric p-stable with characteristic function exp(-|t|^p), p in (1,2). */
OM_API om_status om_dist_create_stable(double p, om_dist** out);
OM_API void om_dist_free(om_dist* dist);

/* P(|xi| >= y). *exact is 1 when the tail is exact, 0 when it is the
 * empirical tail of the stable calibration sample. */
OM_API om_status om_dist_tail(const om_dist* dist, double y, double* value, int* exact);
OM_API om_status om_dist_density(const om_dist* dist, double x, double* value);
/* E|xi| and the uncertainty of its estimate (0 for the closed forms). */
OM_API om_status om_dist_mean_abs(const om_dist* dist, double* value, double* spread);
/* count iid draws, bit-exact for equal (seed, stream_id). */
OM_API om_status om_dist_sample(const om_dist* dist, uint64_t seed, uint64_t stream_id,
                                size_t count, double* out);

/* ------------------------------------------------------------------ */
/* Orlicz functions and norms                                         */
/* ------------------------------------------------------------------ */

typedef struct om_orlicz om_orlicz;

OM_API om_status om_orlicz_create_gaussian(om_orlicz** out);
OM_API om_status om_orlicz_create_loggamma(double p, om_orlicz** out);
OM_API om_status om_orlicz_create_power(double p, om_orlicz** out);
/* Tail-integral function of the model; needs an exact tail. */
OM_API om_status om_orlicz_create_from_tail(const om_dist* dist, om_orlicz** out);
/* The function of the law raised to the given power. */
OM_API om_status om_orlicz_create_power_composed(const om_orlicz* base, double power,
                                                 om_orlicz** out);
OM_API void om_orlicz_free(om_orlicz* m);

/* Exact evaluation M(s) (fresh quadrature for tail-backed functions). */
OM_API om_status om_orlicz_eval(const om_orlicz* m, double s, double* value);

/* Luxemburg norm inf{t > 0 : sum M(|x_i|/t) <= 1}. */
OM_API om_status om_luxemburg_norm(const om_orlicz* m, const double* x, size_t n,
                                   double* value);
OM_API om_status om_lp_norm(const double* x, size_t n, double p, double* value);
/* Outer l_p over columns of inner l_q norms over rows. */
OM_API om_status om_mixed_norm_lq(const double* a, size_t n, size_t m, double outer_p,
                                  double inner_q, double* value);
OM_API om_status om_mixed_norm_orlicz(const double* a, size_t n, size_t m, double outer_p,
                                      const om_orlicz* inner, double* value);

/* ------------------------------------------------------------------ */
/* Monte Carlo estimates                                              */
/* ------------------------------------------------------------------ */

typedef struct om_mc_config {
  uint64_t samples;    /* per replicate, >= 100 */
  uint32_t replicates; /* odd, >= 1 */
  uint64_t master_seed;
  uint32_t workers; /* 0 = hardware concurrency */
} om_mc_config;

OM_API om_mc_config om_mc_config_default(void);

typedef struct om_estimate {
  double value;
  double spread; /* half-width of the inter-replicate interquartile range */
  uint64_t samples_total;
  int median_of_means; /* 1 when aggregated as median-of-means */
} om_estimate;

/* E max_i |a_i xi_i| over n coefficients. */
OM_API om_status om_expected_max_single(const om_dist* dist, const double* a, size_t n,
                                        const om_mc_config* cfg, om_estimate* out);
/* E E max_{i,j} |a_ij xi_i eta_j|; dist1 drives rows, dist2 columns. */
OM_API om_status om_expected_max_product(const om_dist* dist1, const om_dist* dist2,
                                         const double* a, size_t n, size_t m,
                                         const om_mc_config* cfg, om_estimate* out);

/* ------------------------------------------------------------------ */
/* Ratio studies                                                      */
/* ------------------------------------------------------------------ */

typedef struct om_study om_study;

typedef struct om_study_row {
  const char* config; /* owned by the study */
  size_t n, m;
  double p, q; /* NaN when not applicable */
  double mc_value, mc_spread, norm_value, ratio;
} om_study_row;

typedef struct om_study_summary {
  double ratio_min, ratio_max, ratio_spread, threshold;
  int pass;
} om_study_summary;

/* E max_i |a_i xi_i| vs the Luxemburg norm over dimensions ns, trials_per_n
 * trials and three stressed coefficient families per trial. The model and M
 * must be a generating pair. */
OM_API om_status om_study_thm1(const om_dist* dist, const om_orlicz* m, const size_t* ns,
                               size_t ns_count, uint32_t trials_per_n, const om_mc_config* cfg,
                               om_study** out);
/* log-gamma(1,2) against the plain l_2 norm. */
OM_API om_status om_study_corollary(const size_t* ns, size_t ns_count, uint32_t trials_per_n,
                                    const om_mc_config* cfg, om_study** out);

typedef enum om_product_theorem {
  OM_THEOREM_T2 = 2, /* q-stable rows, p-stable columns, l_p(l_q); 1 < p < q < 2 */
  OM_THEOREM_T3 = 3, /* Gaussian rows, p-stable columns, l_p(Gaussian-Orlicz) */
  OM_THEOREM_T5 = 5, /* log-gamma(1,2) rows, p-stable columns, l_p(l_2) */
  OM_THEOREM_T6 = 6  /* Gaussian rows, log-gamma(1,2) columns, l_2(Gaussian-Orlicz) */
} om_product_theorem;

/* shapes points at shape_count (n, m) pairs, flattened. q is ignored except
 * by T2; p is ignored by T6. */
OM_API om_status om_study_product(om_product_theorem theorem, double p, double q,
                                  const size_t* shapes, size_t shape_count, uint32_t trials,
                                  const om_mc_config* cfg, om_study** out);

/* Unit-weight Gaussian maxima against sqrt(n) (main study: the ratio must
 * decrease and at least halve) plus the Gaussian-Orlicz control study. */
OM_API om_status om_study_gauss_not_l2(const size_t* ns, size_t ns_count,
                                       const om_mc_config* cfg, om_study** main_out,
                                       om_study** control_out);

typedef enum om_function_equiv_kind {
  OM_FUNC_EQUIV_T2 = 0, /* power-law tail integral vs s^(q/p), bound 3 on (0,1] */
  OM_FUNC_EQUIV_T3 = 1  /* powered Gaussian integral at s^p vs plain at s */
} om_function_equiv_kind;

/* q is ignored for OM_FUNC_EQUIV_T3. */
OM_API om_status om_study_function_equiv(om_function_equiv_kind kind, double p, double q,
                                         const double* s_grid, size_t s_count, om_study** out);

OM_API void om_study_free(om_study* study);
OM_API om_status om_study_theorem_name(const om_study* study, const char** name);
OM_API om_status om_study_row_count(const om_study* study, size_t* count);
OM_API om_status om_study_get_row(const om_study* study, size_t index, om_study_row* out);
OM_API om_status om_study_get_summary(const om_study* study, om_study_summary* out);
/* CSV: header theorem_id,config,n,m,p,q,mc_value,mc_spread,norm_value,ratio;
 * JSON: the same rows plus a summary block. Numbers carry 17 significant
 * digits. */
OM_API om_status om_study_write_csv(const om_study* study, const char* path);
OM_API om_status om_study_write_json(const om_study* study, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* ORLICZ_MAXIMA_H */
