/* teflow — directed information-transfer estimation for time series.
 *
 * C API over the C++ core: opaque handles, status codes, thread-local error
 * text. Every function that can fail returns te_status; on failure the
 * output params are untouched and te_last_error() describes what happened.
 * All handles are immutable after creation and safe to share across threads;
 * free them exactly once with te_dataset_free.
 */
#ifndef TEFLOW_TEFLOW_H
#define TEFLOW_TEFLOW_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
  #if defined(TEFLOW_BUILD)
    #define TEFLOW_API __declspec(dllexport)
  #else
    #define TEFLOW_API __declspec(dllimport)
  #endif
#else
  #define TEFLOW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum te_status {
    TE_OK = 0,
    TE_ERROR_INVALID_ARGUMENT = 1,
    TE_ERROR_IO = 2,
    TE_ERROR_INSUFFICIENT_DATA = 3,
    TE_ERROR_NUMERIC = 4,
    TE_ERROR_UNKNOWN = 5
} te_status;

/* Message for the most recent failure on this thread; never NULL. */
TEFLOW_API const char* te_last_error(void);
TEFLOW_API const char* te_version(void);

/* ---- datasets ---------------------------------------------------------- */

typedef struct te_dataset te_dataset;

/* Column-major construction: columns[c][0..length-1] for channel names[c]. */
TEFLOW_API te_status te_dataset_create(const char* const* names,
                                       const double* const* columns,
                                       size_t n_channels, size_t length,
                                       te_dataset** out);

/* CSV with a header row; pass '\0' as delimiter for the default comma. */
TEFLOW_API te_status te_dataset_load_csv(const char* path, char delimiter,
                                         te_dataset** out);
TEFLOW_API te_status te_dataset_save_csv(const te_dataset* dataset,
                                         const char* path, char delimiter);
TEFLOW_API void te_dataset_free(te_dataset* dataset);

TEFLOW_API size_t te_dataset_channel_count(const te_dataset* dataset);
TEFLOW_API size_t te_dataset_length(const te_dataset* dataset);
/* Both return NULL on an out-of-range index; pointers live as long as the
 * dataset does. */
TEFLOW_API const char* te_dataset_channel_name(const te_dataset* dataset,
                                               size_t index);
TEFLOW_API const double* te_dataset_channel_values(const te_dataset* dataset,
                                                   size_t index);

/* ---- simulators -------------------------------------------------------- */

/* Solo skew tent map; one channel "x". */
TEFLOW_API te_status te_simulate_tent(double a, double x0, size_t n,
                                      size_t transient, te_dataset** out);

/* Coupled pair x' = f(x + eps(y-x)), y' = f(y + mu(x-y)); channels "x","y". */
TEFLOW_API te_status te_simulate_coupled(double a, double eps, double mu,
                                         double x0, double y0, size_t n,
                                         size_t transient, te_dataset** out);

typedef struct te_chua_params {
    double alpha;
    double beta;
    double m0;
    double m1;
    double dt;
    size_t stride;
} te_chua_params;

/* Canonical double-scroll defaults: 9, 100/7, -8/7, -5/7, dt 0.01, stride 1. */
TEFLOW_API void te_chua_params_init(te_chua_params* params);

/* RK4-integrated Chua trajectory; channels "v1","v2","il". */
TEFLOW_API te_status te_simulate_chua(const te_chua_params* params, double x0,
                                      double y0, double z0, size_t n,
                                      size_t transient, te_dataset** out);

/* |last(ch0) - last(ch1)| of a two-channel dataset. */
TEFLOW_API te_status te_sync_error(const te_dataset* dataset, double* out);

/* ---- estimation -------------------------------------------------------- */

typedef enum te_r_mode {
    TE_R_MATCHED = 0, /* r = pi/(sigma*sqrt(3)); logistic std = sigma */
    TE_R_INVERSE = 1, /* r = c/sigma */
    TE_R_FIXED = 2    /* r = c */
} te_r_mode;

typedef struct te_options {
    size_t d;                /* embedding dimension */
    size_t tau;              /* embedding delay, samples */
    size_t k;                /* neighbors (marginal path; local model is NN) */
    int order;               /* local model order, 0 or 1 */
    te_r_mode r_mode;
    double r_coeff;          /* c for inverse/fixed modes */
    size_t exclusion_window; /* Theiler half-width; 0 = self only */
    size_t first_order_m;    /* fit size for order 1; 0 = 2*(d_model+1) */
    int zscore;              /* standardize channels before embedding */
    size_t threads;          /* workers for the pairwise matrix */
} te_options;

/* d=1 tau=1 k=1 order=0 matched r_coeff=1 window=0 m=0 zscore=0 threads=1 */
TEFLOW_API void te_options_init(te_options* options);

typedef struct te_pair_result {
    double te_forward;       /* I_{source->target}, bits/step */
    double te_backward;      /* I_{target->source} */
    double directionality;   /* (fwd-bwd)/(fwd+bwd); NaN when undefined */
    double r_joint_forward;
    double r_self_forward;
    double r_joint_backward;
    double r_self_backward;
    size_t n_samples;
    size_t clamped_forward;  /* log ratios clipped at +/-64 bits */
    size_t clamped_backward;
} te_pair_result;

TEFLOW_API te_status te_estimate_pair(const te_dataset* dataset,
                                      const char* source, const char* target,
                                      const te_options* options,
                                      te_pair_result* out);

/* Per-sample log2 ratios for one direction; writes min(n_samples, capacity)
 * values and the true sample count. */
TEFLOW_API te_status te_estimate_logs(const te_dataset* dataset,
                                      const char* source, const char* target,
                                      const te_options* options, double* logs,
                                      size_t capacity, size_t* n_samples);

/* Fills matrix[i*P+j] = I_{i->j} (zero diagonal) and net[i] = T_i. Both
 * buffers are caller-owned: P*P and P doubles. */
TEFLOW_API te_status te_net_flow(const te_dataset* dataset,
                                 const te_options* options, double* matrix,
                                 double* net);

typedef struct te_surrogate_summary {
    double original;
    double mean;
    double stddev;
    size_t n_surrogates;
} te_surrogate_summary;

/* TE of source->target against time-shifted source surrogates. */
TEFLOW_API te_status te_surrogate_baseline(const te_dataset* dataset,
                                           const char* source,
                                           const char* target,
                                           const te_options* options,
                                           size_t n_surrogates, uint64_t seed,
                                           te_surrogate_summary* out);

/* (i_ab - i_ba)/(i_ab + i_ba); errors on a zero denominator. */
TEFLOW_API te_status te_directionality_index(double i_ab, double i_ba,
                                             double* out);

/* Brute-force binning reference estimator (independent of the local-model
 * path). n_bins in [2, 64]; bins span each series' own min..max. */
TEFLOW_API te_status te_binned_oracle(const double* source,
                                      const double* target, size_t length,
                                      size_t n_bins, double* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* TEFLOW_TEFLOW_H */
