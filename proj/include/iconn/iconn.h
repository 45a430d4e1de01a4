/*
 * iconn C API.
 *
 * Opaque handles over the C++ core. Every fallible call returns an
 * iconn_status; on failure the thread-local iconn_last_error_tag() and
 * iconn_last_error_message() describe what went wrong. Status values double
 * as CLI exit codes.
 *
 * Matrices are row-major. Channel indices are zero-based; measure value
 * (i, j) is the influence of source j on target i.
 */
#ifndef ICONN_H
#define ICONN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(ICONN_BUILDING_LIBRARY)
#    define ICONN_API __declspec(dllexport)
#  else
#    define ICONN_API __declspec(dllimport)
#  endif
#else
#  define ICONN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum iconn_status {
    ICONN_OK = 0,
    ICONN_ERR_INTERNAL = 1,  /* unexpected exception */
    ICONN_ERR_INPUT = 2,     /* parse, config, structure, domain or I/O error */
    ICONN_ERR_NUMERIC = 3,   /* numerical failure, unstable model, failed fit */
    ICONN_ERR_VERIFY = 4     /* an identity check exceeded its bound */
} iconn_status;

typedef enum iconn_layout {
    ICONN_ROWS_ARE_SAMPLES = 0,
    ICONN_ROWS_ARE_CHANNELS = 1
} iconn_layout;

typedef enum iconn_criterion { ICONN_AIC = 0, ICONN_BIC = 1 } iconn_criterion;

typedef enum iconn_measure_kind {
    ICONN_COH = 0,
    ICONN_PDC = 1,
    ICONN_GPDC = 2,
    ICONN_IPDC = 3,
    ICONN_DTF = 4,
    ICONN_DC = 5,
    ICONN_IDTF = 6
} iconn_measure_kind;

typedef enum iconn_mir_kind {
    ICONN_MIR_IPDC = 0, /* MIR(w_i, eta_j) */
    ICONN_MIR_IDTF = 1, /* MIR(x_i, zeta_j) */
    ICONN_MIR_COH = 2   /* MIR(x_i, x_j) */
} iconn_mir_kind;

typedef struct iconn_model iconn_model;
typedef struct iconn_series iconn_series;

typedef struct iconn_validation {
    int stable;
    double spectral_radius;
    int sigma_ok;
} iconn_validation;

typedef struct iconn_pipeline_options {
    size_t n_points;          /* 0 selects the default of 512 */
    const char* measures;     /* e.g. "ipdc,idtf"; NULL or "" for none */
    const char* mir;          /* e.g. "ipdc,idtf,coh"; NULL or "" for none */
    int magnitude_squared;    /* nonzero adds mag2 arrays */
    int bits;                 /* nonzero reports MIR in bits per sample */
    double sample_rate_hz;    /* > 0 adds a Hz axis */
} iconn_pipeline_options;

ICONN_API const char* iconn_version(void);
ICONN_API const char* iconn_last_error_tag(void);
ICONN_API const char* iconn_last_error_message(void);
ICONN_API void iconn_string_free(char* s);

/* ---- models ---- */
ICONN_API iconn_status iconn_model_create(size_t channels, size_t order, const double* coeffs,
                                          const double* sigma, iconn_model** out);
ICONN_API iconn_status iconn_model_fixture(const char* name, double alpha, double beta,
                                           iconn_model** out);
ICONN_API iconn_status iconn_model_load(const char* path, iconn_model** out);
ICONN_API iconn_status iconn_model_from_json(const char* json, iconn_model** out);
ICONN_API iconn_status iconn_model_save(const iconn_model* model, const char* path);
ICONN_API iconn_status iconn_model_to_json(const iconn_model* model, char** json);
ICONN_API size_t iconn_model_channels(const iconn_model* model);
ICONN_API size_t iconn_model_order(const iconn_model* model);
ICONN_API iconn_status iconn_model_validate(const iconn_model* model, iconn_validation* out);
ICONN_API iconn_status iconn_model_rescale(const iconn_model* model, const double* gains,
                                           size_t n_gains, iconn_model** out);
/* Records the sample rate (Hz) in the model metadata. */
ICONN_API iconn_status iconn_model_set_sample_rate(iconn_model* model, double sample_rate_hz);
ICONN_API void iconn_model_free(iconn_model* model);

/* ---- time series ---- */
ICONN_API iconn_status iconn_series_create(size_t n_samples, size_t channels,
                                           const double* values, iconn_series** out);
ICONN_API iconn_status iconn_series_load_csv(const char* path, iconn_layout layout,
                                             iconn_series** out);
ICONN_API iconn_status iconn_series_save_csv(const iconn_series* series, const char* path);
ICONN_API size_t iconn_series_samples(const iconn_series* series);
ICONN_API size_t iconn_series_channels(const iconn_series* series);
ICONN_API iconn_status iconn_series_copy(const iconn_series* series, double* out, size_t len);
ICONN_API void iconn_series_free(iconn_series* series);

/* ---- estimation and simulation ---- */
ICONN_API iconn_status iconn_simulate(const iconn_model* model, size_t n_samples,
                                      size_t burn_in, uint64_t seed, iconn_series** samples,
                                      iconn_series** innovations);
ICONN_API iconn_status iconn_fit(const iconn_series* series, size_t order, iconn_model** out);
ICONN_API iconn_status iconn_select_order(const iconn_series* series, size_t p_max,
                                          iconn_criterion criterion, size_t* order);

/* ---- measures ---- */
/* out receives n_points*K*K complex values as interleaved (re, im) pairs,
   ordered [frequency][i][j]; out_len counts doubles. */
ICONN_API iconn_status iconn_measure(const iconn_model* model, iconn_measure_kind kind,
                                     size_t n_points, double* out, size_t out_len);
/* out receives a K*K matrix in nats per sample; clipped may be NULL. */
ICONN_API iconn_status iconn_mir(const iconn_model* model, iconn_mir_kind kind,
                                 size_t n_points, double* out, size_t out_len,
                                 size_t* clipped);
ICONN_API iconn_status iconn_run_pipeline(const iconn_model* model,
                                          const iconn_pipeline_options* options, char** json);

/* Writes the report to *json even when a check fails; returns ICONN_ERR_VERIFY then. */
ICONN_API iconn_status iconn_verify(uint64_t seed, size_t n_models, size_t n_points,
                                    char** json);

#ifdef __cplusplus
}
#endif

#endif /* ICONN_H */
