/*
 * mcrd - motion-classified rate-distortion analysis for raw video.
 *
 * C interface to the analysis core. All heap objects are opaque handles
 * created and destroyed through this API; every fallible call returns an
 * mcrd_status, with a thread-local description available from
 * mcrd_last_error(). Strings returned through char** out-parameters are
 * heap-allocated and must be released with mcrd_string_free().
 */

#ifndef MCRD_H
#define MCRD_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mcrd_status {
  MCRD_OK = 0,
  MCRD_ERR_IO = 1,                /* file unreadable/unwritable */
  MCRD_ERR_MALFORMED_INPUT = 2,   /* byte counts or JSON do not parse */
  MCRD_ERR_SHAPE = 3,             /* frame/grid dimension mismatch */
  MCRD_ERR_CONFIG = 4,            /* invalid configuration value */
  MCRD_ERR_DOMAIN = 5,            /* argument outside a formula's domain */
  MCRD_ERR_INSUFFICIENT_DATA = 6, /* empty stream or too few frames */
  MCRD_ERR_INVALID_ARGUMENT = 7,  /* null handle or out pointer */
  MCRD_ERR_INTERNAL = 8
} mcrd_status;

const char* mcrd_version(void);
const char* mcrd_status_name(mcrd_status status);

/* Message describing this thread's most recent failure; valid until the next
 * failing call on the same thread. Never NULL. */
const char* mcrd_last_error(void);

typedef struct mcrd_sequence mcrd_sequence;
typedef struct mcrd_analysis mcrd_analysis;
typedef struct mcrd_validation mcrd_validation;

/* Mirrors the params.json schema. */
typedef struct mcrd_model_params {
  double sigma2_a;  /* variance of motion-compensated residuals */
  double sigma2_i;  /* variance of plain frame differences */
  double rho_i;     /* lag-1 correlation of frame differences */
  double lambda_m;  /* fraction of active blocks, in [0,1] */
  int32_t b_m;      /* bits per motion vector */
  int32_t block_w;
  int32_t block_h;
} mcrd_model_params;

typedef struct mcrd_analyze_config {
  int32_t block_w;      /* default 16 */
  int32_t block_h;      /* default 16 */
  double t_g;           /* pixel activity threshold, default 15 */
  int32_t t_p;          /* block activity threshold; < 0 selects block_area/8 */
  int32_t search_range; /* default 15 */
  int32_t mv_bits;      /* <= 0 selects the fixed-length default */
  int32_t fit_bins;     /* default 64 */
} mcrd_analyze_config;

void mcrd_analyze_config_init(mcrd_analyze_config* cfg);

/* ---- sequences ------------------------------------------------------- */

/* Luminance planes of a raw planar 4:2:0 file (even dimensions; file size
 * must be an exact multiple of 1.5 * width * height bytes). */
mcrd_status mcrd_sequence_read_yuv420(const char* path, int32_t width, int32_t height,
                                      mcrd_sequence** out);

/* spec_json: {"kind":"ar1-field"|"moving-rect"|"white-noise"|"constant",
 *             "rho":r, "sigma2":v, "mean":m, "motion":[dx,dy], "seed":s} */
mcrd_status mcrd_sequence_synthesize(const char* spec_json, int32_t width, int32_t height,
                                     int32_t n_frames, mcrd_sequence** out);

mcrd_status mcrd_sequence_write_yuv420(const mcrd_sequence* seq, const char* path);
int32_t mcrd_sequence_frame_count(const mcrd_sequence* seq);
int32_t mcrd_sequence_width(const mcrd_sequence* seq);
int32_t mcrd_sequence_height(const mcrd_sequence* seq);
void mcrd_sequence_free(mcrd_sequence* seq);

/* ---- analysis --------------------------------------------------------- */

/* Classifies blocks, estimates motion for active blocks, extracts residuals
 * for every consecutive frame pair, and pools the statistics
 * (sample-weighted) into one parameter set. cfg == NULL uses defaults. */
mcrd_status mcrd_analyze(const mcrd_sequence* seq, const mcrd_analyze_config* cfg,
                         mcrd_analysis** out);

mcrd_status mcrd_analysis_params(const mcrd_analysis* analysis, mcrd_model_params* out);
mcrd_status mcrd_analysis_params_json(const mcrd_analysis* analysis, char** out);
/* bin_center,empirical_density,gaussian_density; header-only when the
 * sequence had no inactive blocks. */
mcrd_status mcrd_analysis_fit_csv(const mcrd_analysis* analysis, char** out);
mcrd_status mcrd_analysis_per_pair_csv(const mcrd_analysis* analysis, char** out);
mcrd_status mcrd_analysis_diagnostics_json(const mcrd_analysis* analysis, char** out);
int32_t mcrd_analysis_pair_count(const mcrd_analysis* analysis);
/* Per-pair block classification: {"grid":...,"labels":[[0|1,..],..],"lambda_m":...} */
mcrd_status mcrd_analysis_activity_json(const mcrd_analysis* analysis, int32_t pair_index,
                                        char** out);
/* Per-pair motion field: {"grid":...,"search_range":...,"b_m":...,
 * "vectors":[[[dx,dy]|null,...],...]} */
mcrd_status mcrd_analysis_motion_json(const mcrd_analysis* analysis, int32_t pair_index,
                                      char** out);
void mcrd_analysis_free(mcrd_analysis* analysis);

mcrd_status mcrd_params_from_json(const char* json_text, mcrd_model_params* out);
mcrd_status mcrd_params_to_json(const mcrd_model_params* params, char** out);

/* ---- closed-form rates (bits per pixel, base-2 logs, clamped at 0) ---- */

mcrd_status mcrd_rate_active(double sigma2_a, double d_a, double* out);
mcrd_status mcrd_rate_inactive(double sigma2_i, double rho_i, double d_i, double* out);
mcrd_status mcrd_rate_motion(int32_t b_m, int32_t block_w, int32_t block_h, double* out);
mcrd_status mcrd_rate_combined(const mcrd_model_params* params, double d_a, double d_i,
                               int include_mv, double* out);

/* Three theoretical curves (combined, all-active, all-inactive) over n
 * log-spaced distortions in [d_min, d_max];
 * distortion,rate,source,lambda_m,rho_i,sigma2_a,sigma2_i */
mcrd_status mcrd_curves_csv(const mcrd_model_params* params, double d_min, double d_max,
                            int32_t n, int include_mv, char** out);

/* ---- validation ------------------------------------------------------- */

/* Analyzes the sequence, sweeps a uniform quantizer over `steps` (NULL uses
 * a built-in sweep), and checks every empirical point against the
 * theoretical combined rate at its measured distortion minus slack_bits. */
mcrd_status mcrd_validate(const mcrd_sequence* seq, const mcrd_analyze_config* cfg,
                          const double* steps, int32_t n_steps, double d_min, double d_max,
                          int32_t curve_points, double slack_bits, mcrd_validation** out);

int mcrd_validation_passed(const mcrd_validation* validation);
int32_t mcrd_validation_point_count(const mcrd_validation* validation);
mcrd_status mcrd_validation_params(const mcrd_validation* validation, mcrd_model_params* out);
mcrd_status mcrd_validation_params_json(const mcrd_validation* validation, char** out);
/* Theory and empirical rows in one table; empirical rows carry three extra
 * columns step,rate_mv,rate_residual. */
mcrd_status mcrd_validation_csv(const mcrd_validation* validation, char** out);
mcrd_status mcrd_validation_report(const mcrd_validation* validation, char** out);
void mcrd_validation_free(mcrd_validation* validation);

void mcrd_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* MCRD_H */
