#include "mcrd.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "core/errors.hpp"
#include "core/pipeline.hpp"
#include "core/synth.hpp"

struct mcrd_sequence {
  mcrd::VideoSequence seq;
};

struct mcrd_analysis {
  mcrd::AnalysisResult result;
  std::vector<mcrd::PairAnalysis> pairs;
};

struct mcrd_validation {
  mcrd::ValidationResult result;
};

namespace {

thread_local std::string g_last_error;

void set_last_error(const std::string& message) { g_last_error = message; }

mcrd_status map_errc(mcrd::errc code) {
  switch (code) {
    case mcrd::errc::io: return MCRD_ERR_IO;
    case mcrd::errc::malformed_input: return MCRD_ERR_MALFORMED_INPUT;
    case mcrd::errc::shape_mismatch: return MCRD_ERR_SHAPE;
    case mcrd::errc::bad_config: return MCRD_ERR_CONFIG;
    case mcrd::errc::domain: return MCRD_ERR_DOMAIN;
    case mcrd::errc::insufficient_data: return MCRD_ERR_INSUFFICIENT_DATA;
    case mcrd::errc::internal: return MCRD_ERR_INTERNAL;
  }
  return MCRD_ERR_INTERNAL;
}

template <typename Fn>
mcrd_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    return MCRD_OK;
  } catch (const mcrd::error& e) {
    set_last_error(e.what());
    return map_errc(e.code());
  } catch (const std::exception& e) {
    set_last_error(e.what());
    return MCRD_ERR_INTERNAL;
  } catch (...) {
    set_last_error("unknown failure");
    return MCRD_ERR_INTERNAL;
  }
}

mcrd_status invalid_argument(const char* what) {
  set_last_error(what);
  return MCRD_ERR_INVALID_ARGUMENT;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

mcrd::AnalyzeConfig to_core(const mcrd_analyze_config* cfg) {
  mcrd::AnalyzeConfig core;
  if (!cfg) return core;
  core.block_w = cfg->block_w;
  core.block_h = cfg->block_h;
  core.t_g = cfg->t_g;
  core.t_p = cfg->t_p;
  core.search_range = cfg->search_range;
  core.mv_bits = cfg->mv_bits;
  core.fit_bins = cfg->fit_bins;
  return core;
}

mcrd::ModelParams to_core(const mcrd_model_params& p) {
  mcrd::ModelParams core;
  core.sigma2_a = p.sigma2_a;
  core.sigma2_i = p.sigma2_i;
  core.rho_i = p.rho_i;
  core.lambda_m = p.lambda_m;
  core.b_m = p.b_m;
  core.block_w = p.block_w;
  core.block_h = p.block_h;
  return core;
}

mcrd_model_params from_core(const mcrd::ModelParams& core) {
  mcrd_model_params p;
  p.sigma2_a = core.sigma2_a;
  p.sigma2_i = core.sigma2_i;
  p.rho_i = core.rho_i;
  p.lambda_m = core.lambda_m;
  p.b_m = core.b_m;
  p.block_w = core.block_w;
  p.block_h = core.block_h;
  return p;
}

}  // namespace

extern "C" {

const char* mcrd_version(void) { return "0.1.0"; }

const char* mcrd_status_name(mcrd_status status) {
  switch (status) {
    case MCRD_OK: return "ok";
    case MCRD_ERR_IO: return "io-error";
    case MCRD_ERR_MALFORMED_INPUT: return "malformed-input";
    case MCRD_ERR_SHAPE: return "shape-mismatch";
    case MCRD_ERR_CONFIG: return "bad-config";
    case MCRD_ERR_DOMAIN: return "domain-error";
    case MCRD_ERR_INSUFFICIENT_DATA: return "insufficient-data";
    case MCRD_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case MCRD_ERR_INTERNAL: return "internal-error";
  }
  return "unknown";
}

const char* mcrd_last_error(void) { return g_last_error.c_str(); }

void mcrd_analyze_config_init(mcrd_analyze_config* cfg) {
  if (!cfg) return;
  const mcrd::AnalyzeConfig defaults;
  cfg->block_w = defaults.block_w;
  cfg->block_h = defaults.block_h;
  cfg->t_g = defaults.t_g;
  cfg->t_p = defaults.t_p;
  cfg->search_range = defaults.search_range;
  cfg->mv_bits = defaults.mv_bits;
  cfg->fit_bins = defaults.fit_bins;
}

mcrd_status mcrd_sequence_read_yuv420(const char* path, int32_t width, int32_t height,
                                      mcrd_sequence** out) {
  if (!path || !out) return invalid_argument("mcrd_sequence_read_yuv420: null argument");
  return guarded([&] {
    auto handle = std::make_unique<mcrd_sequence>();
    handle->seq = mcrd::read_raw_yuv420(path, width, height);
    *out = handle.release();
  });
}

mcrd_status mcrd_sequence_synthesize(const char* spec_json, int32_t width, int32_t height,
                                     int32_t n_frames, mcrd_sequence** out) {
  if (!spec_json || !out) return invalid_argument("mcrd_sequence_synthesize: null argument");
  return guarded([&] {
    const mcrd::SyntheticSpec spec = mcrd::SyntheticSpec::from_json(spec_json);
    auto handle = std::make_unique<mcrd_sequence>();
    handle->seq = mcrd::synthesize(spec, width, height, n_frames);
    *out = handle.release();
  });
}

mcrd_status mcrd_sequence_write_yuv420(const mcrd_sequence* seq, const char* path) {
  if (!seq || !path) return invalid_argument("mcrd_sequence_write_yuv420: null argument");
  return guarded([&] { mcrd::write_raw_yuv420(seq->seq, path); });
}

int32_t mcrd_sequence_frame_count(const mcrd_sequence* seq) {
  return seq ? static_cast<int32_t>(seq->seq.frames.size()) : 0;
}

int32_t mcrd_sequence_width(const mcrd_sequence* seq) { return seq ? seq->seq.width() : 0; }

int32_t mcrd_sequence_height(const mcrd_sequence* seq) { return seq ? seq->seq.height() : 0; }

void mcrd_sequence_free(mcrd_sequence* seq) { delete seq; }

mcrd_status mcrd_analyze(const mcrd_sequence* seq, const mcrd_analyze_config* cfg,
                         mcrd_analysis** out) {
  if (!seq || !out) return invalid_argument("mcrd_analyze: null argument");
  return guarded([&] {
    auto handle = std::make_unique<mcrd_analysis>();
    const mcrd::AnalyzeConfig core = to_core(cfg);
    handle->pairs = mcrd::analyze_pairs(seq->seq, core);
    handle->result = mcrd::summarize_pairs(seq->seq, core, handle->pairs);
    *out = handle.release();
  });
}

mcrd_status mcrd_analysis_params(const mcrd_analysis* analysis, mcrd_model_params* out) {
  if (!analysis || !out) return invalid_argument("mcrd_analysis_params: null argument");
  *out = from_core(analysis->result.params);
  return MCRD_OK;
}

mcrd_status mcrd_analysis_params_json(const mcrd_analysis* analysis, char** out) {
  if (!analysis || !out) return invalid_argument("mcrd_analysis_params_json: null argument");
  return guarded([&] { *out = dup_string(analysis->result.params.to_json()); });
}

mcrd_status mcrd_analysis_fit_csv(const mcrd_analysis* analysis, char** out) {
  if (!analysis || !out) return invalid_argument("mcrd_analysis_fit_csv: null argument");
  return guarded([&] {
    *out = dup_string(analysis->result.fit ? analysis->result.fit->to_csv()
                                           : mcrd::FitReport{}.to_csv());
  });
}

mcrd_status mcrd_analysis_per_pair_csv(const mcrd_analysis* analysis, char** out) {
  if (!analysis || !out) return invalid_argument("mcrd_analysis_per_pair_csv: null argument");
  return guarded([&] { *out = dup_string(analysis->result.per_pair_csv()); });
}

mcrd_status mcrd_analysis_diagnostics_json(const mcrd_analysis* analysis, char** out) {
  if (!analysis || !out)
    return invalid_argument("mcrd_analysis_diagnostics_json: null argument");
  return guarded([&] { *out = dup_string(analysis->result.diagnostics_json()); });
}

int32_t mcrd_analysis_pair_count(const mcrd_analysis* analysis) {
  return analysis ? static_cast<int32_t>(analysis->result.per_pair.size()) : 0;
}

mcrd_status mcrd_analysis_activity_json(const mcrd_analysis* analysis, int32_t pair_index,
                                        char** out) {
  if (!analysis || !out) return invalid_argument("mcrd_analysis_activity_json: null argument");
  if (pair_index < 0 || static_cast<size_t>(pair_index) >= analysis->pairs.size()) {
    set_last_error("pair index out of range");
    return MCRD_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] { *out = dup_string(analysis->pairs[pair_index].map.to_json()); });
}

mcrd_status mcrd_analysis_motion_json(const mcrd_analysis* analysis, int32_t pair_index,
                                      char** out) {
  if (!analysis || !out) return invalid_argument("mcrd_analysis_motion_json: null argument");
  if (pair_index < 0 || static_cast<size_t>(pair_index) >= analysis->pairs.size()) {
    set_last_error("pair index out of range");
    return MCRD_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] { *out = dup_string(analysis->pairs[pair_index].field.to_json()); });
}

void mcrd_analysis_free(mcrd_analysis* analysis) { delete analysis; }

mcrd_status mcrd_params_from_json(const char* json_text, mcrd_model_params* out) {
  if (!json_text || !out) return invalid_argument("mcrd_params_from_json: null argument");
  return guarded([&] { *out = from_core(mcrd::ModelParams::from_json(json_text)); });
}

mcrd_status mcrd_params_to_json(const mcrd_model_params* params, char** out) {
  if (!params || !out) return invalid_argument("mcrd_params_to_json: null argument");
  return guarded([&] { *out = dup_string(to_core(*params).to_json()); });
}

mcrd_status mcrd_rate_active(double sigma2_a, double d_a, double* out) {
  if (!out) return invalid_argument("mcrd_rate_active: null out pointer");
  return guarded([&] { *out = mcrd::rate_active(sigma2_a, d_a); });
}

mcrd_status mcrd_rate_inactive(double sigma2_i, double rho_i, double d_i, double* out) {
  if (!out) return invalid_argument("mcrd_rate_inactive: null out pointer");
  return guarded([&] { *out = mcrd::rate_inactive(sigma2_i, rho_i, d_i); });
}

mcrd_status mcrd_rate_motion(int32_t b_m, int32_t block_w, int32_t block_h, double* out) {
  if (!out) return invalid_argument("mcrd_rate_motion: null out pointer");
  return guarded([&] { *out = mcrd::rate_motion(b_m, block_w, block_h); });
}

mcrd_status mcrd_rate_combined(const mcrd_model_params* params, double d_a, double d_i,
                               int include_mv, double* out) {
  if (!params || !out) return invalid_argument("mcrd_rate_combined: null argument");
  return guarded([&] { *out = mcrd::rate_combined(to_core(*params), d_a, d_i, include_mv != 0); });
}

mcrd_status mcrd_curves_csv(const mcrd_model_params* params, double d_min, double d_max,
                            int32_t n, int include_mv, char** out) {
  if (!params || !out) return invalid_argument("mcrd_curves_csv: null argument");
  return guarded([&] {
    const mcrd::ModelParams core = to_core(*params);
    const bool mv = include_mv != 0;
    const mcrd::RDCurve curves[] = {
        mcrd::generate_curve(core, d_min, d_max, n, mcrd::CurveMode::combined, mv),
        mcrd::generate_curve(core, d_min, d_max, n, mcrd::CurveMode::all_active, mv),
        mcrd::generate_curve(core, d_min, d_max, n, mcrd::CurveMode::all_inactive, mv)};
    *out = dup_string(mcrd::curves_to_csv(curves));
  });
}

mcrd_status mcrd_validate(const mcrd_sequence* seq, const mcrd_analyze_config* cfg,
                          const double* steps, int32_t n_steps, double d_min, double d_max,
                          int32_t curve_points, double slack_bits, mcrd_validation** out) {
  if (!seq || !out) return invalid_argument("mcrd_validate: null argument");
  if (n_steps > 0 && !steps) return invalid_argument("mcrd_validate: null steps with n_steps > 0");
  return guarded([&] {
    mcrd::ValidationConfig vcfg;
    vcfg.analyze = to_core(cfg);
    if (steps && n_steps > 0) vcfg.steps.assign(steps, steps + n_steps);
    vcfg.d_min = d_min;
    vcfg.d_max = d_max;
    vcfg.curve_points = curve_points;
    vcfg.slack_bits = slack_bits;
    auto handle = std::make_unique<mcrd_validation>();
    handle->result = mcrd::validate_sequence(seq->seq, vcfg);
    *out = handle.release();
  });
}

int mcrd_validation_passed(const mcrd_validation* validation) {
  return validation && validation->result.passed ? 1 : 0;
}

int32_t mcrd_validation_point_count(const mcrd_validation* validation) {
  return validation ? static_cast<int32_t>(validation->result.points.size()) : 0;
}

mcrd_status mcrd_validation_params(const mcrd_validation* validation, mcrd_model_params* out) {
  if (!validation || !out) return invalid_argument("mcrd_validation_params: null argument");
  *out = from_core(validation->result.analysis.params);
  return MCRD_OK;
}

mcrd_status mcrd_validation_params_json(const mcrd_validation* validation, char** out) {
  if (!validation || !out) return invalid_argument("mcrd_validation_params_json: null argument");
  return guarded([&] { *out = dup_string(validation->result.analysis.params.to_json()); });
}

mcrd_status mcrd_validation_csv(const mcrd_validation* validation, char** out) {
  if (!validation || !out) return invalid_argument("mcrd_validation_csv: null argument");
  return guarded([&] { *out = dup_string(validation->result.to_csv()); });
}

mcrd_status mcrd_validation_report(const mcrd_validation* validation, char** out) {
  if (!validation || !out) return invalid_argument("mcrd_validation_report: null argument");
  return guarded([&] { *out = dup_string(validation->result.report()); });
}

void mcrd_validation_free(mcrd_validation* validation) { delete validation; }

void mcrd_string_free(char* s) { std::free(s); }

}  // extern "C"
