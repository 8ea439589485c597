#ifndef MCRD_CORE_PIPELINE_HPP
#define MCRD_CORE_PIPELINE_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/coder.hpp"
#include "core/rd_model.hpp"

namespace mcrd {

struct AnalyzeConfig {
  int block_w = 16;
  int block_h = 16;
  double t_g = 15.0;
  int t_p = -1;         // negative: block_area / 8
  int search_range = 15;
  int mv_bits = 0;      // <= 0: fixed-length default for the search range
  int fit_bins = 64;
};

// Classification, motion and residuals for one consecutive frame pair.
struct PairAnalysis {
  ActivityMap map;
  MotionField field;
  ResidualSet residuals;
};

struct PairStats {
  int pair_index = 0;
  double lambda_m = 0.0;
  double sigma2_a = 0.0;
  double sigma2_i = 0.0;
  double rho_i = 0.0;
  double rho_i_vertical = 0.0;
  size_t dfd_count = 0;
  size_t fd_count = 0;
};

struct AnalysisResult {
  ModelParams params;            // pooled across pairs, sample-weighted
  std::optional<FitReport> fit;  // absent when no block was ever inactive
  std::vector<PairStats> per_pair;
  // Diagnostics: vertical within-block lag-1 correlation of the pooled
  // frame-difference stream, and co-located correlation between consecutive
  // pairs' frame differences (blocks inactive in both pairs).
  double rho_i_vertical = 0.0;
  double rho_i_temporal = 0.0;
  size_t temporal_pairs = 0;
  size_t dfd_count = 0;
  size_t fd_count = 0;

  std::string per_pair_csv() const;
  std::string diagnostics_json() const;
};

std::vector<PairAnalysis> analyze_pairs(const VideoSequence& seq, const AnalyzeConfig& cfg);
AnalysisResult summarize_pairs(const VideoSequence& seq, const AnalyzeConfig& cfg,
                               std::span<const PairAnalysis> pairs);
AnalysisResult analyze_sequence(const VideoSequence& seq, const AnalyzeConfig& cfg);

// One quantize-and-measure point for the whole sequence: residual streams,
// squared errors and activity counts are pooled over all pairs.
EmpiricalPoint measure_sequence(std::span<const PairAnalysis> pairs,
                                const QuantizerSpec& q);

std::vector<double> default_step_sweep();

struct ValidationConfig {
  AnalyzeConfig analyze;
  std::vector<double> steps;  // empty: default_step_sweep()
  double d_min = 0.1;
  double d_max = 100.0;
  int curve_points = 50;
  double slack_bits = 0.05;
};

struct Violation {
  double step = 0.0;
  double distortion = 0.0;
  double rate = 0.0;
  double bound = 0.0;  // theoretical rate at the measured distortion minus slack
};

struct ValidationResult {
  AnalysisResult analysis;
  std::vector<RDCurve> curves;         // combined, all-active, all-inactive
  std::vector<EmpiricalPoint> points;  // one per quantizer step
  std::vector<Violation> violations;
  bool passed = true;

  // Theory rows plus empirical rows; empirical rows carry step, rate_mv and
  // rate_residual in three extra columns.
  std::string to_csv() const;
  std::string report() const;
};

// Analyzes the sequence, sweeps the quantizer, and checks that every
// empirical point stays above the theoretical combined rate at its measured
// distortion minus slack_bits. Zero-distortion points (exactly representable
// residuals) are outside the continuous model's domain and are not checked.
ValidationResult validate_sequence(const VideoSequence& seq, const ValidationConfig& cfg);

}  // namespace mcrd

#endif
