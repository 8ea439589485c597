#ifndef MCRD_CORE_STATS_HPP
#define MCRD_CORE_STATS_HPP

#include <span>
#include <string>
#include <vector>

#include "core/activity.hpp"
#include "core/motion.hpp"

namespace mcrd {

// Everything the closed-form rate model needs.
struct ModelParams {
  double sigma2_a = 0.0;  // variance of the motion-compensated residual stream
  double sigma2_i = 0.0;  // variance of the plain frame-difference stream
  double rho_i = 0.0;     // lag-1 correlation of the frame-difference stream
  double lambda_m = 0.0;  // fraction of active blocks
  int b_m = 0;            // bits per motion vector
  int block_w = 0;
  int block_h = 0;

  std::string to_json() const;
  static ModelParams from_json(const std::string& text);
};

struct FitReport {
  std::vector<double> bin_centers;
  std::vector<double> empirical_density;
  std::vector<double> gaussian_density;
  double fitted_sigma2 = 0.0;
  double kl_divergence = 0.0;  // nats; +inf when degenerate
  bool degenerate = false;     // zero-variance stream

  std::string to_csv() const;  // bin_center,empirical_density,gaussian_density
};

double population_variance(std::span<const double> xs);

// Lag-1 Pearson correlation over pairs of horizontally adjacent samples
// inside one block row; `samples` must be block-grouped with a row-major
// scan per block (the ResidualSet layout). Pairs never straddle blocks.
double block_row_lag1_correlation(std::span<const double> samples, int block_w, int block_h);

// Same over vertically adjacent within-block pairs (diagnostic).
double block_col_lag1_correlation(std::span<const double> samples, int block_w, int block_h);

// Variances from the two residual streams, lag-1 correlation from the
// frame-difference stream, activity fraction from the map, vector bits and
// block dimensions from the field. Empty streams yield zero variance and,
// for the frame-difference stream, zero correlation.
ModelParams estimate_params(const ResidualSet& res, const ActivityMap& map,
                            const MotionField& field);

// Histogram of the frame-difference stream with `bins` equal cells over
// [-4*sigma, +4*sigma] plus two overflow cells, against the matched
// zero-mean Gaussian; kl_divergence is computed over bin masses.
FitReport fit_gauss_markov(const ResidualSet& res, int bins);

}  // namespace mcrd

#endif
