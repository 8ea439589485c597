#ifndef MCRD_CORE_RD_MODEL_HPP
#define MCRD_CORE_RD_MODEL_HPP

#include <span>
#include <string>
#include <vector>

#include "core/stats.hpp"

namespace mcrd {

enum class CurveSource { theory_active, theory_inactive, theory_combined, empirical };
const char* curve_source_name(CurveSource source);

struct RDPoint {
  double distortion = 0.0;  // per-pixel mean squared error
  double rate = 0.0;        // bits per pixel
  CurveSource source = CurveSource::theory_combined;
};

struct RDCurve {
  std::vector<RDPoint> points;  // distortion ascending, rate non-increasing
  ModelParams params;           // parameters the curve was evaluated with
};

// Rates are in bits per pixel, logarithms base 2, and every per-stream rate
// clamps at zero once the distortion reaches the stream's variance.

// max(0, 1/2 log2(sigma2_a / d_a))
double rate_active(double sigma2_a, double d_a);

// max(0, 1/2 log2((1 - rho_i^2) * sigma2_i / d_i))
double rate_inactive(double sigma2_i, double rho_i, double d_i);

// b_m / (block_w * block_h)
double rate_motion(int b_m, int block_w, int block_h);

// lambda_m-weighted mix of the two stream rates; include_mv additionally
// charges lambda_m * rate_motion for the vectors.
double rate_combined(const ModelParams& p, double d_a, double d_i, bool include_mv);

enum class CurveMode { combined, all_active, all_inactive };

// n points log-spaced over [d_min, d_max], evaluated with equal per-stream
// distortion d_a = d_i = D. all_active / all_inactive override lambda_m with
// 1 / 0, tracing the upper and lower boundary of the rate region.
RDCurve generate_curve(const ModelParams& p, double d_min, double d_max, int n, CurveMode mode,
                       bool include_mv);

// CSV schema shared by theoretical curves and empirical sweeps.
std::string curves_csv_header();
void append_curve_csv(std::string& out, const RDCurve& curve);
std::string curves_to_csv(std::span<const RDCurve> curves);

}  // namespace mcrd

#endif
