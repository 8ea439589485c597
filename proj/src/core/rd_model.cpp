#include "core/rd_model.hpp"

#include <cmath>

#include "core/errors.hpp"
#include "core/text.hpp"

namespace mcrd {

const char* curve_source_name(CurveSource source) {
  switch (source) {
    case CurveSource::theory_active: return "theory-active";
    case CurveSource::theory_inactive: return "theory-inactive";
    case CurveSource::theory_combined: return "theory-combined";
    case CurveSource::empirical: return "empirical";
  }
  return "?";
}

double rate_active(double sigma2_a, double d_a) {
  if (!(d_a > 0.0)) fail(errc::domain, "rate_active: distortion must be > 0");
  if (!(sigma2_a >= 0.0)) fail(errc::domain, "rate_active: variance must be >= 0");
  if (sigma2_a <= d_a) return 0.0;
  return 0.5 * std::log2(sigma2_a / d_a);
}

double rate_inactive(double sigma2_i, double rho_i, double d_i) {
  if (!(d_i > 0.0)) fail(errc::domain, "rate_inactive: distortion must be > 0");
  if (!(sigma2_i >= 0.0)) fail(errc::domain, "rate_inactive: variance must be >= 0");
  if (!(std::abs(rho_i) < 1.0)) fail(errc::domain, "rate_inactive: |rho_i| must be < 1");
  const double effective = (1.0 - rho_i * rho_i) * sigma2_i;
  if (effective <= d_i) return 0.0;
  return 0.5 * std::log2(effective / d_i);
}

double rate_motion(int b_m, int block_w, int block_h) {
  if (block_w <= 0 || block_h <= 0) fail(errc::domain, "rate_motion: block area must be > 0");
  if (b_m < 0) fail(errc::domain, "rate_motion: b_m must be >= 0");
  return static_cast<double>(b_m) / (static_cast<double>(block_w) * block_h);
}

double rate_combined(const ModelParams& p, double d_a, double d_i, bool include_mv) {
  if (!(p.lambda_m >= 0.0 && p.lambda_m <= 1.0))
    fail(errc::domain, "rate_combined: lambda_m must be in [0,1]");
  double rate = p.lambda_m * rate_active(p.sigma2_a, d_a) +
                (1.0 - p.lambda_m) * rate_inactive(p.sigma2_i, p.rho_i, d_i);
  if (include_mv) rate += p.lambda_m * rate_motion(p.b_m, p.block_w, p.block_h);
  return rate;
}

RDCurve generate_curve(const ModelParams& p, double d_min, double d_max, int n, CurveMode mode,
                       bool include_mv) {
  if (!(d_min > 0.0 && d_min < d_max)) fail(errc::domain, "generate_curve: need 0 < d_min < d_max");
  if (n < 2) fail(errc::domain, "generate_curve: need at least 2 points");

  RDCurve curve;
  curve.params = p;
  CurveSource source = CurveSource::theory_combined;
  if (mode == CurveMode::all_active) {
    curve.params.lambda_m = 1.0;
    source = CurveSource::theory_active;
  } else if (mode == CurveMode::all_inactive) {
    curve.params.lambda_m = 0.0;
    source = CurveSource::theory_inactive;
  }

  const double ratio = d_max / d_min;
  curve.points.reserve(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double d = d_min * std::pow(ratio, static_cast<double>(k) / (n - 1));
    curve.points.push_back({d, rate_combined(curve.params, d, d, include_mv), source});
  }
  return curve;
}

std::string curves_csv_header() {
  return "distortion,rate,source,lambda_m,rho_i,sigma2_a,sigma2_i\n";
}

void append_curve_csv(std::string& out, const RDCurve& curve) {
  for (const RDPoint& pt : curve.points) {
    out += format_double(pt.distortion);
    out += ',';
    out += format_double(pt.rate);
    out += ',';
    out += curve_source_name(pt.source);
    out += ',';
    out += format_double(curve.params.lambda_m);
    out += ',';
    out += format_double(curve.params.rho_i);
    out += ',';
    out += format_double(curve.params.sigma2_a);
    out += ',';
    out += format_double(curve.params.sigma2_i);
    out += '\n';
  }
}

std::string curves_to_csv(std::span<const RDCurve> curves) {
  std::string out = curves_csv_header();
  for (const RDCurve& curve : curves) append_curve_csv(out, curve);
  return out;
}

}  // namespace mcrd
