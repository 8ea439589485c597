#include "core/stats.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/text.hpp"

namespace mcrd {

std::string ModelParams::to_json() const {
  nlohmann::ordered_json doc;
  doc["sigma2_a"] = sigma2_a;
  doc["sigma2_i"] = sigma2_i;
  doc["rho_i"] = rho_i;
  doc["lambda_m"] = lambda_m;
  doc["b_m"] = b_m;
  doc["block_w"] = block_w;
  doc["block_h"] = block_h;
  return doc.dump(2) + "\n";
}

ModelParams ModelParams::from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(errc::malformed_input, std::string("invalid model params JSON: ") + e.what());
  }
  ModelParams p;
  try {
    p.sigma2_a = doc.at("sigma2_a").get<double>();
    p.sigma2_i = doc.at("sigma2_i").get<double>();
    p.rho_i = doc.at("rho_i").get<double>();
    p.lambda_m = doc.at("lambda_m").get<double>();
    p.b_m = doc.at("b_m").get<int>();
    p.block_w = doc.at("block_w").get<int>();
    p.block_h = doc.at("block_h").get<int>();
  } catch (const nlohmann::json::exception& e) {
    fail(errc::malformed_input, std::string("model params JSON missing field: ") + e.what());
  }
  if (p.sigma2_a < 0 || p.sigma2_i < 0) fail(errc::bad_config, "variances must be >= 0");
  if (!(std::abs(p.rho_i) < 1.0)) fail(errc::bad_config, "|rho_i| must be < 1");
  if (p.lambda_m < 0.0 || p.lambda_m > 1.0) fail(errc::bad_config, "lambda_m must be in [0,1]");
  return p;
}

std::string FitReport::to_csv() const {
  std::string out = "bin_center,empirical_density,gaussian_density\n";
  for (size_t i = 0; i < bin_centers.size(); ++i) {
    out += format_double(bin_centers[i]);
    out += ',';
    out += format_double(empirical_density[i]);
    out += ',';
    out += format_double(gaussian_density[i]);
    out += '\n';
  }
  return out;
}

double population_variance(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) {
    const double d = x - mean;
    ss += d * d;
  }
  return ss / static_cast<double>(xs.size());
}

namespace {

// Pearson correlation over (first, second) pairs produced by `emit`, which
// calls its sink with index pairs into `samples`.
template <typename EmitPairs>
double paired_correlation(std::span<const double> samples, EmitPairs&& emit) {
  double sum_x = 0.0, sum_y = 0.0;
  size_t n = 0;
  emit([&](size_t i, size_t j) {
    sum_x += samples[i];
    sum_y += samples[j];
    ++n;
  });
  if (n == 0) return 0.0;
  const double mean_x = sum_x / static_cast<double>(n);
  const double mean_y = sum_y / static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  emit([&](size_t i, size_t j) {
    const double dx = samples[i] - mean_x;
    const double dy = samples[j] - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  });
  const double denom = std::sqrt(sxx * syy);
  if (denom == 0.0) return 0.0;
  return sxy / denom;
}

}  // namespace

double block_row_lag1_correlation(std::span<const double> samples, int block_w, int block_h) {
  if (block_w <= 0 || block_h <= 0) fail(errc::bad_config, "block dimensions must be positive");
  const size_t area = static_cast<size_t>(block_w) * block_h;
  if (area == 0 || samples.size() % area != 0)
    fail(errc::shape_mismatch, "sample count is not a whole number of blocks");
  const size_t blocks = samples.size() / area;
  return paired_correlation(samples, [&](auto&& sink) {
    for (size_t b = 0; b < blocks; ++b)
      for (int r = 0; r < block_h; ++r) {
        const size_t row = b * area + static_cast<size_t>(r) * block_w;
        for (int c = 0; c + 1 < block_w; ++c) sink(row + c, row + c + 1);
      }
  });
}

double block_col_lag1_correlation(std::span<const double> samples, int block_w, int block_h) {
  if (block_w <= 0 || block_h <= 0) fail(errc::bad_config, "block dimensions must be positive");
  const size_t area = static_cast<size_t>(block_w) * block_h;
  if (area == 0 || samples.size() % area != 0)
    fail(errc::shape_mismatch, "sample count is not a whole number of blocks");
  const size_t blocks = samples.size() / area;
  return paired_correlation(samples, [&](auto&& sink) {
    for (size_t b = 0; b < blocks; ++b)
      for (int r = 0; r + 1 < block_h; ++r) {
        const size_t row = b * area + static_cast<size_t>(r) * block_w;
        for (int c = 0; c < block_w; ++c) sink(row + c, row + c + block_w);
      }
  });
}

ModelParams estimate_params(const ResidualSet& res, const ActivityMap& map,
                            const MotionField& field) {
  if (!(map.grid == field.grid))
    fail(errc::shape_mismatch, "estimate_params: activity map and motion field grids differ");
  ModelParams p;
  p.sigma2_a = population_variance(res.dfd_samples);
  p.sigma2_i = population_variance(res.fd_samples);
  p.rho_i = res.fd_samples.empty()
                ? 0.0
                : block_row_lag1_correlation(res.fd_samples, map.grid.block_w, map.grid.block_h);
  p.lambda_m = map.lambda_m;
  p.b_m = field.b_m;
  p.block_w = map.grid.block_w;
  p.block_h = map.grid.block_h;
  return p;
}

namespace {

double gaussian_cdf(double x, double sigma) {
  return 0.5 * std::erfc(-x / (sigma * std::numbers::sqrt2));
}

}  // namespace

FitReport fit_gauss_markov(const ResidualSet& res, int bins) {
  const std::vector<double>& xs = res.fd_samples;
  if (xs.empty()) fail(errc::insufficient_data, "fit_gauss_markov: no frame-difference samples");
  if (bins < 8) fail(errc::bad_config, "fit_gauss_markov: need at least 8 bins");

  FitReport report;
  report.fitted_sigma2 = population_variance(xs);
  if (report.fitted_sigma2 == 0.0) {
    report.degenerate = true;
    report.kl_divergence = std::numeric_limits<double>::infinity();
    return report;
  }

  const double sigma = std::sqrt(report.fitted_sigma2);
  const double lo = -4.0 * sigma;
  const double width = 8.0 * sigma / bins;
  const size_t total = static_cast<size_t>(bins) + 2;  // interior + two overflow cells

  std::vector<double> counts(total, 0.0);
  for (double x : xs) {
    if (x < lo)
      counts.front() += 1.0;
    else {
      const auto k = static_cast<size_t>((x - lo) / width);
      counts[k >= static_cast<size_t>(bins) ? total - 1 : k + 1] += 1.0;
    }
  }

  const double n = static_cast<double>(xs.size());
  report.bin_centers.resize(total);
  report.empirical_density.resize(total);
  report.gaussian_density.resize(total);
  double kl = 0.0;
  for (size_t k = 0; k < total; ++k) {
    double mass_q;
    if (k == 0) {
      report.bin_centers[k] = lo - 0.5 * width;
      mass_q = gaussian_cdf(lo, sigma);
    } else if (k == total - 1) {
      report.bin_centers[k] = -lo + 0.5 * width;
      mass_q = 1.0 - gaussian_cdf(-lo, sigma);
    } else {
      const double e0 = lo + static_cast<double>(k - 1) * width;
      report.bin_centers[k] = e0 + 0.5 * width;
      mass_q = gaussian_cdf(e0 + width, sigma) - gaussian_cdf(e0, sigma);
    }
    const double mass_p = counts[k] / n;
    report.empirical_density[k] = mass_p / width;
    report.gaussian_density[k] = mass_q / width;
    if (mass_p > 0.0) kl += mass_p * std::log(mass_p / mass_q);
  }
  report.kl_divergence = kl;
  return report;
}

}  // namespace mcrd
