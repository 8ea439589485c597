#include "core/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/text.hpp"

namespace mcrd {

namespace {

Thresholds thresholds_for(const AnalyzeConfig& cfg, const BlockGrid& grid) {
  Thresholds th;
  th.t_g = cfg.t_g;
  th.t_p = cfg.t_p >= 0 ? cfg.t_p : grid.block_area() / 8;
  return th;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  const size_t n = xs.size();
  if (n == 0 || n != ys.size()) return 0.0;
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  const double denom = std::sqrt(sxx * syy);
  return denom == 0.0 ? 0.0 : sxy / denom;
}

}  // namespace

std::vector<PairAnalysis> analyze_pairs(const VideoSequence& seq, const AnalyzeConfig& cfg) {
  if (seq.frames.size() < 2)
    fail(errc::insufficient_data, "need at least 2 frames, got " +
                                      std::to_string(seq.frames.size()));
  const BlockGrid grid = BlockGrid::for_frame(seq.width(), seq.height(), cfg.block_w, cfg.block_h);
  const Thresholds th = thresholds_for(cfg, grid);

  std::vector<PairAnalysis> pairs;
  pairs.reserve(seq.frames.size() - 1);
  for (size_t f = 0; f + 1 < seq.frames.size(); ++f) {
    const Frame& anchor = seq.frames[f];
    const Frame& target = seq.frames[f + 1];
    if (!anchor.same_size(target))
      fail(errc::shape_mismatch, "sequence frames disagree on dimensions");
    PairAnalysis pa;
    pa.map = classify(difference_image(anchor, target), grid, th);
    pa.field = estimate_motion(anchor, target, pa.map, cfg.search_range, cfg.mv_bits);
    pa.residuals = extract_residuals(anchor, target, pa.map, pa.field);
    pairs.push_back(std::move(pa));
  }
  return pairs;
}

AnalysisResult summarize_pairs(const VideoSequence& seq, const AnalyzeConfig& cfg,
                               std::span<const PairAnalysis> pairs) {
  const BlockGrid& grid = pairs.front().map.grid;

  AnalysisResult result;
  std::vector<double> pooled_dfd, pooled_fd;
  long total_active = 0;
  long total_blocks = 0;
  for (size_t i = 0; i < pairs.size(); ++i) {
    const PairAnalysis& pa = pairs[i];
    PairStats ps;
    ps.pair_index = static_cast<int>(i);
    const ModelParams pair_params = estimate_params(pa.residuals, pa.map, pa.field);
    ps.lambda_m = pair_params.lambda_m;
    ps.sigma2_a = pair_params.sigma2_a;
    ps.sigma2_i = pair_params.sigma2_i;
    ps.rho_i = pair_params.rho_i;
    ps.rho_i_vertical =
        pa.residuals.fd_samples.empty()
            ? 0.0
            : block_col_lag1_correlation(pa.residuals.fd_samples, grid.block_w, grid.block_h);
    ps.dfd_count = pa.residuals.dfd_samples.size();
    ps.fd_count = pa.residuals.fd_samples.size();
    result.per_pair.push_back(ps);

    pooled_dfd.insert(pooled_dfd.end(), pa.residuals.dfd_samples.begin(),
                      pa.residuals.dfd_samples.end());
    pooled_fd.insert(pooled_fd.end(), pa.residuals.fd_samples.begin(),
                     pa.residuals.fd_samples.end());
    total_active += pa.map.active_blocks();
    total_blocks += grid.block_count();
  }

  result.params.sigma2_a = population_variance(pooled_dfd);
  result.params.sigma2_i = population_variance(pooled_fd);
  result.params.rho_i =
      pooled_fd.empty() ? 0.0
                        : block_row_lag1_correlation(pooled_fd, grid.block_w, grid.block_h);
  result.params.lambda_m = static_cast<double>(total_active) / static_cast<double>(total_blocks);
  result.params.b_m = pairs.front().field.b_m;
  result.params.block_w = grid.block_w;
  result.params.block_h = grid.block_h;
  result.dfd_count = pooled_dfd.size();
  result.fd_count = pooled_fd.size();

  if (!pooled_fd.empty()) {
    ResidualSet pooled;
    pooled.fd_samples = std::move(pooled_fd);
    result.fit = fit_gauss_markov(pooled, cfg.fit_bins);
    result.rho_i_vertical =
        block_col_lag1_correlation(pooled.fd_samples, grid.block_w, grid.block_h);
  }

  // Temporal diagnostic: co-located frame differences of consecutive pairs,
  // restricted to blocks inactive in both.
  std::vector<double> prev_fd, next_fd;
  for (size_t i = 0; i + 1 < pairs.size(); ++i) {
    const Frame& a0 = seq.frames[i];
    const Frame& a1 = seq.frames[i + 1];
    const Frame& a2 = seq.frames[i + 2];
    for (int by = 0; by < grid.rows; ++by)
      for (int bx = 0; bx < grid.cols; ++bx) {
        if (pairs[i].map.block_active(bx, by) || pairs[i + 1].map.block_active(bx, by)) continue;
        for (int y = by * grid.block_h; y < (by + 1) * grid.block_h; ++y)
          for (int x = bx * grid.block_w; x < (bx + 1) * grid.block_w; ++x) {
            prev_fd.push_back(a1.at(x, y) - a0.at(x, y));
            next_fd.push_back(a2.at(x, y) - a1.at(x, y));
          }
      }
  }
  result.temporal_pairs = prev_fd.size();
  result.rho_i_temporal = pearson(prev_fd, next_fd);
  return result;
}

AnalysisResult analyze_sequence(const VideoSequence& seq, const AnalyzeConfig& cfg) {
  return summarize_pairs(seq, cfg, analyze_pairs(seq, cfg));
}

std::string AnalysisResult::per_pair_csv() const {
  std::string out = "pair,lambda_m,sigma2_a,sigma2_i,rho_i,rho_i_vertical,dfd_count,fd_count\n";
  for (const PairStats& ps : per_pair) {
    out += std::to_string(ps.pair_index);
    out += ',';
    out += format_double(ps.lambda_m);
    out += ',';
    out += format_double(ps.sigma2_a);
    out += ',';
    out += format_double(ps.sigma2_i);
    out += ',';
    out += format_double(ps.rho_i);
    out += ',';
    out += format_double(ps.rho_i_vertical);
    out += ',';
    out += std::to_string(ps.dfd_count);
    out += ',';
    out += std::to_string(ps.fd_count);
    out += '\n';
  }
  return out;
}

std::string AnalysisResult::diagnostics_json() const {
  nlohmann::ordered_json doc;
  doc["pairs"] = per_pair.size();
  doc["dfd_count"] = dfd_count;
  doc["fd_count"] = fd_count;
  doc["rho_i_vertical"] = rho_i_vertical;
  doc["rho_i_temporal"] = rho_i_temporal;
  doc["temporal_sample_pairs"] = temporal_pairs;
  doc["fit_kl_divergence_nats"] =
      fit ? (std::isfinite(fit->kl_divergence) ? nlohmann::ordered_json(fit->kl_divergence)
                                               : nlohmann::ordered_json("inf"))
          : nlohmann::ordered_json(nullptr);
  doc["fit_degenerate"] = fit ? nlohmann::ordered_json(fit->degenerate)
                              : nlohmann::ordered_json(nullptr);
  return doc.dump(2) + "\n";
}

EmpiricalPoint measure_sequence(std::span<const PairAnalysis> pairs,
                                const QuantizerSpec& q) {
  if (pairs.empty()) fail(errc::insufficient_data, "measure_sequence: no frame pairs");
  if (!(q.step > 0.0)) fail(errc::domain, "measure_sequence: step must be > 0");

  const BlockGrid& grid = pairs.front().map.grid;
  std::vector<int64_t> pooled_dfd_idx, pooled_fd_idx;
  double sse = 0.0;
  long total_active = 0;
  long total_blocks = 0;
  for (size_t i = 0; i < pairs.size(); ++i) {
    const PairAnalysis& pa = pairs[i];
    const QuantizedResiduals qr = quantize(pa.residuals, q);
    // Quantization error is the only reconstruction error, so the pooled MSE
    // is accumulated directly from residual minus reconstruction.
    for (size_t k = 0; k < qr.dfd_recon.size(); ++k) {
      const double e = pa.residuals.dfd_samples[k] - qr.dfd_recon[k];
      sse += e * e;
    }
    for (size_t k = 0; k < qr.fd_recon.size(); ++k) {
      const double e = pa.residuals.fd_samples[k] - qr.fd_recon[k];
      sse += e * e;
    }
    pooled_dfd_idx.insert(pooled_dfd_idx.end(), qr.dfd_indices.begin(), qr.dfd_indices.end());
    pooled_fd_idx.insert(pooled_fd_idx.end(), qr.fd_indices.begin(), qr.fd_indices.end());
    total_active += pa.map.active_blocks();
    total_blocks += grid.block_count();
  }

  const double samples =
      static_cast<double>(pooled_dfd_idx.size() + pooled_fd_idx.size());
  const double lambda = static_cast<double>(total_active) / static_cast<double>(total_blocks);
  EmpiricalPoint point;
  point.step = q.step;
  point.distortion = sse / samples;
  const double h_dfd = pooled_dfd_idx.empty() ? 0.0 : entropy_rate(pooled_dfd_idx);
  const double h_fd = pooled_fd_idx.empty() ? 0.0 : entropy_rate(pooled_fd_idx);
  point.rate_residual = lambda * h_dfd + (1.0 - lambda) * h_fd;
  point.rate_mv =
      lambda * static_cast<double>(pairs.front().field.b_m) / grid.block_area();
  point.rate_total = point.rate_mv + point.rate_residual;
  return point;
}

std::vector<double> default_step_sweep() {
  return {0.5, 1.0, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0, 32.0, 48.0};
}

ValidationResult validate_sequence(const VideoSequence& seq, const ValidationConfig& cfg) {
  ValidationResult result;
  const std::vector<PairAnalysis> pairs = analyze_pairs(seq, cfg.analyze);
  result.analysis = summarize_pairs(seq, cfg.analyze, pairs);
  const ModelParams& params = result.analysis.params;

  result.curves.push_back(generate_curve(params, cfg.d_min, cfg.d_max, cfg.curve_points,
                                         CurveMode::combined, true));
  result.curves.push_back(generate_curve(params, cfg.d_min, cfg.d_max, cfg.curve_points,
                                         CurveMode::all_active, true));
  result.curves.push_back(generate_curve(params, cfg.d_min, cfg.d_max, cfg.curve_points,
                                         CurveMode::all_inactive, true));

  std::vector<double> steps = cfg.steps.empty() ? default_step_sweep() : cfg.steps;
  std::sort(steps.begin(), steps.end());
  for (double step : steps) {
    const EmpiricalPoint point = measure_sequence(pairs, QuantizerSpec{step});
    result.points.push_back(point);
    if (point.distortion <= 0.0) continue;  // exactly representable residuals
    const double bound =
        rate_combined(params, point.distortion, point.distortion, true) - cfg.slack_bits;
    if (point.rate_total < bound)
      result.violations.push_back({step, point.distortion, point.rate_total, bound});
  }
  result.passed = result.violations.empty();
  return result;
}

std::string ValidationResult::to_csv() const {
  std::string out = "distortion,rate,source,lambda_m,rho_i,sigma2_a,sigma2_i,step,rate_mv,rate_residual\n";
  for (const RDCurve& curve : curves) {
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
      out += ",,,\n";
    }
  }
  const ModelParams& p = analysis.params;
  // Empirical rows, distortion ascending like the curves.
  std::vector<const EmpiricalPoint*> ordered;
  ordered.reserve(points.size());
  for (const EmpiricalPoint& pt : points) ordered.push_back(&pt);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto* a, const auto* b) { return a->distortion < b->distortion; });
  for (const EmpiricalPoint* pt : ordered) {
    out += format_double(pt->distortion);
    out += ',';
    out += format_double(pt->rate_total);
    out += ',';
    out += curve_source_name(CurveSource::empirical);
    out += ',';
    out += format_double(p.lambda_m);
    out += ',';
    out += format_double(p.rho_i);
    out += ',';
    out += format_double(p.sigma2_a);
    out += ',';
    out += format_double(p.sigma2_i);
    out += ',';
    out += format_double(pt->step);
    out += ',';
    out += format_double(pt->rate_mv);
    out += ',';
    out += format_double(pt->rate_residual);
    out += '\n';
  }
  return out;
}

std::string ValidationResult::report() const {
  std::string out;
  const ModelParams& p = analysis.params;
  out += "model: sigma2_a=" + format_double(p.sigma2_a) + " sigma2_i=" + format_double(p.sigma2_i) +
         " rho_i=" + format_double(p.rho_i) + " lambda_m=" + format_double(p.lambda_m) +
         " b_m=" + std::to_string(p.b_m) + "\n";
  out += "empirical points: " + std::to_string(points.size()) + "\n";
  if (passed) {
    out += "validation: PASS (every point at or above the theoretical rate minus slack)\n";
  } else {
    out += "validation: FAIL (" + std::to_string(violations.size()) + " point(s) below bound)\n";
    for (const Violation& v : violations)
      out += "  step=" + format_double(v.step) + " distortion=" + format_double(v.distortion) +
             " rate=" + format_double(v.rate) + " bound=" + format_double(v.bound) + "\n";
  }
  return out;
}

}  // namespace mcrd
