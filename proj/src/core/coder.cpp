#include "core/coder.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "core/errors.hpp"

namespace mcrd {

namespace {

void quantize_stream(const std::vector<double>& in, double step, std::vector<int64_t>& indices,
                     std::vector<double>& recon) {
  indices.reserve(in.size());
  recon.reserve(in.size());
  for (double x : in) {
    const int64_t idx = std::llround(x / step);
    indices.push_back(idx);
    recon.push_back(static_cast<double>(idx) * step);
  }
}

}  // namespace

QuantizedResiduals quantize(const ResidualSet& res, const QuantizerSpec& q) {
  if (!(q.step > 0.0)) fail(errc::domain, "quantize: step must be > 0");
  QuantizedResiduals out;
  quantize_stream(res.dfd_samples, q.step, out.dfd_indices, out.dfd_recon);
  quantize_stream(res.fd_samples, q.step, out.fd_indices, out.fd_recon);
  return out;
}

double entropy_rate(std::span<const int64_t> indices) {
  if (indices.empty()) fail(errc::insufficient_data, "entropy_rate: empty symbol stream");
  std::unordered_map<int64_t, size_t> counts;
  for (int64_t s : indices) ++counts[s];

  // Fixed summation order keeps the result independent of hash layout.
  std::vector<std::pair<int64_t, size_t>> sorted(counts.begin(), counts.end());
  std::sort(sorted.begin(), sorted.end());

  const double n = static_cast<double>(indices.size());
  double h = 0.0;
  for (const auto& [symbol, count] : sorted) {
    const double p = static_cast<double>(count) / n;
    h -= p * std::log2(p);
  }
  return h;
}

EmpiricalPoint measure(const Frame& anchor, const Frame& target, const ActivityMap& map,
                       const MotionField& field, const QuantizerSpec& q) {
  if (!anchor.same_size(target)) fail(errc::shape_mismatch, "measure: frame sizes differ");
  if (!(map.grid == field.grid))
    fail(errc::shape_mismatch, "measure: activity map and motion field grids differ");
  if (!(q.step > 0.0)) fail(errc::domain, "measure: step must be > 0");

  const BlockGrid& grid = map.grid;
  const ResidualSet res = extract_residuals(anchor, target, map, field);
  const QuantizedResiduals qr = quantize(res, q);

  // Reconstruction = prediction + dequantized residual, walked in the same
  // block order extract_residuals used.
  Frame recon = motion_compensate(anchor, field);
  size_t di = 0, fi = 0;
  for (int by = 0; by < grid.rows; ++by) {
    for (int bx = 0; bx < grid.cols; ++bx) {
      const bool active = map.block_active(bx, by);
      const std::vector<double>& stream = active ? qr.dfd_recon : qr.fd_recon;
      size_t& cursor = active ? di : fi;
      for (int y = by * grid.block_h; y < (by + 1) * grid.block_h; ++y)
        for (int x = bx * grid.block_w; x < (bx + 1) * grid.block_w; ++x)
          recon.at(x, y) += stream[cursor++];
    }
  }

  double sse = 0.0;
  for (int y = 0; y < grid.usable_height(); ++y)
    for (int x = 0; x < grid.usable_width(); ++x) {
      const double d = recon.at(x, y) - target.at(x, y);
      sse += d * d;
    }

  const double covered = static_cast<double>(grid.usable_width()) * grid.usable_height();
  const double lambda = map.lambda_m;
  EmpiricalPoint point;
  point.step = q.step;
  point.distortion = sse / covered;
  const double h_dfd = qr.dfd_indices.empty() ? 0.0 : entropy_rate(qr.dfd_indices);
  const double h_fd = qr.fd_indices.empty() ? 0.0 : entropy_rate(qr.fd_indices);
  point.rate_residual = lambda * h_dfd + (1.0 - lambda) * h_fd;
  point.rate_mv = lambda * static_cast<double>(field.b_m) / grid.block_area();
  point.rate_total = point.rate_mv + point.rate_residual;
  return point;
}

}  // namespace mcrd
