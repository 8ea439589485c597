#ifndef MCRD_CORE_CODER_HPP
#define MCRD_CORE_CODER_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "core/motion.hpp"

namespace mcrd {

// Uniform midtread scalar quantizer: index = round(x / step), reconstruction
// = index * step, so zero is always representable and |error| <= step / 2.
struct QuantizerSpec {
  double step = 1.0;
};

struct QuantizedResiduals {
  std::vector<int64_t> dfd_indices;
  std::vector<int64_t> fd_indices;
  std::vector<double> dfd_recon;
  std::vector<double> fd_recon;
};

QuantizedResiduals quantize(const ResidualSet& res, const QuantizerSpec& q);

// Zeroth-order empirical entropy of a symbol stream, bits per symbol. Stands
// in for an ideal entropy coder's rate.
double entropy_rate(std::span<const int64_t> indices);

struct EmpiricalPoint {
  double rate_total = 0.0;     // rate_mv + rate_residual
  double rate_mv = 0.0;        // bits per pixel spent on vectors
  double rate_residual = 0.0;  // entropy of quantized residuals, bits per pixel
  double distortion = 0.0;     // per-pixel MSE of the reconstruction
  double step = 0.0;
};

// Quantize-and-measure coder for one frame pair: reconstructs the target as
// prediction + dequantized residual per block and reports the rate needed to
// describe what was thrown away.
EmpiricalPoint measure(const Frame& anchor, const Frame& target, const ActivityMap& map,
                       const MotionField& field, const QuantizerSpec& q);

}  // namespace mcrd

#endif
