#ifndef MCRD_CORE_SYNTH_HPP
#define MCRD_CORE_SYNTH_HPP

#include <cstdint>
#include <random>
#include <string>

#include "core/frame.hpp"

namespace mcrd {

enum class SynthKind { ar1_field, moving_rect, white_noise, constant };

const char* synth_kind_name(SynthKind kind);

// Test-source description. rho/sigma2 drive the stochastic kinds; motion
// drives moving-rect; mean is the base intensity for all kinds.
struct SyntheticSpec {
  SynthKind kind = SynthKind::constant;
  double rho = 0.0;     // lag-1 correlation, in [0,1)
  double sigma2 = 0.0;  // marginal variance, >= 0
  double mean = 128.0;
  int motion_dx = 0;  // rectangle displacement per frame, pixels
  int motion_dy = 0;
  uint64_t seed = 0;

  // Parses {"kind":..., "rho":..., "sigma2":..., "mean":..., "motion":[dx,dy],
  // "seed":...}; every field except kind is optional.
  static SyntheticSpec from_json(const std::string& text);
  std::string to_json() const;
};

// Deterministic standard-normal generator (Box-Muller over mt19937_64).
// Identical seeds produce identical streams on every platform.
class GaussianRng {
 public:
  explicit GaussianRng(uint64_t seed) : gen_(seed) {}

  double uniform01() {  // in (0, 1]
    return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
  }

  double gaussian();

 private:
  std::mt19937_64 gen_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

// Generates n_frames frames of the requested kind.
//
// ar1-field draws each frame as one row-major scan with rows chained:
//   y[0] ~ N(0, sigma2),  y[i] = rho * y[i-1] + sqrt(1 - rho^2) * sigma * w[i]
// and sample[i] = mean + y[i], so the lag-1 correlation along the scan is rho
// and the marginal variance is sigma2. Frames are independent draws from one
// seeded stream.
//
// moving-rect paints a mean+100 rectangle (size w/4 x h/4, first origin at
// (w/8, h/8)) over a flat mean background, displacing it by (motion_dx,
// motion_dy) each frame; the rectangle is clipped at the frame edges.
VideoSequence synthesize(const SyntheticSpec& spec, int width, int height, int n_frames);

}  // namespace mcrd

#endif
