#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "core/stats.hpp"
#include "core/synth.hpp"
#include "oracles.hpp"

using namespace mcrd;

namespace {

// All-inactive scaffolding around a frame-difference stream so the estimator
// can be exercised directly.
struct Scaffold {
  ActivityMap map;
  MotionField field;
};

Scaffold all_inactive(int frame_w, int frame_h, int block) {
  Scaffold s;
  s.map.grid = BlockGrid::for_frame(frame_w, frame_h, block, block);
  s.map.frame_width = frame_w;
  s.map.frame_height = frame_h;
  s.map.labels.assign(static_cast<size_t>(s.map.grid.block_count()), 0);
  s.map.pixel_mask.assign(static_cast<size_t>(frame_w) * frame_h, 0);
  s.map.lambda_m = 0.0;
  s.field.grid = s.map.grid;
  s.field.search_range = 15;
  s.field.b_m = 10;
  s.field.vectors.assign(static_cast<size_t>(s.map.grid.block_count()), std::nullopt);
  return s;
}

// Block-grouped copy of a frame (the ResidualSet layout).
std::vector<double> block_grouped(const Frame& f, int block) {
  std::vector<double> out;
  out.reserve(f.samples.size());
  for (int by = 0; by + block <= f.height; by += block)
    for (int bx = 0; bx + block <= f.width; bx += block)
      for (int y = by; y < by + block; ++y)
        for (int x = bx; x < bx + block; ++x) out.push_back(f.at(x, y));
  return out;
}

}  // namespace

TEST_CASE("population variance") {
  CHECK(population_variance(std::vector<double>{}) == 0.0);
  CHECK(population_variance(std::vector<double>{5.0, 5.0, 5.0}) == 0.0);
  // population convention: divide by n
  CHECK(population_variance(std::vector<double>{0.0, 2.0}) == doctest::Approx(1.0));
  const std::vector<double> xs{1.0, -3.0, 4.0, 0.5, -2.25, 7.0};
  CHECK(population_variance(xs) == doctest::Approx(oracles::naive_variance(xs)).epsilon(1e-12));
}

TEST_CASE("zero frame-difference stream gives zero variance and correlation") {
  const Scaffold s = all_inactive(32, 32, 16);
  ResidualSet res;
  res.fd_samples.assign(32 * 32, 0.0);
  const ModelParams p = estimate_params(res, s.map, s.field);
  CHECK(p.sigma2_i == 0.0);
  CHECK(p.rho_i == 0.0);
  CHECK(p.sigma2_a == 0.0);
  CHECK(p.lambda_m == 0.0);
  CHECK(p.b_m == 10);
  CHECK(p.block_w == 16);
}

TEST_CASE("estimator recovers generator statistics from an ar1 field") {
  SyntheticSpec spec;
  spec.kind = SynthKind::ar1_field;
  spec.rho = 0.9;
  spec.sigma2 = 25.0;
  spec.mean = 128.0;
  spec.seed = 17;
  const VideoSequence seq = synthesize(spec, 512, 512, 1);

  // One frame pair against a zero anchor, all blocks inactive, so the
  // frame-difference stream is the field itself.
  const Scaffold s = all_inactive(512, 512, 16);
  const Frame anchor(512, 512, 0.0);
  const ResidualSet res = extract_residuals(anchor, seq.frames[0], s.map, s.field);
  const ModelParams p = estimate_params(res, s.map, s.field);
  CHECK(p.rho_i == doctest::Approx(0.9).epsilon(0.023));
  CHECK(p.sigma2_i == doctest::Approx(25.0).epsilon(0.05));

  // Cross-check the lag-1 estimator against a naive paired-sample oracle on
  // the same within-row pairs.
  std::vector<double> first, second;
  const auto& xs = res.fd_samples;
  const size_t area = 256;
  for (size_t b = 0; b + area <= xs.size(); b += area)
    for (int r = 0; r < 16; ++r)
      for (int c = 0; c + 1 < 16; ++c) {
        first.push_back(xs[b + static_cast<size_t>(r) * 16 + c]);
        second.push_back(xs[b + static_cast<size_t>(r) * 16 + c + 1]);
      }
  CHECK(p.rho_i == doctest::Approx(oracles::naive_pearson(first, second)).epsilon(1e-10));
}

TEST_CASE("white noise decorrelates") {
  SyntheticSpec spec;
  spec.kind = SynthKind::white_noise;
  spec.sigma2 = 25.0;
  spec.seed = 23;
  const VideoSequence seq = synthesize(spec, 512, 512, 1);
  const std::vector<double> grouped = block_grouped(seq.frames[0], 16);
  CHECK(std::abs(block_row_lag1_correlation(grouped, 16, 16)) < 0.02);
}

TEST_CASE("variance and correlation transform as expected under affine maps") {
  SyntheticSpec spec;
  spec.kind = SynthKind::ar1_field;
  spec.rho = 0.6;
  spec.sigma2 = 9.0;
  spec.seed = 5;
  const VideoSequence seq = synthesize(spec, 64, 64, 1);
  std::vector<double> xs = block_grouped(seq.frames[0], 16);

  const double var0 = population_variance(xs);
  const double rho0 = block_row_lag1_correlation(xs, 16, 16);

  std::vector<double> shifted = xs, scaled = xs;
  for (double& x : shifted) x += 1234.5;
  for (double& x : scaled) x *= -3.0;

  CHECK(population_variance(shifted) == doctest::Approx(var0).epsilon(1e-9));
  CHECK(block_row_lag1_correlation(shifted, 16, 16) == doctest::Approx(rho0).epsilon(1e-9));
  CHECK(population_variance(scaled) == doctest::Approx(9.0 * var0).epsilon(1e-12));
  CHECK(block_row_lag1_correlation(scaled, 16, 16) == doctest::Approx(rho0).epsilon(1e-12));
}

TEST_CASE("gauss-markov fit accepts gaussian data and rejects a two-point law") {
  SUBCASE("matched gaussian has tiny divergence") {
    GaussianRng rng(99);
    ResidualSet res;
    res.fd_samples.resize(1'000'000);
    for (double& x : res.fd_samples) x = 5.0 * rng.gaussian();
    const FitReport fit = fit_gauss_markov(res, 64);
    CHECK(fit.fitted_sigma2 == doctest::Approx(25.0).epsilon(0.02));
    CHECK(fit.kl_divergence >= 0.0);
    CHECK(fit.kl_divergence < 0.02);
    CHECK_FALSE(fit.degenerate);

    // densities integrate to one over the binned support
    double mass = 0.0;
    const double width = fit.bin_centers[2] - fit.bin_centers[1];
    for (double d : fit.empirical_density) mass += d * width;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("two-point distribution diverges") {
    ResidualSet res;
    for (int i = 0; i < 5000; ++i) {
      res.fd_samples.push_back(3.0);
      res.fd_samples.push_back(-3.0);
    }
    const FitReport fit = fit_gauss_markov(res, 64);
    CHECK(fit.kl_divergence > 1.0);
  }
  SUBCASE("repeated value is degenerate") {
    ResidualSet res;
    res.fd_samples.assign(100, 7.0);
    const FitReport fit = fit_gauss_markov(res, 64);
    CHECK(fit.degenerate);
    CHECK(fit.fitted_sigma2 == 0.0);
  }
  SUBCASE("errors") {
    ResidualSet res;
    CHECK_THROWS_AS(fit_gauss_markov(res, 64), error);
    res.fd_samples.assign(10, 1.0);
    CHECK_THROWS_AS(fit_gauss_markov(res, 4), error);
  }
}

TEST_CASE("fit divergence is never negative") {
  GaussianRng rng(2718);
  for (int rep = 0; rep < 20; ++rep) {
    ResidualSet res;
    res.fd_samples.resize(2000);
    // mix of scales and offsets, deliberately non-gaussian half the time
    const double scale = 0.5 + 10.0 * rng.uniform01();
    for (size_t i = 0; i < res.fd_samples.size(); ++i) {
      double x = scale * rng.gaussian();
      if (rep % 2 == 0 && i % 3 == 0) x = x * x - scale;
      res.fd_samples[i] = x;
    }
    const FitReport fit = fit_gauss_markov(res, 16);
    CHECK(fit.kl_divergence >= 0.0);
  }
}

TEST_CASE("fit CSV has the documented columns") {
  GaussianRng rng(1);
  ResidualSet res;
  res.fd_samples.resize(10000);
  for (double& x : res.fd_samples) x = rng.gaussian();
  const FitReport fit = fit_gauss_markov(res, 32);
  const std::string csv = fit.to_csv();
  CHECK(csv.rfind("bin_center,empirical_density,gaussian_density\n", 0) == 0);
  // header + interior bins + two overflow bins
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 32 + 2);
}

TEST_CASE("model params JSON uses exactly the documented fields") {
  ModelParams p;
  p.sigma2_a = 50.0;
  p.sigma2_i = 20.0;
  p.rho_i = 0.59;
  p.lambda_m = 0.05;
  p.b_m = 10;
  p.block_w = 16;
  p.block_h = 16;
  const std::string json = p.to_json();
  const ModelParams back = ModelParams::from_json(json);
  CHECK(back.sigma2_a == p.sigma2_a);
  CHECK(back.sigma2_i == p.sigma2_i);
  CHECK(back.rho_i == p.rho_i);
  CHECK(back.lambda_m == p.lambda_m);
  CHECK(back.b_m == p.b_m);
  CHECK(back.block_w == p.block_w);
  CHECK(back.block_h == p.block_h);

  CHECK_THROWS_AS(ModelParams::from_json("{}"), error);
  CHECK_THROWS_AS(ModelParams::from_json("nope"), error);
}
