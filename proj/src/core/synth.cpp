#include "core/synth.hpp"

#include <cmath>
#include <numbers>

#include <json.hpp>

#include "core/errors.hpp"

namespace mcrd {

const char* synth_kind_name(SynthKind kind) {
  switch (kind) {
    case SynthKind::ar1_field: return "ar1-field";
    case SynthKind::moving_rect: return "moving-rect";
    case SynthKind::white_noise: return "white-noise";
    case SynthKind::constant: return "constant";
  }
  return "?";
}

static SynthKind parse_kind(const std::string& name) {
  if (name == "ar1-field") return SynthKind::ar1_field;
  if (name == "moving-rect") return SynthKind::moving_rect;
  if (name == "white-noise") return SynthKind::white_noise;
  if (name == "constant") return SynthKind::constant;
  fail(errc::bad_config, "unknown synthetic kind '" + name +
                             "' (expected ar1-field, moving-rect, white-noise or constant)");
}

SyntheticSpec SyntheticSpec::from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(errc::malformed_input, std::string("invalid synthetic spec JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("kind"))
    fail(errc::malformed_input, "synthetic spec must be a JSON object with a \"kind\" field");

  SyntheticSpec spec;
  try {
    spec.kind = parse_kind(doc.at("kind").get<std::string>());
    if (doc.contains("rho")) spec.rho = doc.at("rho").get<double>();
    if (doc.contains("sigma2")) spec.sigma2 = doc.at("sigma2").get<double>();
    if (doc.contains("mean")) spec.mean = doc.at("mean").get<double>();
    if (doc.contains("motion")) {
      const auto& m = doc.at("motion");
      if (!m.is_array() || m.size() != 2)
        fail(errc::malformed_input, "\"motion\" must be a two-element [dx, dy] array");
      spec.motion_dx = m.at(0).get<int>();
      spec.motion_dy = m.at(1).get<int>();
    }
    if (doc.contains("seed")) spec.seed = doc.at("seed").get<uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    fail(errc::malformed_input, std::string("invalid synthetic spec field: ") + e.what());
  }
  if (!(spec.rho >= 0.0 && spec.rho < 1.0))
    fail(errc::bad_config, "rho must lie in [0, 1)");
  if (!(spec.sigma2 >= 0.0)) fail(errc::bad_config, "sigma2 must be >= 0");
  return spec;
}

std::string SyntheticSpec::to_json() const {
  nlohmann::ordered_json doc;
  doc["kind"] = synth_kind_name(kind);
  doc["rho"] = rho;
  doc["sigma2"] = sigma2;
  doc["mean"] = mean;
  doc["motion"] = {motion_dx, motion_dy};
  doc["seed"] = seed;
  return doc.dump(2) + "\n";
}

double GaussianRng::gaussian() {
  if (have_cached_) {
    have_cached_ = false;
    return cached_;
  }
  const double u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  cached_ = r * std::sin(t);
  have_cached_ = true;
  return r * std::cos(t);
}

static Frame ar1_frame(int width, int height, double rho, double sigma, double mean,
                       GaussianRng& rng) {
  Frame frame(width, height);
  const double innovation = std::sqrt(1.0 - rho * rho) * sigma;
  double y = sigma * rng.gaussian();  // stationary start
  frame.samples[0] = mean + y;
  for (size_t i = 1; i < frame.samples.size(); ++i) {
    y = rho * y + innovation * rng.gaussian();
    frame.samples[i] = mean + y;
  }
  return frame;
}

static void paint_rect(Frame& frame, int x0, int y0, int rect_w, int rect_h, double value) {
  const int xa = std::max(0, x0), xb = std::min(frame.width, x0 + rect_w);
  const int ya = std::max(0, y0), yb = std::min(frame.height, y0 + rect_h);
  for (int y = ya; y < yb; ++y)
    for (int x = xa; x < xb; ++x) frame.at(x, y) = value;
}

VideoSequence synthesize(const SyntheticSpec& spec, int width, int height, int n_frames) {
  if (width <= 0 || height <= 0) fail(errc::bad_config, "frame dimensions must be positive");
  if (n_frames < 1) fail(errc::bad_config, "n_frames must be >= 1");
  if (!(spec.rho >= 0.0 && spec.rho < 1.0)) fail(errc::bad_config, "rho must lie in [0, 1)");
  if (!(spec.sigma2 >= 0.0)) fail(errc::bad_config, "sigma2 must be >= 0");

  const double sigma = std::sqrt(spec.sigma2);
  GaussianRng rng(spec.seed);
  VideoSequence seq;
  seq.frames.reserve(n_frames);

  switch (spec.kind) {
    case SynthKind::constant:
      for (int f = 0; f < n_frames; ++f) seq.frames.emplace_back(width, height, spec.mean);
      break;
    case SynthKind::white_noise:
      for (int f = 0; f < n_frames; ++f) {
        Frame frame(width, height);
        for (double& s : frame.samples) s = spec.mean + sigma * rng.gaussian();
        seq.frames.push_back(std::move(frame));
      }
      break;
    case SynthKind::ar1_field:
      for (int f = 0; f < n_frames; ++f)
        seq.frames.push_back(ar1_frame(width, height, spec.rho, sigma, spec.mean, rng));
      break;
    case SynthKind::moving_rect: {
      const int rect_w = std::max(1, width / 4);
      const int rect_h = std::max(1, height / 4);
      for (int f = 0; f < n_frames; ++f) {
        Frame frame(width, height, spec.mean);
        paint_rect(frame, width / 8 + f * spec.motion_dx, height / 8 + f * spec.motion_dy,
                   rect_w, rect_h, spec.mean + 100.0);
        seq.frames.push_back(std::move(frame));
      }
      break;
    }
  }
  return seq;
}

}  // namespace mcrd
