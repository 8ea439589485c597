// Command-line front end for the mcrd shared library. Talks to the analysis
// core exclusively through the C API in mcrd.h.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mcrd.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidationFailed = 2;

struct CStr {
  char* ptr = nullptr;
  ~CStr() { mcrd_string_free(ptr); }
  std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

struct SequenceHandle {
  mcrd_sequence* ptr = nullptr;
  ~SequenceHandle() { mcrd_sequence_free(ptr); }
};

[[nodiscard]] bool check(mcrd_status status, const char* what) {
  if (status == MCRD_OK) return true;
  std::cerr << "error: " << what << ": " << mcrd_last_error() << " ["
            << mcrd_status_name(status) << "]\n";
  return false;
}

bool write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) {
    std::cerr << "error: cannot write '" << path.string() << "'\n";
    return false;
  }
  return true;
}

std::optional<std::string> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read '" << path.string() << "'\n";
    return std::nullopt;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Input selection shared by analyze and validate: either a raw 4:2:0 file or
// a synthetic spec.
struct InputOptions {
  std::string raw_path;
  std::string spec_path;
  std::string inline_kind;
  double rho = 0.5;
  double sigma2 = 25.0;
  double mean = 128.0;
  int dx = 0, dy = 0;
  uint64_t seed = 1;
  int width = 0, height = 0;
  int frames = 4;

  void attach(CLI::App* cmd, bool frames_matter) {
    auto* raw = cmd->add_option("--raw", raw_path, "raw planar 4:2:0 input file (Y then U,V)");
    auto* spec = cmd->add_option("--spec", spec_path, "synthetic source spec JSON file");
    auto* kind = cmd->add_option("--kind", inline_kind,
                                 "inline synthetic kind (ar1-field, moving-rect, white-noise, "
                                 "constant) instead of --spec");
    raw->excludes(spec)->excludes(kind);
    spec->excludes(kind);
    cmd->add_option("--width", width, "frame width in pixels")->required();
    cmd->add_option("--height", height, "frame height in pixels")->required();
    if (frames_matter)
      cmd->add_option("--frames", frames, "synthetic frame count")->capture_default_str();
    cmd->add_option("--rho", rho, "inline spec: lag-1 correlation")->capture_default_str();
    cmd->add_option("--sigma2", sigma2, "inline spec: marginal variance")->capture_default_str();
    cmd->add_option("--mean", mean, "inline spec: base intensity")->capture_default_str();
    cmd->add_option("--dx", dx, "inline spec: rectangle dx per frame")->capture_default_str();
    cmd->add_option("--dy", dy, "inline spec: rectangle dy per frame")->capture_default_str();
    cmd->add_option("--seed", seed, "inline spec: generator seed")->capture_default_str();
  }

  std::string inline_spec_json() const {
    nlohmann::ordered_json doc;
    doc["kind"] = inline_kind;
    doc["rho"] = rho;
    doc["sigma2"] = sigma2;
    doc["mean"] = mean;
    doc["motion"] = {dx, dy};
    doc["seed"] = seed;
    return doc.dump();
  }

  bool open(SequenceHandle& seq) const {
    if (!raw_path.empty())
      return check(mcrd_sequence_read_yuv420(raw_path.c_str(), width, height, &seq.ptr),
                   "reading input");
    std::string spec_json;
    if (!spec_path.empty()) {
      auto text = read_file(spec_path);
      if (!text) return false;
      spec_json = *text;
    } else if (!inline_kind.empty()) {
      spec_json = inline_spec_json();
    } else {
      std::cerr << "error: give one of --raw, --spec or --kind\n";
      return false;
    }
    return check(mcrd_sequence_synthesize(spec_json.c_str(), width, height, frames, &seq.ptr),
                 "synthesizing input");
  }
};

struct AnalyzeOptions {
  mcrd_analyze_config cfg;

  AnalyzeOptions() { mcrd_analyze_config_init(&cfg); }

  void attach(CLI::App* cmd) {
    cmd->add_option("--block-w", cfg.block_w, "block width")->capture_default_str();
    cmd->add_option("--block-h", cfg.block_h, "block height")->capture_default_str();
    cmd->add_option("--tg", cfg.t_g, "pixel activity threshold (strict >)")
        ->capture_default_str();
    cmd->add_option("--tp", cfg.t_p, "block activity threshold; -1 means block_area/8")
        ->capture_default_str();
    cmd->add_option("--range", cfg.search_range, "motion search range")->capture_default_str();
    cmd->add_option("--mv-bits", cfg.mv_bits, "bits per motion vector; 0 means fixed-length code")
        ->capture_default_str();
    cmd->add_option("--bins", cfg.fit_bins, "histogram bins for the Gaussian fit")
        ->capture_default_str();
  }
};

int run_synth(const InputOptions& in, const std::string& out_path) {
  SequenceHandle seq;
  InputOptions synth_in = in;
  if (synth_in.raw_path.empty() && synth_in.spec_path.empty() && synth_in.inline_kind.empty())
    synth_in.inline_kind = "ar1-field";
  if (!synth_in.open(seq)) return kExitUsage;
  if (!check(mcrd_sequence_write_yuv420(seq.ptr, out_path.c_str()), "writing output"))
    return kExitUsage;
  std::cout << "wrote " << mcrd_sequence_frame_count(seq.ptr) << " frames ("
            << mcrd_sequence_width(seq.ptr) << "x" << mcrd_sequence_height(seq.ptr) << ") to "
            << out_path << "\n";
  return kExitOk;
}

int run_analyze(const InputOptions& in, const AnalyzeOptions& opts, const std::string& out_dir,
                bool per_pair, bool maps) {
  SequenceHandle seq;
  if (!in.open(seq)) return kExitUsage;

  mcrd_analysis* analysis = nullptr;
  if (!check(mcrd_analyze(seq.ptr, &opts.cfg, &analysis), "analyzing")) return kExitUsage;

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  const std::filesystem::path dir(out_dir);

  CStr params_json, fit_csv, diagnostics;
  bool ok = check(mcrd_analysis_params_json(analysis, &params_json.ptr), "serializing params") &&
            check(mcrd_analysis_fit_csv(analysis, &fit_csv.ptr), "serializing fit") &&
            check(mcrd_analysis_diagnostics_json(analysis, &diagnostics.ptr), "diagnostics");
  ok = ok && write_file(dir / "params.json", params_json.str()) &&
       write_file(dir / "fit.csv", fit_csv.str());
  if (ok && per_pair) {
    CStr pairs_csv;
    ok = check(mcrd_analysis_per_pair_csv(analysis, &pairs_csv.ptr), "serializing pair stats") &&
         write_file(dir / "pairs.csv", pairs_csv.str());
  }
  if (ok && maps) {
    const int32_t pairs = mcrd_analysis_pair_count(analysis);
    for (int32_t i = 0; ok && i < pairs; ++i) {
      char name[64];
      CStr activity, motion;
      ok = check(mcrd_analysis_activity_json(analysis, i, &activity.ptr), "activity map") &&
           check(mcrd_analysis_motion_json(analysis, i, &motion.ptr), "motion field");
      std::snprintf(name, sizeof(name), "activity_%03d.json", i);
      ok = ok && write_file(dir / name, activity.str());
      std::snprintf(name, sizeof(name), "motion_%03d.json", i);
      ok = ok && write_file(dir / name, motion.str());
    }
  }
  if (ok) {
    std::cout << "analyzed " << mcrd_analysis_pair_count(analysis) << " frame pair(s)\n"
              << params_json.str() << "diagnostics:\n"
              << diagnostics.str() << "wrote " << (dir / "params.json").string() << ", "
              << (dir / "fit.csv").string() << (per_pair ? ", pairs.csv" : "") << "\n";
  }
  mcrd_analysis_free(analysis);
  return ok ? kExitOk : kExitUsage;
}

int run_curves(const std::string& params_path, const mcrd_model_params& direct, bool have_direct,
               double d_min, double d_max, int points, bool include_mv,
               const std::string& out_path) {
  mcrd_model_params params;
  if (!params_path.empty()) {
    auto text = read_file(params_path);
    if (!text) return kExitUsage;
    if (!check(mcrd_params_from_json(text->c_str(), &params), "parsing params")) return kExitUsage;
  } else if (have_direct) {
    params = direct;
  } else {
    std::cerr << "error: give --params or the --sigma2-a/--sigma2-i/--rho-i/--lambda-m set\n";
    return kExitUsage;
  }

  CStr csv;
  if (!check(mcrd_curves_csv(&params, d_min, d_max, points, include_mv ? 1 : 0, &csv.ptr),
             "generating curves"))
    return kExitUsage;
  if (!write_file(out_path, csv.str())) return kExitUsage;
  std::cout << "wrote " << out_path << "\n";
  return kExitOk;
}

int run_validate(const InputOptions& in, const AnalyzeOptions& opts,
                 const std::vector<double>& steps, double d_min, double d_max, int points,
                 double slack, const std::string& out_dir) {
  SequenceHandle seq;
  if (!in.open(seq)) return kExitUsage;

  mcrd_validation* validation = nullptr;
  const mcrd_status status =
      mcrd_validate(seq.ptr, &opts.cfg, steps.empty() ? nullptr : steps.data(),
                    static_cast<int32_t>(steps.size()), d_min, d_max, points, slack, &validation);
  if (!check(status, "validating")) return kExitUsage;

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  const std::filesystem::path dir(out_dir);

  CStr csv, params_json, report;
  bool ok = check(mcrd_validation_csv(validation, &csv.ptr), "serializing results") &&
            check(mcrd_validation_params_json(validation, &params_json.ptr),
                  "serializing params") &&
            check(mcrd_validation_report(validation, &report.ptr), "serializing report");
  ok = ok && write_file(dir / "validate.csv", csv.str()) &&
       write_file(dir / "params.json", params_json.str());
  if (!ok) {
    mcrd_validation_free(validation);
    return kExitUsage;
  }
  std::cout << report.str() << "wrote " << (dir / "validate.csv").string() << ", "
            << (dir / "params.json").string() << "\n";
  const bool passed = mcrd_validation_passed(validation) != 0;
  mcrd_validation_free(validation);
  return passed ? kExitOk : kExitValidationFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rate-distortion analysis of raw video via conditional motion estimation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", []() { return std::string(mcrd_version()); });

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic test sequence as raw 4:2:0");
  InputOptions synth_in;
  std::string synth_out = "out.yuv";
  synth_in.attach(synth, true);
  synth->add_option("--out", synth_out, "output file")->capture_default_str();

  // analyze
  auto* analyze = app.add_subcommand(
      "analyze", "estimate model parameters from a sequence; writes params.json and fit.csv");
  InputOptions analyze_in;
  AnalyzeOptions analyze_opts;
  std::string analyze_out = ".";
  bool per_pair = false;
  bool maps = false;
  analyze_in.attach(analyze, true);
  analyze_opts.attach(analyze);
  analyze->add_option("--out", analyze_out, "output directory")->capture_default_str();
  analyze->add_flag("--per-pair", per_pair, "also write per-frame-pair statistics (pairs.csv)");
  analyze->add_flag("--maps", maps,
                    "also write per-pair activity maps and motion fields as JSON");

  // curves
  auto* curves = app.add_subcommand(
      "curves", "evaluate the theoretical rate-distortion curves for a parameter set");
  std::string curves_params_path;
  mcrd_model_params direct;
  direct.sigma2_a = 0.0;
  direct.sigma2_i = 0.0;
  direct.rho_i = 0.0;
  direct.lambda_m = 0.0;
  direct.b_m = 10;
  direct.block_w = 16;
  direct.block_h = 16;
  double d_min = 0.1, d_max = 100.0, slack = 0.05;
  int points = 50;
  bool include_mv = false;
  std::string curves_out = "curves.csv";
  auto* params_opt = curves->add_option("--params", curves_params_path,
                                        "params.json produced by analyze/validate");
  auto* sa = curves->add_option("--sigma2-a", direct.sigma2_a, "active-stream variance");
  auto* si = curves->add_option("--sigma2-i", direct.sigma2_i, "inactive-stream variance");
  auto* ri = curves->add_option("--rho-i", direct.rho_i, "inactive-stream lag-1 correlation");
  auto* lm = curves->add_option("--lambda-m", direct.lambda_m, "fraction of active blocks");
  curves->add_option("--b-m", direct.b_m, "bits per motion vector")->capture_default_str();
  curves->add_option("--block-w", direct.block_w, "block width")->capture_default_str();
  curves->add_option("--block-h", direct.block_h, "block height")->capture_default_str();
  for (auto* opt : {sa, si, ri, lm}) opt->excludes(params_opt);
  curves->add_option("--d-min", d_min, "smallest distortion")->capture_default_str();
  curves->add_option("--d-max", d_max, "largest distortion")->capture_default_str();
  curves->add_option("--points", points, "points per curve")->capture_default_str();
  curves->add_flag("--include-mv", include_mv, "charge motion-vector bits to the combined curve");
  curves->add_option("--out", curves_out, "output CSV file")->capture_default_str();

  // validate
  auto* validate = app.add_subcommand(
      "validate",
      "analyze, sweep the built-in quantize-and-measure coder, and check every empirical "
      "point against the theoretical rate at its distortion (exit 2 on violation)");
  InputOptions validate_in;
  AnalyzeOptions validate_opts;
  std::vector<double> steps;
  double v_d_min = 0.1, v_d_max = 100.0;
  int v_points = 50;
  std::string validate_out = ".";
  validate_in.attach(validate, true);
  validate_opts.attach(validate);
  validate->add_option("--steps", steps, "quantizer step sweep (default: built-in 12-step sweep)");
  validate->add_option("--d-min", v_d_min, "smallest curve distortion")->capture_default_str();
  validate->add_option("--d-max", v_d_max, "largest curve distortion")->capture_default_str();
  validate->add_option("--points", v_points, "points per theoretical curve")
      ->capture_default_str();
  validate->add_option("--slack", slack, "allowed shortfall below the bound, bits/pixel")
      ->capture_default_str();
  validate->add_option("--out", validate_out, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (synth->parsed()) return run_synth(synth_in, synth_out);
  if (analyze->parsed()) return run_analyze(analyze_in, analyze_opts, analyze_out, per_pair, maps);
  if (curves->parsed()) {
    const bool have_direct = sa->count() > 0 || si->count() > 0 || ri->count() > 0 ||
                             lm->count() > 0;
    return run_curves(curves_params_path, direct, have_direct, d_min, d_max, points, include_mv,
                      curves_out);
  }
  if (validate->parsed())
    return run_validate(validate_in, validate_opts, steps, v_d_min, v_d_max, v_points, slack,
                        validate_out);
  return kExitUsage;
}
