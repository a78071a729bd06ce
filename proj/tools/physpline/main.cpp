#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "physpline/errors.hpp"
#include "physpline/fit.hpp"
#include "physpline/io.hpp"
#include "physpline/metrics.hpp"
#include "physpline/scenario.hpp"

namespace {

namespace fs = std::filesystem;
using namespace physpline;

// Exit codes: 0 success, 1 unexpected failure, 2 usage, 3 I/O,
// 4 malformed file, 5 unanchored problem, 6 singular system.
int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const SingularSystemError*>(&e)) return 6;
  if (dynamic_cast<const UnanchoredProblemError*>(&e)) return 5;
  if (dynamic_cast<const ParseError*>(&e)) return 4;
  if (dynamic_cast<const IoError*>(&e)) return 3;
  if (dynamic_cast<const ArgumentError*>(&e)) return 2;
  return 1;
}

struct FitOptions {
  std::vector<std::string> inputs;
  std::string config_path;
  std::string model_path;
  std::string output_path;
  std::string output_dir;
  double resample_dt = 0.0;
  std::string resample_times_path;
  bool two_pass = false;
  bool profile = false;
  bool verbose = false;
};

struct ResampleOptions {
  std::string model_path;
  std::string output_path = "resampled.csv";
  double dt = 0.0;
  std::string times_path;
};

struct SynthOptions {
  std::string scenario;
  std::string truth_path = "truth.csv";
  std::string corrupted_path = "corrupted.csv";
  ScenarioParams params;
};

struct EvalOptions {
  std::string estimate_path;
  std::string truth_path;
  std::string format = "text";
  double edge_window = 1.0;
};

std::vector<double> read_times_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string() + " for reading");
  }
  std::vector<double> times;
  std::string token;
  while (in >> token) {
    try {
      std::size_t used = 0;
      const double value = std::stod(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      times.push_back(value);
    } catch (const std::exception&) {
      throw ParseError(path.string() + ": cannot parse time \"" + token +
                       "\"");
    }
  }
  if (times.empty()) {
    throw ParseError(path.string() + ": no times in file");
  }
  return times;
}

std::vector<double> uniform_times(double dt, double t_end) {
  std::vector<double> times;
  for (std::size_t i = 0;; ++i) {
    const double t = static_cast<double>(i) * dt;
    if (t > t_end + 1e-9) break;
    times.push_back(t);
  }
  return times;
}

void print_report(const std::string& label, const FitReport& report,
                  const FitOptions& opt) {
  std::printf("%s: %zu measurements, %zu knots%s%s\n", label.c_str(),
              report.measurement_count, report.knot_count,
              report.heading_fitted ? ", heading fitted" : "",
              report.second_pass ? ", second pass" : "");
  for (const FamilyResidual& r : report.residuals) {
    std::printf("  residual %-12s rms %-12.6g max %-12.6g (%zu)\n",
                r.family.c_str(), r.rms, r.max_abs, r.count);
  }
  if (opt.profile) {
    std::printf("  time: assembly %.3f s, solve %.3f s, heading %.3f s\n",
                report.assembly_seconds, report.solve_seconds,
                report.heading_seconds);
  }
  if (opt.verbose) {
    for (const TimeInterval& iv : report.standstill) {
      std::printf("  standstill [%.3f, %.3f] s\n", iv.t_start, iv.t_end);
    }
    if (report.skipped_heading_accel_samples > 0) {
      std::printf("  heading fit skipped %zu slow acceleration samples\n",
                  report.skipped_heading_accel_samples);
    }
  }
}

// Fits one track and writes its outputs; returns the report for printing.
FitReport fit_one(const fs::path& input, const FitOptions& opt,
                  const FitConfig& config, const fs::path& model_out,
                  const fs::path& states_out) {
  const MeasurementSet meas = load_track(input);
  FitResult result = fit_trajectory(meas, config, opt.two_pass);

  if (!model_out.empty()) {
    save_model(model_out, result.spline, config);
  }
  if (!states_out.empty()) {
    std::vector<double> times;
    if (!opt.resample_times_path.empty()) {
      times = read_times_file(opt.resample_times_path);
      for (double& t : times) t -= result.spline.t_offset();
    } else if (opt.resample_dt > 0.0) {
      times = uniform_times(opt.resample_dt, result.spline.grid().end());
    } else {
      for (const Measurement& m : meas.all()) {
        if (times.empty() || m.t > times.back()) times.push_back(m.t);
      }
    }
    const auto states = result.spline.evaluate_batch(times);
    const HeadingSpline* heading = result.spline.heading_model()
                                       ? &*result.spline.heading_model()
                                       : nullptr;
    write_states(states_out, states, result.spline.t_offset(), heading);
  }
  return result.report;
}

int cmd_fit(const FitOptions& opt) {
  FitConfig config;
  if (!opt.config_path.empty()) {
    config = load_config(opt.config_path);
  }

  const bool multi = opt.inputs.size() > 1;
  if (multi && opt.output_dir.empty()) {
    std::cerr << "error: multiple inputs need --output-dir\n";
    return 2;
  }
  if (multi && (!opt.model_path.empty() || !opt.output_path.empty())) {
    std::cerr << "error: --model/--output apply to a single input; use "
                 "--output-dir for batches\n";
    return 2;
  }
  if (!opt.output_dir.empty()) {
    std::error_code ec;
    fs::create_directories(opt.output_dir, ec);
    if (ec) {
      std::cerr << "error: cannot create " << opt.output_dir << ": "
                << ec.message() << "\n";
      return 3;
    }
  }

  struct Job {
    fs::path input;
    fs::path model_out;
    fs::path states_out;
    std::future<FitReport> result;
  };
  std::vector<Job> jobs;
  for (const std::string& input : opt.inputs) {
    Job job;
    job.input = input;
    if (!opt.output_dir.empty()) {
      const fs::path dir(opt.output_dir);
      const std::string stem = job.input.stem().string();
      job.model_out = dir / (stem + ".model");
      job.states_out = dir / (stem + "_states.csv");
    } else {
      job.model_out = opt.model_path;
      job.states_out = opt.output_path;
    }
    jobs.push_back(std::move(job));
  }

  for (Job& job : jobs) {
    job.result = std::async(std::launch::async, [&job, &opt, &config]() {
      return fit_one(job.input, opt, config, job.model_out, job.states_out);
    });
  }

  int exit_code = 0;
  for (Job& job : jobs) {
    try {
      const FitReport report = job.result.get();
      print_report(job.input.string(), report, opt);
    } catch (const std::exception& e) {
      std::cerr << "error: " << job.input.string() << ": " << e.what()
                << "\n";
      if (exit_code == 0) exit_code = exit_code_for(e);
    }
  }
  return exit_code;
}

int cmd_resample(const ResampleOptions& opt) {
  const LoadedModel loaded = load_model(opt.model_path);

  std::vector<double> times;
  if (!opt.times_path.empty()) {
    times = read_times_file(opt.times_path);
    for (double& t : times) t -= loaded.spline.t_offset();
  } else {
    times = uniform_times(opt.dt, loaded.spline.grid().end());
  }

  const auto states = loaded.spline.evaluate_batch(times);
  const HeadingSpline* heading = loaded.spline.heading_model()
                                     ? &*loaded.spline.heading_model()
                                     : nullptr;
  write_states(opt.output_path, states, loaded.spline.t_offset(), heading);
  std::printf("wrote %zu states to %s\n", states.size(),
              opt.output_path.c_str());
  return 0;
}

int cmd_synth(const SynthOptions& opt) {
  const Scenario scenario = parse_scenario(opt.scenario);
  const SyntheticTrack track = synthesize(scenario, opt.params);
  write_track(opt.truth_path, track.truth);
  write_track(opt.corrupted_path, track.corrupted);
  std::printf("wrote %zu truth rows to %s and %zu corrupted rows to %s\n",
              track.truth.size(), opt.truth_path.c_str(),
              track.corrupted.size(), opt.corrupted_path.c_str());
  return 0;
}

int cmd_eval(const EvalOptions& opt) {
  const auto estimate = load_states(opt.estimate_path);
  const auto truth = load_states(opt.truth_path);
  const EvalReport report = evaluate_tracks(estimate, truth, opt.edge_window);
  if (opt.format == "csv") {
    std::fputs(format_report_csv(report).c_str(), stdout);
  } else {
    std::fputs(format_report_text(report).c_str(), stdout);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "physpline: denoise recorded 2D trajectories with a physical spline "
      "(piecewise-linear acceleration, exactly integrated). Angles are "
      "radians everywhere."};
  app.require_subcommand(1);

  FitOptions fit_opt;
  CLI::App* fit = app.add_subcommand(
      "fit", "Fit tracks and write models and/or resampled states");
  fit->add_option("inputs", fit_opt.inputs, "Measurement CSV files")
      ->required()
      ->check(CLI::ExistingFile);
  fit->add_option("--config", fit_opt.config_path,
                  "Key-value config file overriding fit defaults")
      ->check(CLI::ExistingFile);
  fit->add_option("--model", fit_opt.model_path,
                  "Write the fitted model here (single input)");
  fit->add_option("--output", fit_opt.output_path,
                  "Write resampled states here (single input); without a "
                  "resample option, states at the measurement times");
  fit->add_option("--output-dir", fit_opt.output_dir,
                  "Write <stem>.model and <stem>_states.csv per input here");
  auto* dt_opt = fit->add_option("--resample-dt", fit_opt.resample_dt,
                                 "Uniform output step, s")
                     ->check(CLI::PositiveNumber);
  fit->add_option("--resample-times", fit_opt.resample_times_path,
                  "File with one absolute output timestamp per line")
      ->check(CLI::ExistingFile)
      ->excludes(dt_opt);
  fit->add_flag("--two-pass", fit_opt.two_pass,
                "Refit using the fitted heading for the lon/lat split and "
                "the heading-direction cost");
  fit->add_flag("--profile", fit_opt.profile,
                "Report assembly/solve/heading time split");
  fit->add_flag("--verbose", fit_opt.verbose,
                "Report standstill intervals and skipped samples");

  ResampleOptions res_opt;
  CLI::App* resample = app.add_subcommand(
      "resample", "Evaluate a saved model on a time vector");
  resample->add_option("model", res_opt.model_path, "Model file")
      ->required()
      ->check(CLI::ExistingFile);
  auto* res_dt = resample->add_option("--dt", res_opt.dt,
                                      "Uniform output step, s")
                     ->check(CLI::PositiveNumber);
  auto* res_times =
      resample->add_option("--times", res_opt.times_path,
                           "File with one absolute timestamp per line")
          ->check(CLI::ExistingFile)
          ->excludes(res_dt);
  res_dt->excludes(res_times);
  resample->add_option("--output", res_opt.output_path, "Output CSV path");

  SynthOptions synth_opt;
  CLI::App* synth = app.add_subcommand(
      "synth", "Generate a synthetic scenario with ground truth");
  synth->add_option("scenario", synth_opt.scenario,
                    "circle_sine, lon_jump, const_accel, standstill or turn")
      ->required();
  synth->add_option("--truth", synth_opt.truth_path, "Truth CSV path");
  synth->add_option("--corrupted", synth_opt.corrupted_path,
                    "Corrupted measurement CSV path");
  synth->add_option("--noise", synth_opt.params.noise_pos,
                    "Position noise standard deviation, m");
  synth->add_option("--noise-psi", synth_opt.params.noise_psi,
                    "Heading noise standard deviation, rad");
  synth->add_option("--seed", synth_opt.params.seed, "RNG seed");
  synth->add_option("--rate", synth_opt.params.rate_hz, "Sample rate, Hz");
  synth->add_option("--duration", synth_opt.params.duration,
                    "Track duration, s (0 = scenario default)");
  synth->add_option("--radius", synth_opt.params.radius,
                    "circle_sine radius, m");
  synth->add_option("--speed", synth_opt.params.speed,
                    "circle_sine/turn speed, m/s");
  synth->add_option("--amp", synth_opt.params.sine_amp,
                    "circle_sine radial amplitude, m");
  synth->add_option("--freq", synth_opt.params.sine_freq,
                    "circle_sine frequency, Hz");
  synth->add_option("--jump", synth_opt.params.jump_size,
                    "lon_jump step size, m");
  synth->add_option("--jump-speed", synth_opt.params.jump_speed,
                    "lon_jump cruise speed, m/s");
  synth->add_option("--turn-radius", synth_opt.params.turn_radius,
                    "turn arc radius, m");
  synth->add_option("--straight", synth_opt.params.straight_duration,
                    "turn straight-phase duration, s");

  EvalOptions eval_opt;
  CLI::App* eval = app.add_subcommand(
      "eval", "Compare an estimate CSV against a ground-truth CSV");
  eval->add_option("estimate", eval_opt.estimate_path, "Estimate CSV")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("truth", eval_opt.truth_path, "Ground-truth CSV")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--format", eval_opt.format, "text or csv")
      ->check(CLI::IsMember({"text", "csv"}));
  eval->add_option("--edge-window", eval_opt.edge_window,
                   "Endpoint window reported separately, s")
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*fit) return cmd_fit(fit_opt);
    if (*resample) {
      if (res_opt.dt <= 0.0 && res_opt.times_path.empty()) {
        std::cerr << "error: resample needs --dt or --times\n";
        return 2;
      }
      return cmd_resample(res_opt);
    }
    if (*synth) return cmd_synth(synth_opt);
    if (*eval) return cmd_eval(eval_opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return 0;
}
