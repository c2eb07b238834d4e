// vds: command-line front end for the continuous variable-density sampling pipeline.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vds/calibration.hpp"
#include "vds/density.hpp"
#include "vds/error.hpp"
#include "vds/experiment.hpp"
#include "vds/io.hpp"
#include "vds/rng.hpp"
#include "vds/sampler.hpp"
#include "vds/trajectory.hpp"
#include "vds/tsp.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitStage = 3;

// Sub-stream indices of the master --seed.
constexpr std::uint64_t kStreamPoints = 1;
constexpr std::uint64_t kStreamTsp = 2;
constexpr std::uint64_t kStreamBeta = 3;

struct Failure {
  int exit_code;
  std::string stage;
  std::string code;
  std::string message;
};

template <class F>
auto guarded(int exit_code, const std::string& stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Failure&) {
    throw;
  } catch (const vds::Error& e) {
    throw Failure{exit_code, stage, std::string(vds::to_string(e.code())), e.what()};
  } catch (const std::exception& e) {
    throw Failure{exit_code, stage, "Exception", e.what()};
  }
}

/// Reading and validating user input: failures exit with 2.
template <class F>
auto input(const std::string& stage, F&& f) {
  return guarded(kExitUsage, stage, std::forward<F>(f));
}

/// A computation stage: failures exit with 3.
template <class F>
auto stage(const std::string& name, F&& f) {
  return guarded(kExitStage, name, std::forward<F>(f));
}

void print_error(const Failure& f) {
  ordered_json j;
  j["error"] = {{"stage", f.stage}, {"code", f.code}, {"message", f.message}};
  std::cerr << j.dump() << '\n';
}

void write_file(const fs::path& path, std::string_view text) {
  stage("write", [&] {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    vds::io::write_text(path, text);
  });
}

// ---------------------------------------------------------------------------
// --config expansion. The JSON object's keys are long option names; a nested
// object under the subcommand's name overrides the flat keys. Options given on
// the command line win over the file.

bool option_present(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(),
                     [&](const std::string& a) { return a == flag || a.starts_with(flag + "="); });
}

void append_json_option(std::vector<std::string>& args, const std::string& key, const ordered_json& value) {
  const std::string flag = "--" + key;
  auto scalar = [](const ordered_json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  if (value.is_boolean()) {
    if (value.get<bool>()) args.push_back(flag);
  } else if (value.is_array()) {
    if (value.empty()) return;
    args.push_back(flag);
    for (const auto& item : value) args.push_back(scalar(item));
  } else if (!value.is_null()) {
    args.push_back(flag);
    args.push_back(scalar(value));
  }
}

std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::optional<std::string> path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].starts_with("--config=")) path = args[i].substr(9);
  }
  if (!path) return args;
  const ordered_json doc = input("config", [&] {
    ordered_json j = ordered_json::parse(vds::io::read_text(*path));
    if (!j.is_object()) throw vds::Error(vds::ErrorCode::ConfigError, "config root must be a JSON object");
    return j;
  });
  const std::string sub = args.size() > 1 ? args[1] : std::string();
  std::vector<std::string> extra;
  auto add_from = [&](const ordered_json& obj) {
    for (const auto& [key, value] : obj.items()) {
      if (value.is_object() || key == "config") continue;
      if (option_present(args, "--" + key) || option_present(extra, "--" + key)) continue;
      append_json_option(extra, key, value);
    }
  };
  // Subcommand-specific keys first so they shadow the flat ones.
  if (doc.contains(sub) && doc[sub].is_object()) add_from(doc[sub]);
  add_from(doc);
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

// ---------------------------------------------------------------------------

struct DensityOptions {
  std::string spec = "uniform";
  int dim = 2;
  int resolution = 64;
};

void add_density_options(CLI::App* cmd, DensityOptions& o, const std::string& default_spec = "uniform") {
  o.spec = default_spec;
  cmd->add_option("--density", o.spec, "Density: 'uniform', 'radial:<decay>:<plateau_radius>' or a density file")
      ->capture_default_str();
  cmd->add_option("--dim", o.dim, "Dimension d (builtin densities)")->capture_default_str()->check(CLI::Range(2, 16));
  cmd->add_option("--resolution", o.resolution, "Grid resolution r (builtin densities)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

vds::DensityGrid load_density(const DensityOptions& o) {
  return input("density", [&] { return vds::io::density_from_spec(o.spec, o.dim, o.resolution); });
}

void add_tsp_options(CLI::App* cmd, vds::HeuristicConfig& cfg) {
  cmd->add_option("--neighbors", cfg.neighbor_list_size, "2-opt candidate list size")
      ->capture_default_str()
      ->check(CLI::Range(1, 1000));
  cmd->add_option("--passes", cfg.two_opt_max_passes, "Maximum 2-opt passes")->capture_default_str()->check(CLI::Range(0, 100000));
  cmd->add_option("--starts", cfg.starts, "Nearest-neighbour starts (0 = automatic)")->capture_default_str()->check(CLI::Range(0, 100000));
}

double resolve_beta(const std::optional<double>& beta, const std::optional<std::string>& calibration, int dim,
                    std::uint64_t seed, unsigned threads) {
  if (beta) {
    if (!(*beta > 0.0)) throw Failure{kExitUsage, "beta", "InvalidArgument", "--beta must be positive"};
    return *beta;
  }
  if (calibration) {
    const auto est = input("calibration", [&] { return vds::io::beta_from_json(vds::io::read_text(*calibration)); });
    if (est.dim != dim) {
      throw Failure{kExitUsage, "calibration", "DimensionMismatch",
                    "calibration is for d=" + std::to_string(est.dim) + ", pipeline uses d=" + std::to_string(dim)};
    }
    return est.beta;
  }
  return stage("calibrate", [&] {
    return vds::estimate_beta(dim, 10000, 20, vds::derive_seed(seed, kStreamBeta), {}, threads).beta;
  });
}

// ---------------------------------------------------------------------------

struct DensityCmd {
  DensityOptions density;
  std::string out;
  bool adjust = false;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("density", "Write a normalized density file");
    add_density_options(cmd, density);
    cmd->add_option("--out,-o", out, "Output density file")->required();
    cmd->add_flag("--adjust", adjust, "Write the drawing density target^(d/(d-1)) instead");
    cmd->add_option("--config", "JSON file with option values");
    cmd->callback([this] { run(); });
  }

  void run() {
    auto g = load_density(density);
    if (adjust) g = stage("adjust", [&] { return vds::tsp_adjusted_density(g); });
    write_file(out, vds::io::density_to_string(g));
    ordered_json j{{"dim", g.dim()}, {"resolution", g.resolution()}, {"integral", g.integral()}};
    std::cout << j.dump() << '\n';
  }
};

struct SampleCmd {
  DensityOptions density;
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  std::string out;
  bool adjust = false;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("sample", "Draw i.i.d. points from a density");
    add_density_options(cmd, density);
    cmd->add_option("-n,--count", n, "Number of points")->capture_default_str();
    cmd->add_option("--seed", seed, "Master seed (points use derived stream 1)")->capture_default_str();
    cmd->add_option("--out,-o", out, "Output points file")->required();
    cmd->add_flag("--adjust", adjust, "Draw from target^(d/(d-1))");
    cmd->add_option("--config", "JSON file with option values");
    cmd->callback([this] { run(); });
  }

  void run() {
    auto g = load_density(density);
    if (adjust) g = stage("adjust", [&] { return vds::tsp_adjusted_density(g); });
    const auto ps = stage("draw", [&] { return vds::draw_points(g, n, vds::derive_seed(seed, kStreamPoints)); });
    write_file(out, vds::io::points_to_string(ps));
    std::cout << ordered_json{{"points", ps.size()}, {"dim", ps.dim}}.dump() << '\n';
  }
};

struct TspCmd {
  std::string points;
  std::string out;
  std::string method = "heuristic";
  std::uint64_t seed = 0;
  vds::HeuristicConfig cfg;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("tsp", "Link points by an open TSP path");
    cmd->add_option("--points", points, "Input points file")->required();
    cmd->add_option("--out,-o", out, "Output tour file")->required();
    cmd->add_option("--method", method, "heuristic or exact")
        ->capture_default_str()
        ->check(CLI::IsMember({"heuristic", "exact"}));
    cmd->add_option("--seed", seed, "Master seed (heuristic uses derived stream 2)")->capture_default_str();
    add_tsp_options(cmd, cfg);
    cmd->add_option("--config", "JSON file with option values");
    cmd->callback([this] { run(); });
  }

  void run() {
    const auto ps = input("points", [&] { return vds::io::points_from_string(vds::io::read_text(points)); });
    cfg.seed = vds::derive_seed(seed, kStreamTsp);
    const auto tour = stage("solve", [&] {
      return method == "exact" ? vds::solve_exact(ps) : vds::solve_heuristic(ps, cfg);
    });
    write_file(out, vds::io::tour_to_string(tour));
    std::cout << ordered_json{{"points", ps.size()}, {"length", tour.length}}.dump() << '\n';
  }
};

struct TrajectoryCmd {
  std::string points;
  std::string tour;
  std::string out;
  std::optional<double> delta_t;
  std::string samples_out;
  int m = 4;
  std::string empirical_out;
  std::optional<std::string> target;
  DensityOptions density;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("trajectory", "Parameterize a tour, resample it and measure its occupation");
    cmd->add_option("--points", points, "Input points file")->required();
    cmd->add_option("--tour", tour, "Input tour file")->required();
    cmd->add_option("--out,-o", out, "Output trajectory file")->required();
    cmd->add_option("--delta-t", delta_t, "Resampling step (arc length)");
    cmd->add_option("--samples-out", samples_out, "Output file for resampled points (needs --delta-t)");
    cmd->add_option("-m,--partition", m, "Partition resolution m")->capture_default_str()->check(CLI::Range(1, 4096));
    cmd->add_option("--empirical-out", empirical_out, "Output file for the occupation distribution");
    cmd->add_option("--target", target, "Density to compare against (prints the TV distance)");
    cmd->add_option("--dim", density.dim, "Dimension for a builtin --target")->capture_default_str();
    cmd->add_option("--resolution", density.resolution, "Resolution for a builtin --target")->capture_default_str();
    cmd->add_option("--config", "JSON file with option values");
    cmd->callback([this] { run(); });
  }

  void run() {
    const auto ps = input("points", [&] { return vds::io::points_from_string(vds::io::read_text(points)); });
    const auto t = input("tour", [&] { return vds::io::tour_from_string(vds::io::read_text(tour)); });
    const auto traj = stage("parameterize", [&] { return vds::parameterize(ps, t); });
    write_file(out, vds::io::trajectory_to_string(traj));
    ordered_json summary{{"T", traj.total_length()}};
    if (!samples_out.empty() && !delta_t) {
      throw Failure{kExitUsage, "resample", "InvalidArgument", "--samples-out requires --delta-t"};
    }
    if (delta_t) {
      const auto samples = stage("resample", [&] { return vds::resample(traj, *delta_t); });
      summary["N_s"] = samples.size();
      if (!samples_out.empty()) write_file(samples_out, vds::io::points_to_string(samples));
    }
    const auto emp = stage("measure", [&] { return vds::empirical_distribution(traj, m); });
    if (!empirical_out.empty()) write_file(empirical_out, vds::io::empirical_to_string(emp));
    if (target) {
      density.spec = *target;
      const auto g = load_density(density);
      summary["tv"] = stage("measure", [&] { return vds::tv_distance(emp, vds::partition_masses(g, m)); });
    }
    std::cout << summary.dump() << '\n';
  }
};

struct CalibrateCmd {
  int dim = 2;
  std::size_t n = 10000;
  std::size_t trials = 20;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string out;
  vds::HeuristicConfig cfg;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("calibrate", "Estimate the TSP length constant beta(d) by Monte Carlo");
    cmd->add_option("--dim", dim, "Dimension d")->capture_default_str()->check(CLI::Range(2, 16));
    cmd->add_option("-n,--count", n, "Points per trial")->capture_default_str();
    cmd->add_option("--trials", trials, "Number of trials")->capture_default_str();
    cmd->add_option("--seed", seed, "Master seed (trial t uses derived stream t)")->capture_default_str();
    cmd->add_option("--threads", threads, "Worker threads (0 = all cores); results do not depend on it")
        ->capture_default_str();
    cmd->add_option("--out,-o", out, "Output JSON file");
    add_tsp_options(cmd, cfg);
    cmd->add_option("--config", "JSON file with option values");
    cmd->callback([this] { run(); });
  }

  void run() {
    const auto est = stage("calibrate", [&] { return vds::estimate_beta(dim, n, trials, seed, cfg, threads); });
    const std::string text = vds::io::beta_to_json(est);
    if (!out.empty()) write_file(out, text);
    std::cout << text;
    if (!text.ends_with('\n')) std::cout << '\n';
  }
};

struct ChooseNCmd {
  DensityOptions density;
  std::size_t target = 1000;
  double delta_t = 1e-3;
  std::optional<double> beta;
  std::optional<std::string> calibration;
  std::uint64_t seed = 0;
  unsigned threads = 0;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("choose-n", "Number of drawings for a target resampled count");
    add_density_options(cmd, density);
    cmd->add_option("--target", target, "Target number of resampled points")->capture_default_str();
    cmd->add_option("--delta-t", delta_t, "Resampling step")->capture_default_str();
    cmd->add_option("--beta", beta, "TSP length constant");
    cmd->add_option("--calibration", calibration, "Calibration JSON written by 'calibrate'");
    cmd->add_option("--seed", seed, "Master seed for the fallback beta estimate (stream 3)")->capture_default_str();
    cmd->add_option("--threads", threads, "Worker threads for the fallback estimate")->capture_default_str();
    cmd->add_option("--config", "JSON file with option values");
    cmd->callback([this] { run(); });
  }

  void run() {
    const auto g = load_density(density);
    const auto drawing = stage("adjust", [&] { return vds::tsp_adjusted_density(g); });
    const double b = resolve_beta(beta, calibration, g.dim(), seed, threads);
    const auto n = stage("choose-n", [&] { return vds::choose_n(target, delta_t, drawing, b); });
    const double length = vds::expected_length(n, drawing, b);
    std::cout << ordered_json{{"N", n}, {"beta", b}, {"expected_length", length}}.dump() << '\n';
  }
};

struct PipelineCmd {
  DensityOptions density;
  std::size_t target = 1000;
  double delta_t = 1e-3;
  int m = 4;
  std::uint64_t seed = 0;
  std::optional<double> beta;
  std::optional<std::string> calibration;
  unsigned threads = 0;
  std::string out_dir = "pipeline-out";
  vds::HeuristicConfig cfg;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("pipeline", "Target density to continuous trajectory, end to end");
    add_density_options(cmd, density);
    cmd->add_option("--target", target, "Target number of resampled points")->capture_default_str();
    cmd->add_option("--delta-t", delta_t, "Resampling step")->capture_default_str();
    cmd->add_option("-m,--partition", m, "Partition resolution for the TV report")
        ->capture_default_str()
        ->check(CLI::Range(1, 4096));
    cmd->add_option("--seed", seed, "Master seed: stream 1 draws points, 2 seeds the TSP, 3 estimates beta")
        ->capture_default_str();
    cmd->add_option("--beta", beta, "TSP length constant");
    cmd->add_option("--calibration", calibration, "Calibration JSON written by 'calibrate'");
    cmd->add_option("--threads", threads, "Worker threads for the fallback beta estimate")->capture_default_str();
    cmd->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
    add_tsp_options(cmd, cfg);
    cmd->add_option("--config", "JSON file with option values");
    cmd->callback([this] { run(); });
  }

  void run() {
    const auto g = load_density(density);
    if (!(delta_t > 0.0)) throw Failure{kExitUsage, "resample", "InvalidStep", "--delta-t must be positive"};
    const auto drawing = stage("adjust", [&] { return vds::tsp_adjusted_density(g); });
    const double b = resolve_beta(beta, calibration, g.dim(), seed, threads);
    const auto n = stage("choose-n", [&] { return vds::choose_n(target, delta_t, drawing, b); });
    const auto ps = stage("draw", [&] { return vds::draw_points(drawing, n, vds::derive_seed(seed, kStreamPoints)); });
    cfg.seed = vds::derive_seed(seed, kStreamTsp);
    const auto tour = stage("solve", [&] { return vds::solve_heuristic(ps, cfg); });
    const auto traj = stage("parameterize", [&] { return vds::parameterize(ps, tour); });
    const auto samples = stage("resample", [&] { return vds::resample(traj, delta_t); });
    const auto emp = stage("measure", [&] { return vds::empirical_distribution(traj, m); });
    const double tv = stage("measure", [&] { return vds::tv_distance(emp, vds::partition_masses(g, m)); });

    const fs::path dir(out_dir);
    write_file(dir / "density.txt", vds::io::density_to_string(g));
    write_file(dir / "points.csv", vds::io::points_to_string(ps));
    write_file(dir / "tour.csv", vds::io::tour_to_string(tour));
    write_file(dir / "trajectory.csv", vds::io::trajectory_to_string(traj));
    write_file(dir / "samples.csv", vds::io::points_to_string(samples));
    write_file(dir / "empirical.txt", vds::io::empirical_to_string(emp));
    ordered_json summary{{"N", n},
                         {"T", traj.total_length()},
                         {"N_s", samples.size()},
                         {"tv", tv},
                         {"target_samples", target},
                         {"delta_t", delta_t},
                         {"m", m},
                         {"beta", b},
                         {"seed", seed}};
    write_file(dir / "summary.json", summary.dump(2) + "\n");
    std::cout << summary.dump() << '\n';
  }
};

struct ExperimentCmd {
  DensityOptions density;
  int side = 128;
  double acceleration = 5.0;
  std::vector<std::string> schemes{"iid-target", "tsp-target", "tsp-adjusted"};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::string wavelet = "haar";
  int levels = 0;
  int iterations = 300;
  double gamma = 0.0;
  double tolerance = 1e-6;
  std::optional<double> beta;
  double count_tolerance = 0.02;
  unsigned threads = 0;
  std::string out_dir = "experiment-out";
  bool no_images = false;
  vds::HeuristicConfig cfg;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("experiment", "Compare k-space sampling schemes by reconstruction SNR");
    density.resolution = 128;
    add_density_options(cmd, density, "radial:2:0.2");
    cmd->add_option("--side", side, "Image side n (power of two)")->capture_default_str();
    cmd->add_option("--acceleration,-r", acceleration, "Acceleration factor r")->capture_default_str();
    cmd->add_option("--schemes", schemes, "Schemes: iid-target, tsp-target, tsp-adjusted")->capture_default_str();
    cmd->add_option("--seeds", seeds, "Seeds, one run per scheme and seed")->capture_default_str();
    cmd->add_option("--wavelet", wavelet, "haar or db4")->capture_default_str();
    cmd->add_option("--levels", levels, "Wavelet levels (0 = log2(n) - 3)")->capture_default_str();
    cmd->add_option("--iterations", iterations, "Douglas-Rachford iterations")->capture_default_str();
    cmd->add_option("--gamma", gamma, "Douglas-Rachford step (0 = automatic)")->capture_default_str();
    cmd->add_option("--tolerance", tolerance, "Early stop on relative change")->capture_default_str();
    cmd->add_option("--beta", beta, "TSP length constant for the initial drawing count");
    cmd->add_option("--count-tolerance", count_tolerance, "Allowed relative mask-size deviation")->capture_default_str();
    cmd->add_option("--threads", threads, "Worker threads (0 = all cores); results do not depend on it")
        ->capture_default_str();
    cmd->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
    cmd->add_flag("--no-images", no_images, "Only write report.csv and summary.json");
    add_tsp_options(cmd, cfg);
    cmd->add_option("--config", "JSON file with option values");
    cmd->callback([this] { run(); });
  }

  void run() {
    vds::ExperimentConfig config;
    config.target = load_density(density);
    input("experiment-config", [&] {
      config.schemes.clear();
      for (const auto& s : schemes) config.schemes.push_back(vds::parse_scheme(s));
      config.recon.wavelet = vds::parse_wavelet(wavelet);
      if (seeds.empty()) throw vds::Error(vds::ErrorCode::ConfigError, "at least one seed is required");
      return 0;
    });
    config.side = side;
    config.acceleration = acceleration;
    config.seeds = seeds;
    config.recon.levels = levels;
    config.recon.iterations = iterations;
    config.recon.dr_gamma = gamma;
    config.recon.tolerance = tolerance;
    config.tsp = cfg;
    config.beta = beta;
    config.count_tolerance = count_tolerance;
    config.threads = threads;
    const auto runs = stage("experiment", [&] { return vds::run_experiment(config); });

    const fs::path dir(out_dir);
    write_file(dir / "report.csv", vds::io::report_to_csv(runs));
    if (!no_images) {
      for (const auto& run : runs) {
        const std::string stem = std::string(vds::to_string(run.scheme)) + "_seed" + std::to_string(run.seed);
        write_file(dir / "masks" / (stem + ".pbm"), vds::io::mask_to_pbm(run.mask));
        write_file(dir / "recon" / (stem + ".pgm"), vds::io::image_to_pgm(run.recon.image));
        stage("write", [&] { vds::io::write_image_f64(dir / "recon" / (stem + ".f64"), run.recon.image); });
      }
      write_file(dir / "phantom.pgm", vds::io::image_to_pgm(vds::shepp_logan(side)));
    }
    ordered_json summary = ordered_json::object();
    for (const auto scheme : config.schemes) {
      std::vector<double> snr;
      for (const auto& run : runs) {
        if (run.scheme == scheme) snr.push_back(run.snr_db);
      }
      std::sort(snr.begin(), snr.end());
      const std::size_t k = snr.size();
      const double median = k % 2 ? snr[k / 2] : 0.5 * (snr[k / 2 - 1] + snr[k / 2]);
      summary["median_snr_db"][std::string(vds::to_string(scheme))] = median;
    }
    write_file(dir / "summary.json", summary.dump(2) + "\n");
    std::cout << summary.dump() << '\n';
  }
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  try {
    args = expand_config(std::move(args));
  } catch (const Failure& f) {
    print_error(f);
    return f.exit_code;
  }

  CLI::App app{"Continuous variable-density sampling: densities, TSP trajectories, calibration and k-space experiments",
               "vds"};
  app.require_subcommand(1);
  DensityCmd density;
  SampleCmd sample;
  TspCmd tsp;
  TrajectoryCmd trajectory;
  CalibrateCmd calibrate;
  ChooseNCmd choose_n;
  PipelineCmd pipeline;
  ExperimentCmd experiment;
  density.attach(app);
  sample.attach(app);
  tsp.attach(app);
  trajectory.attach(app);
  calibrate.attach(app);
  choose_n.attach(app);
  pipeline.attach(app);
  experiment.attach(app);

  std::vector<const char*> cargs;
  for (const auto& a : args) cargs.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error(Failure{kExitUsage, "usage", e.get_name(), e.what()});
    return kExitUsage;
  } catch (const Failure& f) {
    print_error(f);
    return f.exit_code;
  } catch (const std::exception& e) {
    print_error(Failure{kExitStage, "internal", "Exception", e.what()});
    return kExitStage;
  }
  return EXIT_SUCCESS;
}
