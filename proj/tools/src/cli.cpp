#include "scitools/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "sci/bench.hpp"
#include "sci/config_file.hpp"
#include "sci/errors.hpp"
#include "sci/images.hpp"
#include "sci/metrics.hpp"
#include "sci/solvers.hpp"
#include "sci/synthetic.hpp"
#include "sci/tensor_io.hpp"
#include "sci/tv.hpp"

namespace sci::cli {

namespace fs = std::filesystem;

namespace {

const std::map<std::string, ProjectionRule> kProjectionRules = {{"max-one", ProjectionRule::MaxOne},
                                                                {"additive", ProjectionRule::Additive}};

std::vector<std::string> variant_tags() {
  std::vector<std::string> tags;
  for (const TvVariant& v : TvVariant::all()) tags.push_back(v.tag());
  return tags;
}

struct SimulateArgs {
  std::size_t nx = 64;
  std::size_t ny = 64;
  std::size_t frames = 8;
  std::uint64_t seed = 0;
  double density = 0.5;
  double noise_std = 0.0;
  std::string scene = "moving-square";
  std::string out_dir;
};

struct SolverArgs {
  std::string solver = "gap";
  std::string tv = "atv-fgp";
  double lambda = 0.05;
  double rho = 0.01;
  int max_iter = 100;
  std::optional<int> in_iter;
  double twist_xi1 = 1e-4;
  bool twist_monotone = true;
  bool warm_start = false;
  ProjectionRule projection_rule = ProjectionRule::MaxOne;

  SolveConfig config() const {
    SolveConfig c;
    c.framework = parse_framework(solver);
    c.tv = TvVariant::parse(tv);
    c.lambda = lambda;
    c.rho = rho;
    c.max_iter = max_iter;
    c.in_iter = in_iter;
    c.twist_xi1 = twist_xi1;
    c.twist_monotone = twist_monotone;
    c.warm_start = warm_start;
    c.projection_rule = projection_rule;
    return c;
  }
};

struct ReconstructArgs {
  SolverArgs solver;
  std::string measurement;
  std::string masks;
  std::string reference;
  std::string trace_out;
  std::string out;
  std::string frames_out;
  std::string image_format = "pgm";
  int snapshot_every = 0;
};

struct BenchArgs {
  SolverArgs solver;
  std::string datasets_dir;
  std::string grid = "full";
  std::string report_out;
  std::string table_out;
  std::vector<double> lambda_grid;
  int workers = 1;
  std::size_t nx = 64;
  std::size_t ny = 64;
  std::size_t frames = 8;
  std::uint64_t seed = 0;
};

struct DenoiseArgs {
  std::string in;
  std::string tv = "atv-fgp";
  double lambda = 0.05;
  std::optional<int> in_iter;
  ProjectionRule projection_rule = ProjectionRule::MaxOne;
  std::string out;
};

void add_solver_options(CLI::App* app, SolverArgs& a) {
  app->add_option("--solver", a.solver, "Outer framework")
      ->check(CLI::IsMember({"fista", "twist", "gap", "admm"}, CLI::ignore_case))
      ->capture_default_str();
  app->add_option("--tv", a.tv, "TV norm and inner solver")->check(CLI::IsMember(variant_tags()))->capture_default_str();
  app->add_option("--lambda", a.lambda, "TV weight")->check(CLI::NonNegativeNumber)->capture_default_str();
  app->add_option("--rho", a.rho, "ADMM penalty")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--max-iter", a.max_iter, "Outer iterations")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--in-iter", a.in_iter, "Inner denoise iterations (default 2 for FGP, 5 otherwise)")
      ->check(CLI::PositiveNumber);
  app->add_option("--twist-xi1", a.twist_xi1, "TwIST spectral floor")->capture_default_str();
  app->add_option("--twist-monotone", a.twist_monotone, "TwIST objective safeguard")->capture_default_str();
  app->add_flag("--warm-start", a.warm_start, "Carry the denoiser duals across outer iterations");
  app->add_option("--projection-rule", a.projection_rule, "Dual projection rule (max-one, additive)")
      ->transform(CLI::CheckedTransformer(kProjectionRules));
}

void print_table(std::ostream& out, const BenchReport& report) {
  std::vector<TvVariant> columns;
  for (const GridCell& c : report.cells) {
    if (std::ranges::find(columns, c.tv) == columns.end()) columns.push_back(c.tv);
  }
  char buf[32];
  out << "framework";
  for (const TvVariant& v : columns) out << '\t' << v.label();
  out << '\n';
  for (Framework f : kAllFrameworks) {
    bool any = false;
    std::string row(to_string(f));
    for (const TvVariant& v : columns) {
      const auto it = std::ranges::find(report.cells, GridCell{f, v});
      if (it == report.cells.end()) {
        row += "\t-";
        continue;
      }
      any = true;
      const auto cell = static_cast<std::size_t>(it - report.cells.begin());
      std::snprintf(buf, sizeof buf, "\t%.2f", report.cell_average(cell));
      row += buf;
      if (report.best_overall(cell, report.datasets.size())) {
        row += "**";
      } else if (report.best_in_framework(cell, report.datasets.size())) {
        row += "*";
      }
    }
    if (any) out << row << '\n';
  }
}

int do_simulate(const SimulateArgs& a, std::ostream& out) {
  if (a.out_dir.empty()) throw ConfigError("--out-dir is required");
  const SceneKind kind = parse_scene_kind(a.scene);
  const MaskCube masks = generate_masks(a.nx, a.ny, a.frames, a.seed, a.density);
  const VideoCube truth = generate_synthetic_scene(a.nx, a.ny, a.frames, a.seed, kind);
  const Measurement y = simulate_measurement(truth, masks, a.noise_std, a.seed);

  const fs::path dir(a.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  save_tensor(dir / "truth.scit", truth);
  save_tensor(dir / "masks.scit", masks.values());
  save_tensor(dir / "measurement.scit", y.frame);
  std::ofstream cfg(dir / "dataset.cfg");
  cfg << "name=" << a.scene << "-seed" << a.seed << "\npeak=1\n";
  if (!cfg) throw IoError("cannot write " + (dir / "dataset.cfg").string());
  out << "wrote " << dir.string() << " (" << a.nx << "x" << a.ny << "x" << a.frames << ", " << a.scene << ")\n";
  return kOk;
}

int do_reconstruct(const ReconstructArgs& a, std::ostream& out) {
  if (a.measurement.empty() || a.masks.empty() || a.out.empty()) {
    throw ConfigError("--measurement, --masks and --out are required");
  }
  SolveConfig cfg = a.solver.config();
  const Frame y = load_frame(a.measurement);
  const MaskCube masks(load_cube(a.masks));
  if (!a.reference.empty()) {
    cfg.reference = std::make_shared<const VideoCube>(load_cube(a.reference));
    cfg.trace_psnr = true;
  }

  std::optional<ImageFormat> format;
  if (!a.frames_out.empty()) format = parse_image_format(a.image_format);
  if (a.snapshot_every < 0) throw ConfigError("--snapshot-every must be non-negative");
  IterationCallback snapshot;
  if (format && a.snapshot_every > 0) {
    snapshot = [&](const IterationView& view) {
      if (view.iteration % a.snapshot_every != 0) return;
      char prefix[32];
      std::snprintf(prefix, sizeof prefix, "iter%04d", view.iteration);
      export_frames(view.estimate, a.frames_out, *format, prefix);
    };
  }

  const SolveResult result = reconstruct(Measurement{y, std::nullopt}, masks, cfg, snapshot);
  save_tensor(a.out, result.estimate);
  if (format) export_frames(result.estimate, a.frames_out, *format);
  if (!a.trace_out.empty()) {
    std::ofstream trace(a.trace_out);
    write_trace_csv(trace, result.trace);
    if (!trace) throw IoError("cannot write " + a.trace_out);
  }

  const IterationRecord& last = result.trace.records.back();
  out << to_string(cfg.framework) << "-" << cfg.tv.label() << ": " << last.iteration << " iterations, fidelity "
      << last.fidelity;
  if (cfg.reference) out << ", PSNR " << last.psnr << " dB";
  out << '\n';
  return kOk;
}

int do_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  if (a.report_out.empty()) throw ConfigError("--report-out is required");
  if (a.workers < 1) throw ConfigError("--workers must be at least 1");
  const std::vector<GridCell> cells = parse_grid(a.grid);
  const std::vector<Dataset> datasets =
      a.datasets_dir.empty() ? synthetic_datasets(a.nx, a.ny, a.frames, a.seed) : load_datasets(a.datasets_dir);
  if (datasets.empty()) throw IoError("no datasets found in " + a.datasets_dir);

  BenchOptions options;
  options.defaults = a.solver.config();
  options.lambda_grid = a.lambda_grid;
  options.workers = a.workers;
  const BenchReport report = run_benchmark(datasets, cells, options);
  for (const std::string& w : report.warnings) err << "warning: " << w << '\n';

  std::ofstream csv(a.report_out);
  write_report_csv(csv, report);
  if (!csv) throw IoError("cannot write " + a.report_out);
  if (!a.table_out.empty()) {
    std::ofstream table(a.table_out);
    write_grid_csv(table, report);
    if (!table) throw IoError("cannot write " + a.table_out);
  }
  print_table(out, report);
  return kOk;
}

int do_denoise(const DenoiseArgs& a, std::ostream& out) {
  if (a.in.empty() || a.out.empty()) throw ConfigError("--in and --out are required");
  const TvVariant variant = TvVariant::parse(a.tv);
  DenoiseConfig cfg;
  cfg.lambda = a.lambda;
  cfg.in_iter = a.in_iter.value_or(variant.solver() == InnerSolver::Fgp ? 2 : 5);
  cfg.projection_rule = a.projection_rule;
  const VideoCube z = load_cube(a.in);
  const VideoCube x = tv_denoise(z, variant, cfg);
  if (!all_finite(x.data())) throw NumericError("denoised output contains non-finite values");
  save_tensor(a.out, x);
  out << variant.label() << ": objective " << prox_objective(x, z, cfg.lambda, variant.norm()) << '\n';
  return kOk;
}

// Moves `--config FILE` out of the arguments and splices the file's entries
// in front of the remaining flags, so that later command-line values win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  auto sub = std::ranges::find_if(args, [](const std::string& s) { return !s.starts_with("-"); });
  if (sub == args.end()) return args;
  std::vector<std::string> head(args.begin(), sub + 1);
  std::vector<std::string> tail;
  std::optional<std::string> config;
  for (auto it = sub + 1; it != args.end(); ++it) {
    if (*it == "--config") {
      if (++it == args.end()) throw CLI::ArgumentMismatch("--config needs a file name");
      config = *it;
    } else if (it->starts_with("--config=")) {
      config = it->substr(9);
    } else {
      tail.push_back(*it);
    }
  }
  if (config) {
    for (const auto& [key, value] : parse_config_file(*config)) head.push_back("--" + key + "=" + value);
  }
  head.insert(head.end(), tail.begin(), tail.end());
  return head;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Video snapshot compressive imaging: simulation, TV reconstruction and benchmarks", "scirecon"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand("simulate", "Generate masks, a synthetic scene and its measurement");
  simulate->add_option("--nx", sim.nx, "Rows")->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--ny", sim.ny, "Columns")->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--frames", sim.frames, "Frames per snapshot (B)")->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
  simulate->add_option("--density", sim.density, "Open-mask probability")->capture_default_str();
  simulate->add_option("--noise-std", sim.noise_std, "Gaussian noise std")->check(CLI::NonNegativeNumber)->capture_default_str();
  simulate->add_option("--scene", sim.scene, "moving-square or moving-gaussian")
      ->check(CLI::IsMember({"moving-square", "moving-gaussian"}))
      ->capture_default_str();
  simulate->add_option("--out-dir", sim.out_dir, "Output directory");

  ReconstructArgs rec;
  CLI::App* reconstruct_cmd = app.add_subcommand("reconstruct", "Recover a video cube from one snapshot");
  reconstruct_cmd->add_option("--measurement", rec.measurement, "Measurement tensor (rank 2)");
  reconstruct_cmd->add_option("--masks", rec.masks, "Mask tensor (rank 3)");
  add_solver_options(reconstruct_cmd, rec.solver);
  reconstruct_cmd->add_option("--reference", rec.reference, "Ground truth for PSNR tracing");
  reconstruct_cmd->add_option("--trace-out", rec.trace_out, "Per-iteration CSV");
  reconstruct_cmd->add_option("--out", rec.out, "Reconstructed cube");
  reconstruct_cmd->add_option("--frames-out", rec.frames_out, "Directory for frame images");
  reconstruct_cmd->add_option("--image-format", rec.image_format, "pgm or png")
      ->check(CLI::IsMember({"pgm", "png"}))
      ->capture_default_str();
  reconstruct_cmd->add_option("--snapshot-every", rec.snapshot_every,
                              "Also write frames every N iterations (needs --frames-out)");

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Run the framework x TV-variant grid");
  bench_cmd->add_option("--datasets-dir", bench.datasets_dir, "Directory of dataset subdirectories (default: synthetic)");
  bench_cmd->add_option("--grid", bench.grid, "full or framework:tv list")->capture_default_str();
  bench_cmd->add_option("--report-out", bench.report_out, "Report CSV");
  bench_cmd->add_option("--table-out", bench.table_out, "Average-PSNR table CSV");
  bench_cmd->add_option("--workers", bench.workers, "Concurrent grid cells")->capture_default_str();
  bench_cmd->add_option("--lambda-grid", bench.lambda_grid, "Comma-separated lambdas; best mean PSNR is kept")
      ->delimiter(',');
  bench_cmd->add_option("--nx", bench.nx, "Synthetic rows")->check(CLI::PositiveNumber)->capture_default_str();
  bench_cmd->add_option("--ny", bench.ny, "Synthetic columns")->check(CLI::PositiveNumber)->capture_default_str();
  bench_cmd->add_option("--frames", bench.frames, "Synthetic B")->check(CLI::PositiveNumber)->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "Synthetic seed")->capture_default_str();
  add_solver_options(bench_cmd, bench.solver);
  bench_cmd->get_option("--solver")->description("Ignored: the grid selects the framework");
  bench_cmd->get_option("--tv")->description("Ignored: the grid selects the TV variant");

  DenoiseArgs den;
  CLI::App* denoise_cmd = app.add_subcommand("denoise", "Apply one TV proximal step to a tensor");
  denoise_cmd->add_option("--in", den.in, "Input tensor");
  denoise_cmd->add_option("--tv", den.tv, "TV norm and inner solver")->check(CLI::IsMember(variant_tags()))->capture_default_str();
  denoise_cmd->add_option("--lambda", den.lambda, "TV weight")->check(CLI::NonNegativeNumber)->capture_default_str();
  denoise_cmd->add_option("--in-iter", den.in_iter, "Inner iterations")->check(CLI::PositiveNumber);
  denoise_cmd->add_option("--projection-rule", den.projection_rule, "max-one or additive")
      ->transform(CLI::CheckedTransformer(kProjectionRules));
  denoise_cmd->add_option("--out", den.out, "Output tensor");

  try {
    std::vector<std::string> expanded = expand_config(args);
    std::reverse(expanded.begin(), expanded.end());
    app.parse(expanded);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*simulate) return do_simulate(sim, out);
    if (*reconstruct_cmd) return do_reconstruct(rec, out);
    if (*bench_cmd) return do_bench(bench, out, err);
    if (*denoise_cmd) return do_denoise(den, out);
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return kIo;
  } catch (const DimensionError& e) {
    err << "input mismatch: " << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace sci::cli
