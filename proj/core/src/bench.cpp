#include "sci/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <thread>

#include "sci/config_file.hpp"
#include "sci/errors.hpp"
#include "sci/metrics.hpp"
#include "sci/synthetic.hpp"
#include "sci/tensor_io.hpp"

namespace sci {

namespace {

std::string fixed(double v, int digits) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

// Comparison key at the 0.001 dB precision used for the table markers.
long long milli(double v) { return std::llround(v * 1000.0); }

VideoCube group_of(const VideoCube& cube, std::size_t group, std::size_t frames) {
  VideoCube out(cube.n_x(), cube.n_y(), frames);
  const auto src = cube.data().subspan(group * frames * cube.shape().frame_size(), out.size());
  std::ranges::copy(src, out.data().begin());
  return out;
}

void scale(VideoCube& c, double factor) {
  for (double& v : c.data()) v *= factor;
}

}  // namespace

Dataset make_dataset(std::string name, VideoCube truth, MaskCube masks, double noise_std, std::uint64_t noise_seed) {
  const Shape& ms = masks.shape();
  if (truth.n_x() != ms.n_x || truth.n_y() != ms.n_y || truth.frames() % ms.frames != 0) {
    throw DimensionError("dataset '" + name + "': truth must be n_x x n_y x (multiple of B)");
  }
  std::vector<Measurement> meas;
  const std::size_t groups = truth.frames() / ms.frames;
  for (std::size_t g = 0; g < groups; ++g) {
    meas.push_back(simulate_measurement(group_of(truth, g, ms.frames), masks, noise_std, noise_seed + g));
  }
  return Dataset{std::move(name), std::move(truth), std::move(masks), std::move(meas), 1.0};
}

Dataset load_dataset(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::string name = dir.filename().string();
  double peak = 1.0;
  if (fs::exists(dir / "dataset.cfg")) {
    for (const auto& [key, value] : parse_config_file(dir / "dataset.cfg")) {
      if (key == "name") {
        name = value;
      } else if (key == "peak") {
        try {
          peak = std::stod(value);
        } catch (const std::exception&) {
          throw ConfigError(dir.string() + "/dataset.cfg: peak is not a number");
        }
        if (!(peak > 0.0)) throw ConfigError(dir.string() + "/dataset.cfg: peak must be positive");
      } else {
        throw ConfigError(dir.string() + "/dataset.cfg: unknown key '" + key + "'");
      }
    }
  }

  MaskCube masks(load_cube(dir / "masks.scit"));
  const std::size_t b = masks.shape().frames;
  const bool has_truth = fs::exists(dir / "truth.scit");
  const bool has_meas = fs::exists(dir / "measurement.scit");
  if (!has_truth && !has_meas) throw IoError(dir.string() + ": needs truth.scit or measurement.scit");

  std::optional<VideoCube> truth;
  if (has_truth) {
    truth = load_cube(dir / "truth.scit");
    scale(*truth, 1.0 / peak);
  }

  if (!has_meas) {
    Dataset d = make_dataset(name, std::move(*truth), std::move(masks));
    d.peak = peak;
    return d;
  }

  const VideoCube stacked = load_cube(dir / "measurement.scit");
  if (stacked.n_x() != masks.shape().n_x || stacked.n_y() != masks.shape().n_y) {
    throw DimensionError(dir.string() + ": measurement shape does not match the masks");
  }
  if (truth && truth->frames() != stacked.frames() * b) {
    throw DimensionError(dir.string() + ": truth frame count must equal groups x B");
  }
  std::vector<Measurement> meas;
  for (std::size_t g = 0; g < stacked.frames(); ++g) {
    Frame f = stacked.frame_copy(g);
    for (double& v : f.data()) v /= peak;
    meas.push_back(Measurement{std::move(f), std::nullopt});
  }
  return Dataset{std::move(name), std::move(truth), std::move(masks), std::move(meas), peak};
}

std::vector<Dataset> load_datasets(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) throw IoError("'" + root.string() + "' is not a directory");
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && fs::exists(entry.path() / "masks.scit")) dirs.push_back(entry.path());
  }
  std::ranges::sort(dirs);
  std::vector<Dataset> out;
  for (const auto& d : dirs) out.push_back(load_dataset(d));
  if (out.empty()) throw IoError("no datasets (subdirectories with masks.scit) under '" + root.string() + "'");
  return out;
}

std::vector<Dataset> synthetic_datasets(std::size_t n_x, std::size_t n_y, std::size_t frames, std::uint64_t seed) {
  const MaskCube masks = generate_masks(n_x, n_y, frames, seed, 0.5);
  std::vector<Dataset> out;
  const SceneKind kinds[] = {SceneKind::MovingSquare, SceneKind::MovingSquare, SceneKind::MovingGaussian,
                             SceneKind::MovingGaussian};
  for (std::uint64_t s = 0; s < 4; ++s) {
    std::string name = std::string(to_string(kinds[s])) + "-" + std::to_string(seed + s + 1);
    out.push_back(make_dataset(std::move(name), generate_synthetic_scene(n_x, n_y, frames, seed + s + 1, kinds[s]),
                               masks));
  }
  return out;
}

VideoCube reconstruct_dataset(const Dataset& dataset, const SolveConfig& cfg) {
  const SensingOperator op(dataset.masks);
  const std::size_t b = op.shape().frames;
  VideoCube out(op.shape().n_x, op.shape().n_y, b * dataset.measurements.size());
  SolveConfig local = cfg;
  local.trace_psnr = false;
  local.reference.reset();
  for (std::size_t g = 0; g < dataset.measurements.size(); ++g) {
    const SolveResult r = solve(dataset.measurements[g], op, local);
    std::ranges::copy(r.estimate.data(), out.data().begin() + static_cast<std::ptrdiff_t>(g * r.estimate.size()));
  }
  return out;
}

std::vector<GridCell> full_grid() {
  std::vector<GridCell> cells;
  for (Framework f : kAllFrameworks) {
    for (const TvVariant& v : TvVariant::all()) cells.push_back(GridCell{f, v});
  }
  return cells;
}

std::vector<GridCell> parse_grid(std::string_view spec) {
  if (spec == "full") return full_grid();
  std::vector<GridCell> cells;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const std::size_t end = std::min(spec.find(',', start), spec.size());
    std::string_view item = spec.substr(start, end - start);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
    const std::size_t colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw ConfigError("grid entry '" + std::string(item) + "' must look like framework:tv");
    }
    GridCell cell{parse_framework(item.substr(0, colon)), TvVariant::parse(item.substr(colon + 1))};
    if (std::ranges::find(cells, cell) == cells.end()) cells.push_back(cell);
    start = end + 1;
  }
  if (cells.empty()) throw ConfigError("empty grid");
  return cells;
}

double BenchReport::cell_average(std::size_t cell) const {
  const auto& row = psnr.at(cell);
  if (row.empty()) return std::nan("");
  double s = 0.0;
  for (double v : row) s += v;
  return s / static_cast<double>(row.size());
}

namespace {

double value_at(const BenchReport& r, std::size_t cell, std::size_t dataset) {
  return dataset == r.datasets.size() ? r.cell_average(cell) : r.psnr[cell][dataset];
}

bool is_best(const BenchReport& r, std::size_t cell, std::size_t dataset, bool same_framework_only) {
  const long long mine = milli(value_at(r, cell, dataset));
  for (std::size_t c = 0; c < r.cells.size(); ++c) {
    if (same_framework_only && r.cells[c].framework != r.cells[cell].framework) continue;
    if (milli(value_at(r, c, dataset)) > mine) return false;
  }
  return true;
}

}  // namespace

bool BenchReport::best_in_framework(std::size_t cell, std::size_t dataset) const {
  return is_best(*this, cell, dataset, true);
}

bool BenchReport::best_overall(std::size_t cell, std::size_t dataset) const {
  return is_best(*this, cell, dataset, false);
}

BenchReport run_benchmark(const std::vector<Dataset>& datasets, const std::vector<GridCell>& cells,
                          const BenchOptions& options) {
  BenchReport report;
  report.cells = cells;
  std::vector<const Dataset*> usable;
  for (const Dataset& d : datasets) {
    if (!d.truth) {
      report.warnings.push_back("dataset '" + d.name + "' has no ground truth; skipped");
      continue;
    }
    usable.push_back(&d);
    report.datasets.push_back(d.name);
  }

  const std::vector<double> lambdas =
      options.lambda_grid.empty() ? std::vector<double>{options.defaults.lambda} : options.lambda_grid;

  struct Job {
    std::size_t cell;
    std::size_t lambda;
  };
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (std::size_t l = 0; l < lambdas.size(); ++l) jobs.push_back(Job{c, l});
  }
  // [job][dataset]
  std::vector<std::vector<double>> job_psnr(jobs.size(), std::vector<double>(usable.size()));
  std::vector<std::vector<double>> job_ms(jobs.size(), std::vector<double>(usable.size()));
  std::vector<std::exception_ptr> errors(jobs.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      try {
        SolveConfig cfg = options.defaults;
        cfg.framework = cells[jobs[j].cell].framework;
        cfg.tv = cells[jobs[j].cell].tv;
        cfg.lambda = lambdas[jobs[j].lambda];
        for (std::size_t d = 0; d < usable.size(); ++d) {
          const auto t0 = std::chrono::steady_clock::now();
          const VideoCube est = reconstruct_dataset(*usable[d], cfg);
          job_ms[j][d] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
          job_psnr[j][d] = psnr(*usable[d]->truth, est);
        }
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };

  const int n_workers = std::max(1, std::min<int>(options.workers, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::size_t best = c * lambdas.size();
    double best_mean = -1.0;
    for (std::size_t l = 0; l < lambdas.size(); ++l) {
      const std::size_t j = c * lambdas.size() + l;
      double mean = 0.0;
      for (double v : job_psnr[j]) mean += v;
      if (l == 0 || mean > best_mean) {
        best_mean = mean;
        best = j;
      }
    }
    report.psnr.push_back(job_psnr[best]);
    report.runtime_ms.push_back(job_ms[best]);
    report.lambda.push_back(lambdas[jobs[best].lambda]);
  }
  return report;
}

void write_report_csv(std::ostream& out, const BenchReport& report) {
  out << "framework,tv,dataset,lambda,psnr,best_in_framework,best_overall,runtime_ms\n";
  const std::size_t nd = report.datasets.size();
  for (std::size_t c = 0; c < report.cells.size(); ++c) {
    const GridCell& cell = report.cells[c];
    double total_ms = 0.0;
    for (std::size_t d = 0; d <= nd; ++d) {
      const bool avg = d == nd;
      if (avg && nd == 0) break;
      const double ms = avg ? total_ms : report.runtime_ms[c][d];
      total_ms += avg ? 0.0 : ms;
      out << to_string(cell.framework) << ',' << cell.tv.label() << ',' << (avg ? "average" : report.datasets[d])
          << ',' << fixed(report.lambda[c], 6) << ',' << fixed(value_at(report, c, d), 6) << ','
          << (report.best_in_framework(c, d) ? 1 : 0) << ',' << (report.best_overall(c, d) ? 1 : 0) << ','
          << fixed(ms, 3) << '\n';
    }
  }
  for (const auto& w : report.warnings) out << "# warning: " << w << '\n';
}

void write_grid_csv(std::ostream& out, const BenchReport& report) {
  out << "framework";
  for (const TvVariant& v : TvVariant::all()) out << ',' << v.label();
  out << '\n';
  for (Framework f : kAllFrameworks) {
    bool any = false;
    std::string row(to_string(f));
    for (const TvVariant& v : TvVariant::all()) {
      row += ',';
      const auto it = std::ranges::find(report.cells, GridCell{f, v});
      if (it != report.cells.end() && !report.datasets.empty()) {
        row += fixed(report.cell_average(static_cast<std::size_t>(it - report.cells.begin())), 3);
        any = true;
      }
    }
    if (any) out << row << '\n';
  }
}

void write_trace_csv(std::ostream& out, const IterationTrace& trace) {
  out << "iteration,fidelity,tv_value,psnr,elapsed_ms\n";
  for (const auto& r : trace.records) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d,%.10g,%.10g,", r.iteration, r.fidelity, r.tv_value);
    out << buf << fixed(r.psnr, 6) << ',' << fixed(r.elapsed_ms, 3) << '\n';
  }
}

}  // namespace sci
