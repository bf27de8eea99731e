#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sci/sensing.hpp"
#include "sci/solvers.hpp"
#include "sci/tensor.hpp"

namespace sci {

/// Ground truth (optional), masks and one measurement per group of B
/// frames. Samples are normalized by `peak` on ingestion.
struct Dataset {
  std::string name;
  std::optional<VideoCube> truth;
  MaskCube masks;
  std::vector<Measurement> measurements;
  double peak = 1.0;
};

/// Builds a dataset from a truth cube whose frame count is a multiple of
/// the mask count, simulating one measurement per group.
Dataset make_dataset(std::string name, VideoCube truth, MaskCube masks, double noise_std = 0.0,
                     std::uint64_t noise_seed = 0);

/// Reads <dir>/masks.scit plus truth.scit and/or measurement.scit, and an
/// optional dataset.cfg (keys: name, peak). Missing measurements are
/// simulated noise-free from the truth.
Dataset load_dataset(const std::filesystem::path& dir);

/// Every subdirectory of `root` that holds a masks.scit, sorted by name.
std::vector<Dataset> load_datasets(const std::filesystem::path& root);

/// Four seeded desk-scale stand-ins (two moving-square, two moving-gaussian)
/// sharing one mask cube, as in the four-video simulation protocol.
std::vector<Dataset> synthetic_datasets(std::size_t n_x, std::size_t n_y, std::size_t frames, std::uint64_t seed);

/// Reconstructs every measurement group and stacks the results.
VideoCube reconstruct_dataset(const Dataset& dataset, const SolveConfig& cfg);

struct GridCell {
  Framework framework;
  TvVariant tv;

  friend bool operator==(const GridCell&, const GridCell&) = default;
};

/// All 4 x 7 combinations in table order: rows FISTA, TwIST, GAP, ADMM;
/// columns ATV-Clip, ATV-Cham, ATV-FGP, ITV2D-Cham, ITV2D-FGP, ITV3D-Cham, ITV3D-FGP.
std::vector<GridCell> full_grid();

/// "full" or a comma-separated list of framework:tv pairs, e.g. "gap:atv-clip,admm:itv3d-fgp".
std::vector<GridCell> parse_grid(std::string_view spec);

struct BenchOptions {
  SolveConfig defaults;
  /// When non-empty, each cell keeps the lambda with the best mean PSNR.
  std::vector<double> lambda_grid;
  int workers = 1;
};

struct BenchReport {
  std::vector<std::string> datasets;
  std::vector<GridCell> cells;
  std::vector<std::vector<double>> psnr;        // [cell][dataset]
  std::vector<std::vector<double>> runtime_ms;  // [cell][dataset]
  std::vector<double> lambda;                   // chosen per cell
  std::vector<std::string> warnings;

  double cell_average(std::size_t cell) const;
  /// Whether the cell is the best (at 0.001 dB precision) within its
  /// framework for the given dataset; dataset == datasets.size() means the average.
  bool best_in_framework(std::size_t cell, std::size_t dataset) const;
  /// Whether the cell is the best across all cells for the given dataset (or the average).
  bool best_overall(std::size_t cell, std::size_t dataset) const;
};

/// Runs every cell on every dataset that has ground truth. Datasets without
/// truth are skipped and noted in `warnings`. Cells run concurrently on up to
/// `workers` threads; the report does not depend on the worker count.
BenchReport run_benchmark(const std::vector<Dataset>& datasets, const std::vector<GridCell>& cells,
                          const BenchOptions& options);

/// Long format: framework,tv,dataset,lambda,psnr,best_in_framework,best_overall,runtime_ms.
/// One row per dataset per cell plus an "average" row. Runtime is the last column.
void write_report_csv(std::ostream& out, const BenchReport& report);

/// Table layout of the average PSNR: one row per framework, one column per TV variant.
void write_grid_csv(std::ostream& out, const BenchReport& report);

/// Columns: iteration,fidelity,tv_value,psnr,elapsed_ms. PSNR is empty when not traced.
void write_trace_csv(std::ostream& out, const IterationTrace& trace);

}  // namespace sci
