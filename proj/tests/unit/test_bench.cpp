#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sci/bench.hpp"
#include "sci/errors.hpp"
#include "sci/metrics.hpp"
#include "sci/synthetic.hpp"
#include "sci/tensor_io.hpp"

namespace sci {
namespace {

namespace fs = std::filesystem;

BenchOptions quick(int iters = 4) {
  BenchOptions o;
  o.defaults.max_iter = iters;
  o.defaults.lambda = 0.05;
  return o;
}

std::vector<Dataset> small_datasets() { return synthetic_datasets(12, 12, 4, 3); }

TEST(Grid, FullGridIsTwentyEightCellsInTableOrder) {
  const auto g = full_grid();
  ASSERT_EQ(g.size(), 28u);
  EXPECT_EQ(g.front(), (GridCell{Framework::Fista, TvVariant::parse("atv-clip")}));
  EXPECT_EQ(g[7], (GridCell{Framework::Twist, TvVariant::parse("atv-clip")}));
  EXPECT_EQ(g.back(), (GridCell{Framework::Admm, TvVariant::parse("itv3d-fgp")}));
  EXPECT_EQ(parse_grid("full"), g);
}

TEST(Grid, ParsesExplicitLists) {
  const auto g = parse_grid("gap:atv-clip, admm:itv3d-fgp");
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[1], (GridCell{Framework::Admm, TvVariant::parse("itv3d-fgp")}));
  EXPECT_THROW(parse_grid("gap"), ConfigError);
  EXPECT_THROW(parse_grid("gap:tv"), ConfigError);
  EXPECT_THROW(parse_grid(""), ConfigError);
}

TEST(Report, AveragesAreRecomputable) {
  const auto data = small_datasets();
  const BenchReport r = run_benchmark(data, parse_grid("gap:atv-fgp,fista:itv2d-cham,admm:itv3d-fgp"), quick());
  ASSERT_EQ(r.datasets.size(), 4u);
  for (std::size_t c = 0; c < r.cells.size(); ++c) {
    double s = 0.0;
    for (std::size_t d = 0; d < 4; ++d) {
      SolveConfig cfg = quick().defaults;
      cfg.framework = r.cells[c].framework;
      cfg.tv = r.cells[c].tv;
      const double p = psnr(*data[d].truth, reconstruct_dataset(data[d], cfg));
      EXPECT_EQ(r.psnr[c][d], p);
      s += p;
    }
    EXPECT_NEAR(r.cell_average(c), s / 4.0, 1e-12);
  }
}

TEST(Report, SingleCellGivesOneRecord) {
  const BenchReport r = run_benchmark(small_datasets(), parse_grid("twist:atv-cham"), quick());
  ASSERT_EQ(r.cells.size(), 1u);
  ASSERT_EQ(r.psnr.size(), 1u);
  EXPECT_EQ(r.psnr[0].size(), 4u);
  for (std::size_t d = 0; d <= 4; ++d) {
    EXPECT_TRUE(r.best_in_framework(0, d));
    EXPECT_TRUE(r.best_overall(0, d));
  }
}

TEST(Report, FullGridIsDeterministicAndIndependentOfWorkers) {
  const auto data = synthetic_datasets(8, 8, 2, 1);
  BenchOptions one = quick(2);
  BenchOptions four = one;
  four.workers = 4;
  const BenchReport a = run_benchmark(data, full_grid(), one);
  const BenchReport b = run_benchmark(data, full_grid(), four);
  ASSERT_EQ(a.cells.size(), 28u);
  EXPECT_EQ(a.psnr, b.psnr);
  EXPECT_EQ(a.lambda, b.lambda);
  EXPECT_EQ(a.cells, b.cells);
}

TEST(Report, MarkersFollowTheBestCell) {
  BenchReport r;
  r.datasets = {"a", "b"};
  r.cells = parse_grid("gap:atv-clip,gap:atv-fgp,admm:atv-clip");
  r.psnr = {{20.0, 30.0}, {25.0, 24.0}, {22.0, 31.0}};
  r.runtime_ms = {{1, 1}, {1, 1}, {1, 1}};
  r.lambda = {0.05, 0.05, 0.05};
  EXPECT_TRUE(r.best_in_framework(1, 0));
  EXPECT_FALSE(r.best_in_framework(0, 0));
  EXPECT_TRUE(r.best_in_framework(0, 1));
  EXPECT_TRUE(r.best_in_framework(2, 0));
  EXPECT_TRUE(r.best_overall(1, 0));
  EXPECT_TRUE(r.best_overall(2, 1));
  EXPECT_FALSE(r.best_overall(0, 1));
  EXPECT_TRUE(r.best_overall(2, 2));  // average 26.5

  std::ostringstream csv;
  write_report_csv(csv, r);
  std::istringstream lines(csv.str());
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "framework,tv,dataset,lambda,psnr,best_in_framework,best_overall,runtime_ms");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  EXPECT_EQ(rows, 9);
}

TEST(Report, LambdaGridKeepsTheBestMean) {
  const auto data = synthetic_datasets(8, 8, 2, 2);
  BenchOptions o = quick(3);
  o.lambda_grid = {0.0, 0.05, 0.5};
  const auto cells = parse_grid("gap:atv-fgp");
  const BenchReport r = run_benchmark(data, cells, o);
  for (double l : o.lambda_grid) {
    BenchOptions fixed = quick(3);
    fixed.defaults.lambda = l;
    EXPECT_GE(r.cell_average(0), run_benchmark(data, cells, fixed).cell_average(0));
  }
}

TEST(Datasets, WithoutTruthAreSkippedWithAWarning) {
  auto data = synthetic_datasets(8, 8, 2, 4);
  data[1].truth.reset();
  const BenchReport r = run_benchmark(data, parse_grid("gap:atv-fgp"), quick(2));
  EXPECT_EQ(r.datasets.size(), 3u);
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find(data[1].name), std::string::npos);
}

class DatasetDir : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() / "sci_bench_datasets";
    fs::remove_all(root_);
    fs::create_directories(root_ / "b_second");
    fs::create_directories(root_ / "a_first");
    fs::create_directories(root_ / "not_a_dataset");
  }
  void TearDown() override { fs::remove_all(root_); }
  fs::path root_;
};

TEST_F(DatasetDir, LoadsLayoutAndNormalizesPeak) {
  const MaskCube masks = generate_masks(6, 5, 2, 1);
  VideoCube truth = generate_synthetic_scene(6, 5, 4, 1);
  for (double& v : truth.data()) v *= 255.0;
  save_tensor(root_ / "a_first" / "masks.scit", masks.values());
  save_tensor(root_ / "a_first" / "truth.scit", truth);
  std::ofstream(root_ / "a_first" / "dataset.cfg") << "name = kobe-like\npeak = 255\n";

  const Measurement y = simulate_measurement(generate_synthetic_scene(6, 5, 2, 2), masks);
  save_tensor(root_ / "b_second" / "masks.scit", masks.values());
  save_tensor(root_ / "b_second" / "measurement.scit", y.frame);

  const auto all = load_datasets(root_);
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(all[0].name, "kobe-like");
  EXPECT_EQ(all[0].peak, 255.0);
  EXPECT_EQ(all[0].measurements.size(), 2u);
  EXPECT_NEAR(all[0].truth->data()[3], truth.data()[3] / 255.0, 1e-15);
  EXPECT_EQ(all[1].name, "b_second");
  EXPECT_FALSE(all[1].truth.has_value());
  EXPECT_EQ(all[1].measurements[0].frame, y.frame);

  std::ofstream(root_ / "a_first" / "dataset.cfg") << "colour = red\n";
  EXPECT_THROW(load_dataset(root_ / "a_first"), ConfigError);
  EXPECT_THROW(load_dataset(root_ / "not_a_dataset"), IoError);
}

TEST(TraceCsv, HeaderAndEmptyPsnr) {
  IterationTrace t;
  t.records.push_back(IterationRecord{1, 0.5, 2.0, std::nan(""), 0.25});
  std::ostringstream out;
  write_trace_csv(out, t);
  std::istringstream in(out.str());
  std::string header;
  std::string row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, "iteration,fidelity,tv_value,psnr,elapsed_ms");
  EXPECT_EQ(row.substr(0, 2), "1,");
  EXPECT_NE(row.find(",,"), std::string::npos);
}

}  // namespace
}  // namespace sci
