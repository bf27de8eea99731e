// Solver behavior on the seeded 64x64x8 moving-square scene at the default
// lambda. Each claim runs once per framework and shares the traces.
#include <gtest/gtest.h>

#include <cmath>
#include <algorithm>
#include <map>
#include <tuple>
#include <numeric>

#include "sci/metrics.hpp"
#include "sci/solvers.hpp"
#include "sci/synthetic.hpp"

namespace sci {
namespace {

struct Scene {
  std::shared_ptr<const VideoCube> truth;
  MaskCube masks;
  Measurement y;
};

const Scene& scene() {
  static const Scene s = [] {
    auto truth = std::make_shared<const VideoCube>(generate_synthetic_scene(64, 64, 8, 0));
    MaskCube masks = generate_masks(64, 64, 8, 0);
    Measurement y = simulate_measurement(*truth, masks);
    return Scene{truth, std::move(masks), std::move(y)};
  }();
  return s;
}

const IterationTrace& trace(Framework f, const std::string& tv, int iters) {
  static std::map<std::tuple<Framework, std::string, int>, IterationTrace> cache;
  const auto key = std::make_tuple(f, tv, iters);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  SolveConfig c;
  c.framework = f;
  c.tv = TvVariant::parse(tv);
  c.max_iter = iters;
  c.reference = scene().truth;
  c.trace_psnr = true;
  return cache[key] = reconstruct(scene().y, scene().masks, c).trace;
}

double psnr_at(const IterationTrace& t, int iteration) { return t.records.at(iteration - 1).psnr; }

TEST(SceneClaims, FistaPlateausBelowGap) {
  const double fista = psnr_at(trace(Framework::Fista, "atv-fgp", 100), 100);
  const double gap = psnr_at(trace(Framework::Gap, "atv-fgp", 100), 100);
  EXPECT_LT(fista, gap);
}

TEST(SceneClaims, GapIsNearItsFinalValueByIterationSixty) {
  const auto& t = trace(Framework::Gap, "atv-fgp", 100);
  EXPECT_NEAR(psnr_at(t, 60), psnr_at(t, 100), 0.2);
}

TEST(SceneClaims, TwistImprovesBetweenSixtyAndFiveHundred) {
  const auto& t = trace(Framework::Twist, "atv-fgp", 500);
  EXPECT_LT(psnr_at(t, 60), psnr_at(t, 500));
}

TEST(SceneClaims, TwistReachesGapAfterFiveHundredIterations) {
  const double twist = psnr_at(trace(Framework::Twist, "atv-fgp", 500), 500);
  const double gap = psnr_at(trace(Framework::Gap, "atv-fgp", 100), 100);
  EXPECT_NEAR(twist, gap, 0.5);
}

TEST(SceneClaims, AdmmAgreesWithGapOnItv3d) {
  const double admm = psnr_at(trace(Framework::Admm, "itv3d-fgp", 100), 100);
  const double gap = psnr_at(trace(Framework::Gap, "itv3d-fgp", 100), 100);
  EXPECT_NEAR(admm, gap, 0.5);
}

TEST(SceneClaims, AdmmPrimalResidualDecaysOverTheSecondHalf) {
  SolveConfig c;
  c.framework = Framework::Admm;
  c.max_iter = 100;
  std::vector<double> residual;
  const SensingOperator op(scene().masks);
  solve(scene().y, op, c, [&](const IterationView& v) {
    double s = 0.0;
    for (std::size_t n = 0; n < v.estimate.size(); ++n) {
      s += std::pow(v.data_step.data()[n] - v.estimate.data()[n], 2);
    }
    residual.push_back(std::sqrt(s));
  });
  ASSERT_EQ(residual.size(), 100u);
  for (double r : residual) EXPECT_TRUE(std::isfinite(r));
  const auto mean = [&](std::size_t from, std::size_t to) {
    return std::accumulate(residual.begin() + from, residual.begin() + to, 0.0) / static_cast<double>(to - from);
  };
  EXPECT_LT(mean(75, 100), mean(50, 75));
  EXPECT_LE(*std::max_element(residual.begin() + 50, residual.end()), residual[0]);
}

}  // namespace
}  // namespace sci
