#include "sci/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "sci/errors.hpp"

namespace sci {

namespace {

constexpr int kMaxMaskAttempts = 100;

// mt19937_64 output is fixed by the standard; the distributions are not,
// so uniforms are built from the raw bits.
class PortableUniform {
 public:
  explicit PortableUniform(std::uint64_t seed) : engine_(seed) {}

  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double next(double lo, double hi) { return lo + (hi - lo) * next(); }
  std::size_t next_index(std::size_t lo, std::size_t hi) {  // inclusive
    return lo + static_cast<std::size_t>(next() * static_cast<double>(hi - lo + 1));
  }

 private:
  std::mt19937_64 engine_;
};

struct Rect {
  long top, left, height, width;
  double level, ramp;
};

struct Blob {
  double row, col, sigma, amplitude;
};

}  // namespace

SceneKind parse_scene_kind(std::string_view tag) {
  if (tag == "moving-square") return SceneKind::MovingSquare;
  if (tag == "moving-gaussian") return SceneKind::MovingGaussian;
  throw ConfigError("unknown scene kind '" + std::string(tag) + "' (expected moving-square or moving-gaussian)");
}

std::string_view to_string(SceneKind kind) {
  return kind == SceneKind::MovingSquare ? "moving-square" : "moving-gaussian";
}

MaskCube generate_masks(std::size_t n_x, std::size_t n_y, std::size_t frames, std::uint64_t seed, double density) {
  if (!(density > 0.0 && density <= 1.0)) throw ParameterError("mask density must lie in (0, 1]");
  PortableUniform rng(seed);
  VideoCube masks(n_x, n_y, frames);
  const std::size_t n = n_x * n_y;
  for (double& c : masks.data()) c = rng.next() < density ? 1.0 : 0.0;

  // Pixels closed in every frame get their whole mask column redrawn.
  for (std::size_t p = 0; p < n; ++p) {
    auto is_dead = [&] {
      for (std::size_t k = 0; k < frames; ++k) {
        if (masks.frame(k)[p] != 0.0) return false;
      }
      return true;
    };
    int attempt = 0;
    while (is_dead()) {
      if (++attempt > kMaxMaskAttempts) {
        throw GenerationError("could not open pixel " + std::to_string(p) + " in " +
                              std::to_string(kMaxMaskAttempts) + " redraws (density " + std::to_string(density) +
                              ", " + std::to_string(frames) + " frames)");
      }
      for (std::size_t k = 0; k < frames; ++k) masks.frame(k)[p] = rng.next() < density ? 1.0 : 0.0;
    }
  }
  return MaskCube(std::move(masks));
}

VideoCube generate_synthetic_scene(std::size_t n_x, std::size_t n_y, std::size_t frames, std::uint64_t seed,
                                   SceneKind kind) {
  PortableUniform rng(seed);
  VideoCube scene(n_x, n_y, frames);
  const double background = rng.next(0.1, 0.25);
  const long nx = static_cast<long>(n_x);
  const long ny = static_cast<long>(n_y);
  const long travel = static_cast<long>(frames) - 1;

  // g(i, s) with s = j - k, so every frame is a shifted copy of the first.
  std::vector<double> base;
  if (kind == SceneKind::MovingSquare) {
    std::vector<Rect> rects;
    for (int r = 0; r < 3; ++r) {
      const long h = std::max(1L, static_cast<long>(rng.next(0.2, 0.4) * nx));
      const long w = std::max(1L, static_cast<long>(rng.next(0.2, 0.4) * ny));
      const long top = static_cast<long>(rng.next_index(0, static_cast<std::size_t>(std::max(0L, nx - h))));
      const long max_left = std::max(0L, ny - w - travel);
      const long left = static_cast<long>(rng.next_index(0, static_cast<std::size_t>(max_left)));
      rects.push_back(Rect{top, left, h, w, rng.next(0.45, 0.9), rng.next(-0.15, 0.15)});
    }
    auto g = [&](long i, long s) {
      double v = background;
      for (const Rect& r : rects) {
        if (i >= r.top && i < r.top + r.height && s >= r.left && s < r.left + r.width) {
          v = r.level + r.ramp * static_cast<double>(i - r.top) / static_cast<double>(r.height);
        }
      }
      return std::clamp(v, 0.0, 1.0);
    };
    for (std::size_t k = 0; k < frames; ++k) {
      for (long i = 0; i < nx; ++i) {
        for (long j = 0; j < ny; ++j) scene(i, j, k) = g(i, j - static_cast<long>(k));
      }
    }
    return scene;
  }

  std::vector<Blob> blobs;
  for (int b = 0; b < 3; ++b) {
    const double sigma = rng.next(0.06, 0.14) * static_cast<double>(std::min(nx, ny));
    blobs.push_back(Blob{rng.next(0.2, 0.8) * static_cast<double>(nx),
                         rng.next(0.15, 0.6) * static_cast<double>(ny), std::max(sigma, 0.5), rng.next(0.2, 0.3)});
  }
  auto g = [&](long i, long s) {
    double v = background;
    for (const Blob& bl : blobs) {
      const double di = static_cast<double>(i) - bl.row;
      const double dj = static_cast<double>(s) - bl.col;
      v += bl.amplitude * std::exp(-(di * di + dj * dj) / (2.0 * bl.sigma * bl.sigma));
    }
    return std::clamp(v, 0.0, 1.0);
  };
  for (std::size_t k = 0; k < frames; ++k) {
    for (long i = 0; i < nx; ++i) {
      for (long j = 0; j < ny; ++j) scene(i, j, k) = g(i, j - static_cast<long>(k));
    }
  }
  return scene;
}

Measurement simulate_measurement(const VideoCube& truth, const MaskCube& masks, double noise_std,
                                 std::uint64_t seed) {
  if (!(noise_std >= 0.0)) throw ParameterError("noise_std must be >= 0");
  const SensingOperator op(masks);
  Measurement y = op.forward(truth);
  if (noise_std > 0.0) {
    std::mt19937_64 engine(seed);
    std::normal_distribution<double> noise(0.0, noise_std);
    for (double& v : y.frame.data()) v += noise(engine);
  }
  y.noise_std = noise_std;
  return y;
}

}  // namespace sci
