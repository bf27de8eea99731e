#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sci/tensor.hpp"

namespace sci {

enum class TvNorm { Anisotropic, Isotropic2D, Isotropic3D };
enum class InnerSolver { Clip, Chambolle, Fgp };

/// Denominator used when pulling a dual candidate back into the unit ball:
/// MaxOne divides by max(1, |w + step z|), Additive by 1 + step |z|.
enum class ProjectionRule { MaxOne, Additive };

/// A (norm, inner solver) pair. Clip exists only for the anisotropic norm,
/// which leaves the seven combinations returned by all().
class TvVariant {
 public:
  /// Throws ConfigError for Clip with an isotropic norm.
  TvVariant(TvNorm norm, InnerSolver solver);

  /// Parses tags such as "atv-clip" or "itv3d-fgp".
  static TvVariant parse(std::string_view tag);
  static std::span<const TvVariant> all();

  TvNorm norm() const noexcept { return norm_; }
  InnerSolver solver() const noexcept { return solver_; }

  /// Lower-case CLI tag, e.g. "itv2d-cham".
  std::string tag() const;
  /// Display label, e.g. "ITV2D-Cham".
  std::string label() const;

  friend bool operator==(const TvVariant&, const TvVariant&) = default;

 private:
  TvNorm norm_;
  InnerSolver solver_;
};

struct DenoiseConfig {
  double lambda = 0.05;
  int in_iter = 5;
  // Step divisor of the clipping solver; 8 bounds |D|^2 for 2D forward differences.
  double clip_alpha = 8.0;
  double cham_dt = 0.125;
  ProjectionRule projection_rule = ProjectionRule::MaxOne;

  /// Throws ParameterError if any field is out of range.
  void validate() const;
};

/// Differences along one direction for a stack of frames, stored like a
/// VideoCube of size rows x cols x frames. Either extent may be zero for
/// single-row or single-column frames.
struct GradientField {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t frames = 0;
  std::vector<double> data;

  double& operator()(std::size_t i, std::size_t j, std::size_t k) noexcept {
    return data[((k * rows) + i) * cols + j];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return data[((k * rows) + i) * cols + j];
  }
};

/// Horizontal and vertical dual variables for every frame: `h` is
/// n_x x (n_y - 1), `v` is (n_x - 1) x n_y.
struct DualField {
  GradientField h;
  GradientField v;

  static DualField zeros(const Shape& shape);
  bool matches(const Shape& shape) const noexcept;
};

using DualObserver = std::function<void(const DualField&)>;

/// Optional state threaded through repeated denoise calls.
struct DenoiseWorkspace {
  DualField dual;
  /// Start from `dual` instead of zero and store the final duals back.
  bool warm_start = false;
  /// Called with the projected duals after every inner iteration.
  DualObserver on_projection;
};

// Finite differences: grad_h(f)(i, j) = f(i, j+1) - f(i, j),
// grad_v(f)(i, j) = f(i+1, j) - f(i, j).
GradientField grad_h(const Frame& f);
GradientField grad_v(const Frame& f);
GradientField grad_h(const VideoCube& x);
GradientField grad_v(const VideoCube& x);

// Exact transposes. Throw DimensionError if `w` does not fit the target.
Frame grad_h_adjoint(const GradientField& w, std::size_t n_x, std::size_t n_y);
Frame grad_v_adjoint(const GradientField& w, std::size_t n_x, std::size_t n_y);
VideoCube grad_h_adjoint(const GradientField& w, const Shape& shape);
VideoCube grad_v_adjoint(const GradientField& w, const Shape& shape);

/// The three TV norms with whole-frame aggregation:
///   ATV   = sum_k |D_h x_k|_1 + |D_v x_k|_1
///   ITV2D = sum_k sqrt(|D_h x_k|_2^2 + |D_v x_k|_2^2)
///   ITV3D = sqrt(sum_k |D_h x_k|_2^2 + |D_v x_k|_2^2)
double tv_norm(const VideoCube& x, TvNorm norm);

/// The penalty the dual denoisers actually minimize, aggregated per pixel:
///   ATV   = sum_{i,j,k} |g_h| + |g_v|
///   ITV2D = sum_{i,j,k} sqrt(g_h^2 + g_v^2)
///   ITV3D = sum_{i,j} sqrt(sum_k g_h^2 + g_v^2)
/// Missing boundary differences count as zero. Equals tv_norm for ATV.
double tv_penalty(const VideoCube& x, TvNorm norm);

/// 1/2 |x - z|^2 + lambda * tv_penalty(x, norm).
double prox_objective(const VideoCube& x, const VideoCube& z, double lambda, TvNorm norm);

/// Iterative clipping for the anisotropic norm. The duals are clipped at
/// 2 * lambda, so at convergence each direction is denoised with weight
/// kClipWeightFactor * lambda.
VideoCube denoise_clip(const VideoCube& z, const DenoiseConfig& cfg, DenoiseWorkspace* ws = nullptr);

inline constexpr double kClipWeightFactor = 2.0;

/// Chambolle's dual projection for min_x 1/2 |x - z|^2 + lambda * tv_penalty(x).
VideoCube denoise_chambolle(const VideoCube& z, TvNorm norm, const DenoiseConfig& cfg,
                            DenoiseWorkspace* ws = nullptr);

/// Fast gradient projection (Nesterov-accelerated dual projection) for the same problem.
VideoCube denoise_fgp(const VideoCube& z, TvNorm norm, const DenoiseConfig& cfg, DenoiseWorkspace* ws = nullptr);

/// Dispatches on the variant's inner solver.
VideoCube tv_denoise(const VideoCube& z, const TvVariant& variant, const DenoiseConfig& cfg,
                     DenoiseWorkspace* ws = nullptr);

std::string_view to_string(TvNorm norm);
std::string_view to_string(InnerSolver solver);

}  // namespace sci
