#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sci/tensor.hpp"

namespace sci {

/// The B modulation masks C_1..C_B, one per frame of the scene.
class MaskCube {
 public:
  /// Throws ParameterError on non-finite entries.
  explicit MaskCube(VideoCube masks);

  const VideoCube& values() const noexcept { return masks_; }
  const Shape& shape() const noexcept { return masks_.shape(); }

 private:
  VideoCube masks_;
};

/// One coded snapshot Y. `noise_std` records the simulated noise level, if any.
struct Measurement {
  Frame frame;
  std::optional<double> noise_std;
};

/// Row-major dense matrix used only for verification at small sizes.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  double operator()(std::size_t r, std::size_t c) const noexcept { return data[r * cols + c]; }
};

inline constexpr std::size_t kDefaultDenseCap = 4096;

/// Phi = [D_1, ..., D_B] with D_k = diag(vec(C_k)).
///
/// Phi Phi^T is diagonal with entries g(i, j) = sum_k C_k(i, j)^2, so the
/// projection onto {x : Phi x = y} and the ADMM x-update reduce to per-pixel
/// scalar operations. Masks with a pixel where g = 0 are rejected.
class SensingOperator {
 public:
  explicit SensingOperator(MaskCube masks);

  const MaskCube& masks() const noexcept { return masks_; }
  const Shape& shape() const noexcept { return masks_.shape(); }
  const Frame& gram_diag() const noexcept { return gram_; }

  /// Largest eigenvalue of Phi^T Phi, i.e. the max of the Gram diagonal.
  double lipschitz() const noexcept { return lipschitz_; }

  Measurement forward(const VideoCube& x) const;
  VideoCube adjoint(const Measurement& y) const;
  VideoCube adjoint(const Frame& y) const;

  /// Euclidean projection of theta onto {x : Phi x = y}.
  VideoCube project_affine(const VideoCube& theta, const Measurement& y) const;

  /// argmin_x 1/2 |y - Phi x|^2 + rho/2 |x - b|^2, via
  /// x = b + Phi^T (rho I + Phi Phi^T)^{-1} (y - Phi b).
  VideoCube admm_x_update(const VideoCube& b, const Measurement& y, double rho) const;

  /// Explicit n x nB matrix. Throws SizeError when n_x * n_y * B exceeds `cap`.
  DenseMatrix materialize_dense(std::size_t cap = kDefaultDenseCap) const;

 private:
  Frame apply(const VideoCube& x) const;
  void check_cube(const VideoCube& x, const char* what) const;
  void check_frame(const Frame& y, const char* what) const;
  // x + Phi^T diag(1 / (g + shift)) (y - Phi x)
  VideoCube correct(const VideoCube& x, const Frame& y, double shift) const;

  MaskCube masks_;
  Frame gram_;
  double lipschitz_ = 0.0;
};

}  // namespace sci
