#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sci {

/// Extent of a video cube: n_x rows, n_y columns, `frames` frames.
struct Shape {
  std::size_t n_x = 1;
  std::size_t n_y = 1;
  std::size_t frames = 1;

  std::size_t frame_size() const noexcept { return n_x * n_y; }
  std::size_t size() const noexcept { return n_x * n_y * frames; }

  friend bool operator==(const Shape&, const Shape&) = default;
};

/// A single n_x by n_y real image stored row-major.
class Frame {
 public:
  Frame(std::size_t n_x, std::size_t n_y, double fill = 0.0);
  Frame(std::size_t n_x, std::size_t n_y, std::vector<double> data);

  std::size_t n_x() const noexcept { return n_x_; }
  std::size_t n_y() const noexcept { return n_y_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_y_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_y_ + j]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  std::size_t n_x_;
  std::size_t n_y_;
  std::vector<double> data_;
};

/// B frames of n_x by n_y samples. Element (i, j, k) lives at flat offset
/// ((k * n_x) + i) * n_y + j: frame-major, then row-major inside a frame.
class VideoCube {
 public:
  explicit VideoCube(Shape shape, double fill = 0.0);
  VideoCube(std::size_t n_x, std::size_t n_y, std::size_t frames, double fill = 0.0);
  VideoCube(Shape shape, std::vector<double> data);

  static std::size_t offset(const Shape& s, std::size_t i, std::size_t j, std::size_t k) noexcept {
    return ((k * s.n_x) + i) * s.n_y + j;
  }

  const Shape& shape() const noexcept { return shape_; }
  std::size_t n_x() const noexcept { return shape_.n_x; }
  std::size_t n_y() const noexcept { return shape_.n_y; }
  std::size_t frames() const noexcept { return shape_.frames; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::size_t i, std::size_t j, std::size_t k) noexcept {
    return data_[offset(shape_, i, j, k)];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return data_[offset(shape_, i, j, k)];
  }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }

  std::span<double> frame(std::size_t k) noexcept;
  std::span<const double> frame(std::size_t k) const noexcept;
  Frame frame_copy(std::size_t k) const;
  void set_frame(std::size_t k, const Frame& f);

  friend bool operator==(const VideoCube&, const VideoCube&) = default;

 private:
  Shape shape_;
  std::vector<double> data_;
};

/// Stacks vec(X_1), ..., vec(X_B) into one vector.
std::vector<double> vectorize(const VideoCube& cube);

/// Inverse of vectorize. Throws DimensionError when the length is wrong.
VideoCube devectorize(std::span<const double> v, std::size_t n_x, std::size_t n_y, std::size_t frames);

/// Stacks frames into a cube. All frames must share one size.
VideoCube stack_frames(std::span<const Frame> frames);

bool all_finite(std::span<const double> v) noexcept;
double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a) noexcept;
double max_abs_diff(std::span<const double> a, std::span<const double> b);

}  // namespace sci
