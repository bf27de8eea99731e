#include "sci/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sci/errors.hpp"

namespace sci {

namespace {

void require_positive(std::size_t n_x, std::size_t n_y, std::size_t frames) {
  if (n_x == 0 || n_y == 0 || frames == 0) {
    throw DimensionError("tensor dimensions must be positive, got " + std::to_string(n_x) + "x" +
                         std::to_string(n_y) + "x" + std::to_string(frames));
  }
}

}  // namespace

Frame::Frame(std::size_t n_x, std::size_t n_y, double fill) : n_x_(n_x), n_y_(n_y) {
  require_positive(n_x, n_y, 1);
  data_.assign(n_x * n_y, fill);
}

Frame::Frame(std::size_t n_x, std::size_t n_y, std::vector<double> data)
    : n_x_(n_x), n_y_(n_y), data_(std::move(data)) {
  require_positive(n_x, n_y, 1);
  if (data_.size() != n_x * n_y) {
    throw DimensionError("frame payload has " + std::to_string(data_.size()) + " samples, expected " +
                         std::to_string(n_x * n_y));
  }
}

VideoCube::VideoCube(Shape shape, double fill) : shape_(shape) {
  require_positive(shape.n_x, shape.n_y, shape.frames);
  data_.assign(shape.size(), fill);
}

VideoCube::VideoCube(std::size_t n_x, std::size_t n_y, std::size_t frames, double fill)
    : VideoCube(Shape{n_x, n_y, frames}, fill) {}

VideoCube::VideoCube(Shape shape, std::vector<double> data) : shape_(shape), data_(std::move(data)) {
  require_positive(shape.n_x, shape.n_y, shape.frames);
  if (data_.size() != shape.size()) {
    throw DimensionError("cube payload has " + std::to_string(data_.size()) + " samples, expected " +
                         std::to_string(shape.size()));
  }
}

std::span<double> VideoCube::frame(std::size_t k) noexcept {
  return std::span<double>(data_).subspan(k * shape_.frame_size(), shape_.frame_size());
}

std::span<const double> VideoCube::frame(std::size_t k) const noexcept {
  return std::span<const double>(data_).subspan(k * shape_.frame_size(), shape_.frame_size());
}

Frame VideoCube::frame_copy(std::size_t k) const {
  auto f = frame(k);
  return Frame(shape_.n_x, shape_.n_y, std::vector<double>(f.begin(), f.end()));
}

void VideoCube::set_frame(std::size_t k, const Frame& f) {
  if (f.n_x() != shape_.n_x || f.n_y() != shape_.n_y || k >= shape_.frames) {
    throw DimensionError("set_frame: frame does not fit the cube");
  }
  std::ranges::copy(f.data(), frame(k).begin());
}

std::vector<double> vectorize(const VideoCube& cube) { return cube.values(); }

VideoCube devectorize(std::span<const double> v, std::size_t n_x, std::size_t n_y, std::size_t frames) {
  const Shape shape{n_x, n_y, frames};
  if (v.size() != shape.size()) {
    throw DimensionError("devectorize: vector length " + std::to_string(v.size()) + " does not match " +
                         std::to_string(n_x) + "x" + std::to_string(n_y) + "x" + std::to_string(frames));
  }
  return VideoCube(shape, std::vector<double>(v.begin(), v.end()));
}

VideoCube stack_frames(std::span<const Frame> frames) {
  if (frames.empty()) throw DimensionError("stack_frames: no frames");
  VideoCube cube(frames[0].n_x(), frames[0].n_y(), frames.size());
  for (std::size_t k = 0; k < frames.size(); ++k) cube.set_frame(k, frames[k]);
  return cube;
}

bool all_finite(std::span<const double> v) noexcept {
  return std::ranges::all_of(v, [](double x) { return std::isfinite(x); });
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_norm(std::span<const double> a) noexcept {
  double s = 0.0;
  for (double x : a) s += x * x;
  return s;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("max_abs_diff: length mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace sci
