#include "sci/sensing.hpp"

#include <algorithm>
#include <string>

#include "sci/errors.hpp"

namespace sci {

MaskCube::MaskCube(VideoCube masks) : masks_(std::move(masks)) {
  if (!all_finite(masks_.data())) throw ParameterError("mask cube contains non-finite entries");
}

SensingOperator::SensingOperator(MaskCube masks)
    : masks_(std::move(masks)), gram_(masks_.shape().n_x, masks_.shape().n_y) {
  const Shape& s = shape();
  const auto& c = masks_.values();
  for (std::size_t k = 0; k < s.frames; ++k) {
    auto ck = c.frame(k);
    auto g = gram_.data();
    for (std::size_t p = 0; p < s.frame_size(); ++p) g[p] += ck[p] * ck[p];
  }
  for (std::size_t i = 0; i < s.n_x; ++i) {
    for (std::size_t j = 0; j < s.n_y; ++j) {
      if (!(gram_(i, j) > 0.0)) {
        throw ParameterError("dead pixel at (" + std::to_string(i) + ", " + std::to_string(j) +
                             "): every mask is zero there");
      }
    }
  }
  lipschitz_ = std::ranges::max(gram_.values());
}

void SensingOperator::check_cube(const VideoCube& x, const char* what) const {
  if (x.shape() != shape()) throw DimensionError(std::string(what) + ": cube shape does not match the masks");
}

void SensingOperator::check_frame(const Frame& y, const char* what) const {
  if (y.n_x() != shape().n_x || y.n_y() != shape().n_y) {
    throw DimensionError(std::string(what) + ": measurement shape does not match the masks");
  }
}

Frame SensingOperator::apply(const VideoCube& x) const {
  const Shape& s = shape();
  Frame y(s.n_x, s.n_y);
  auto out = y.data();
  for (std::size_t k = 0; k < s.frames; ++k) {
    auto ck = masks_.values().frame(k);
    auto xk = x.frame(k);
    for (std::size_t p = 0; p < s.frame_size(); ++p) out[p] += ck[p] * xk[p];
  }
  return y;
}

Measurement SensingOperator::forward(const VideoCube& x) const {
  check_cube(x, "forward");
  return Measurement{apply(x), std::nullopt};
}

VideoCube SensingOperator::adjoint(const Measurement& y) const { return adjoint(y.frame); }

VideoCube SensingOperator::adjoint(const Frame& y) const {
  check_frame(y, "adjoint");
  const Shape& s = shape();
  VideoCube x(s);
  auto yv = y.data();
  for (std::size_t k = 0; k < s.frames; ++k) {
    auto ck = masks_.values().frame(k);
    auto xk = x.frame(k);
    for (std::size_t p = 0; p < s.frame_size(); ++p) xk[p] = ck[p] * yv[p];
  }
  return x;
}

VideoCube SensingOperator::correct(const VideoCube& x, const Frame& y, double shift) const {
  const Shape& s = shape();
  Frame r = apply(x);
  auto rv = r.data();
  auto yv = y.data();
  auto g = gram_.data();
  for (std::size_t p = 0; p < s.frame_size(); ++p) rv[p] = (yv[p] - rv[p]) / (g[p] + shift);
  VideoCube out = x;
  for (std::size_t k = 0; k < s.frames; ++k) {
    auto ck = masks_.values().frame(k);
    auto ok = out.frame(k);
    for (std::size_t p = 0; p < s.frame_size(); ++p) ok[p] += ck[p] * rv[p];
  }
  return out;
}

VideoCube SensingOperator::project_affine(const VideoCube& theta, const Measurement& y) const {
  check_cube(theta, "project_affine");
  check_frame(y.frame, "project_affine");
  return correct(theta, y.frame, 0.0);
}

VideoCube SensingOperator::admm_x_update(const VideoCube& b, const Measurement& y, double rho) const {
  if (!(rho > 0.0)) throw ParameterError("admm_x_update: rho must be positive");
  check_cube(b, "admm_x_update");
  check_frame(y.frame, "admm_x_update");
  return correct(b, y.frame, rho);
}

DenseMatrix SensingOperator::materialize_dense(std::size_t cap) const {
  const Shape& s = shape();
  if (s.size() > cap) {
    throw SizeError("materialize_dense: " + std::to_string(s.size()) + " columns exceed the cap of " +
                    std::to_string(cap));
  }
  const std::size_t n = s.frame_size();
  DenseMatrix m{n, s.size(), std::vector<double>(n * s.size(), 0.0)};
  for (std::size_t k = 0; k < s.frames; ++k) {
    auto ck = masks_.values().frame(k);
    for (std::size_t r = 0; r < n; ++r) m.data[r * m.cols + k * n + r] = ck[r];
  }
  return m;
}

}  // namespace sci
