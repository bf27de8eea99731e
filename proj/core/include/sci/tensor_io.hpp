#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <variant>

#include "sci/tensor.hpp"

namespace sci {

// SCIT tensor files:
//   bytes 0-7  "SCITNSR1" (the trailing '1' is the format version)
//   byte 8     dtype: 1 = float32, 2 = float64, little-endian
//   byte 9     rank: 2 or 3
//   rank x u64 little-endian dims in the order n_x, n_y[, B]
//   payload in VideoCube flat order, no padding, no checksum.

enum class Dtype : std::uint8_t { Float32 = 1, Float64 = 2 };

using Tensor = std::variant<Frame, VideoCube>;

void write_tensor(std::ostream& out, const Frame& frame, Dtype dtype = Dtype::Float64);
void write_tensor(std::ostream& out, const VideoCube& cube, Dtype dtype = Dtype::Float64);
/// Throws FormatError with a distinct kind per defect.
Tensor read_tensor(std::istream& in);

/// Throws IoError when the destination cannot be written.
void save_tensor(const std::filesystem::path& path, const Frame& frame, Dtype dtype = Dtype::Float64);
void save_tensor(const std::filesystem::path& path, const VideoCube& cube, Dtype dtype = Dtype::Float64);
Tensor load_tensor(const std::filesystem::path& path);

/// Rank-2 files load as single-frame cubes.
VideoCube load_cube(const std::filesystem::path& path);
/// Rank-3 files load only when B = 1.
Frame load_frame(const std::filesystem::path& path);

}  // namespace sci
