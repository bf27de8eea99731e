#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sci/tensor.hpp"

namespace sci {

enum class ImageFormat { Pgm, Png };

/// "pgm" or "png". Throws ConfigError otherwise.
ImageFormat parse_image_format(std::string_view tag);

/// Clamps to [0, 1] and scales to 8 bits, rounding half up. NaN maps to 0.
unsigned char to_gray8(double value) noexcept;

/// Writes one grayscale image per frame as <dir>/<prefix>_NNNN.<ext>,
/// creating `dir` if needed. Throws IoError when it cannot be written.
std::vector<std::filesystem::path> export_frames(const VideoCube& cube, const std::filesystem::path& dir,
                                                 ImageFormat format = ImageFormat::Pgm,
                                                 const std::string& prefix = "frame");

}  // namespace sci
