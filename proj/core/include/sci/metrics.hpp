#pragma once

#include "sci/tensor.hpp"

namespace sci {

/// Reported PSNR when the two cubes are identical.
inline constexpr double kPsnrCap = 100.0;

/// 10 log10(peak^2 / MSE) with the MSE taken over every sample. Capped at
/// kPsnrCap. Throws DimensionError on shape mismatch.
double psnr(const VideoCube& reference, const VideoCube& estimate, double peak = 1.0);

}  // namespace sci
