#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "sci/sensing.hpp"
#include "sci/tensor.hpp"

namespace sci {

enum class SceneKind { MovingSquare, MovingGaussian };

/// "moving-square" or "moving-gaussian". Throws ConfigError otherwise.
SceneKind parse_scene_kind(std::string_view tag);
std::string_view to_string(SceneKind kind);

/// i.i.d. Bernoulli(density) binary masks. A pixel that is closed in every
/// frame has its mask column redrawn, up to 100 times, before giving up with
/// GenerationError. Bit-identical for a given seed on every platform.
MaskCube generate_masks(std::size_t n_x, std::size_t n_y, std::size_t frames, std::uint64_t seed,
                        double density = 0.5);

/// Piecewise-smooth scene in [0, 1] whose content translates one pixel to
/// the right per frame: frame k+1 at (i, j) equals frame k at (i, j - 1).
VideoCube generate_synthetic_scene(std::size_t n_x, std::size_t n_y, std::size_t frames, std::uint64_t seed,
                                   SceneKind kind = SceneKind::MovingSquare);

/// forward(truth) plus seeded i.i.d. Gaussian noise of standard deviation noise_std.
Measurement simulate_measurement(const VideoCube& truth, const MaskCube& masks, double noise_std = 0.0,
                                 std::uint64_t seed = 0);

}  // namespace sci
