#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "sci/sensing.hpp"
#include "sci/tensor.hpp"
#include "sci/tv.hpp"

namespace sci {

enum class Framework { Fista, Twist, Gap, Admm };

inline constexpr std::array<Framework, 4> kAllFrameworks = {Framework::Fista, Framework::Twist, Framework::Gap,
                                                            Framework::Admm};

/// "FISTA", "TwIST", "GAP", "ADMM".
std::string_view to_string(Framework framework);
/// Case-insensitive. Throws ConfigError for unknown tags.
Framework parse_framework(std::string_view tag);

struct SolveConfig {
  Framework framework = Framework::Gap;
  TvVariant tv{TvNorm::Anisotropic, InnerSolver::Fgp};
  double lambda = 0.05;
  double rho = 0.01;  // ADMM only
  int max_iter = 100;
  std::optional<int> in_iter;  // defaults: 2 for FGP variants, 5 otherwise
  double twist_xi1 = 1e-4;     // TwIST only
  /// TwIST falls back to a plain shrinkage step whenever the two-step
  /// update would increase 1/2 |y - Phi x|^2 + lambda * TV(x).
  bool twist_monotone = true;

  double clip_alpha = 8.0;
  double cham_dt = 0.125;
  ProjectionRule projection_rule = ProjectionRule::MaxOne;
  bool warm_start = false;

  bool trace_psnr = false;
  std::shared_ptr<const VideoCube> reference;
  double reference_peak = 1.0;

  int inner_iterations() const;
  DenoiseConfig denoise_config(double weight) const;
  /// Throws ParameterError or ConfigError.
  void validate() const;
};

struct IterationRecord {
  int iteration = 0;
  double fidelity = 0.0;  // 1/2 |y - Phi x|^2 of the current estimate
  double tv_value = 0.0;  // tv_penalty of the current estimate
  double psnr = 0.0;      // NaN when no reference is traced
  double elapsed_ms = 0.0;
};

struct IterationTrace {
  std::vector<IterationRecord> records;
};

/// What a solver exposes after each outer iteration. `estimate` is the
/// iterate the solver would return; `data_step` is the output of its data
/// update (the projection for GAP, the x-update for ADMM, the gradient
/// step for FISTA and TwIST).
struct IterationView {
  int iteration = 0;
  const VideoCube& estimate;
  const VideoCube& data_step;
};

using IterationCallback = std::function<void(const IterationView&)>;

struct SolveResult {
  VideoCube estimate;
  IterationTrace trace;
};

/// TwIST relaxation weights derived from the spectral floor xi1.
struct TwistWeights {
  double alpha;
  double beta;
};
TwistWeights twist_weights(double xi1);

/// t' = (1 + sqrt(1 + 4 t^2)) / 2
inline double nesterov_next(double t) { return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t)); }

SolveResult solve_fista(const Measurement& y, const SensingOperator& op, const SolveConfig& cfg,
                        const IterationCallback& callback = {});
SolveResult solve_twist(const Measurement& y, const SensingOperator& op, const SolveConfig& cfg,
                        const IterationCallback& callback = {});
SolveResult solve_gap(const Measurement& y, const SensingOperator& op, const SolveConfig& cfg,
                      const IterationCallback& callback = {});
SolveResult solve_admm(const Measurement& y, const SensingOperator& op, const SolveConfig& cfg,
                       const IterationCallback& callback = {});

/// Runs the framework selected by cfg.framework.
SolveResult solve(const Measurement& y, const SensingOperator& op, const SolveConfig& cfg,
                  const IterationCallback& callback = {});

/// Builds the sensing operator from `masks` and dispatches.
SolveResult reconstruct(const Measurement& y, const MaskCube& masks, const SolveConfig& cfg,
                        const IterationCallback& callback = {});

}  // namespace sci
