#include "sci/solvers.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "sci/errors.hpp"
#include "sci/metrics.hpp"

namespace sci {

namespace {

using Clock = std::chrono::steady_clock;

void check_measurement(const Measurement& y, const SensingOperator& op) {
  if (y.frame.n_x() != op.shape().n_x || y.frame.n_y() != op.shape().n_y) {
    throw DimensionError("measurement shape does not match the masks");
  }
}

void require_framework(const SolveConfig& cfg, Framework expected) {
  if (cfg.framework != expected) {
    throw ConfigError("solver for " + std::string(to_string(expected)) + " called with framework " +
                      std::string(to_string(cfg.framework)));
  }
}

// Records one trace row and forwards the iterate to the callback.
class Tracer {
 public:
  Tracer(const Measurement& y, const SensingOperator& op, const SolveConfig& cfg, const IterationCallback& callback)
      : y_(y), op_(op), cfg_(cfg), callback_(callback), start_(Clock::now()) {
    if (cfg.reference && cfg.reference->shape() != op.shape()) {
      throw DimensionError("reference cube shape does not match the masks");
    }
  }

  void record(int iteration, const VideoCube& estimate, const VideoCube& data_step) {
    if (!all_finite(estimate.data())) {
      throw NumericError(std::string(to_string(cfg_.framework)) + ": non-finite value at iteration " +
                         std::to_string(iteration));
    }
    IterationRecord r;
    r.iteration = iteration;
    const Frame fit = op_.forward(estimate).frame;
    double sse = 0.0;
    for (std::size_t p = 0; p < fit.size(); ++p) {
      const double d = y_.frame.data()[p] - fit.data()[p];
      sse += d * d;
    }
    r.fidelity = 0.5 * sse;
    r.tv_value = tv_penalty(estimate, cfg_.tv.norm());
    r.psnr = cfg_.trace_psnr && cfg_.reference
                 ? psnr(*cfg_.reference, estimate, cfg_.reference_peak)
                 : std::numeric_limits<double>::quiet_NaN();
    r.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
    trace_.records.push_back(r);
    if (callback_) callback_(IterationView{iteration, estimate, data_step});
  }

  IterationTrace take() { return std::move(trace_); }

 private:
  const Measurement& y_;
  const SensingOperator& op_;
  const SolveConfig& cfg_;
  const IterationCallback& callback_;
  Clock::time_point start_;
  IterationTrace trace_;
};

DenoiseWorkspace make_workspace(const SolveConfig& cfg) {
  DenoiseWorkspace ws;
  ws.warm_start = cfg.warm_start;
  return ws;
}

// x + step * Phi^T (y - Phi x)
VideoCube gradient_step(const SensingOperator& op, const VideoCube& x, const Measurement& y, double step) {
  Frame r = op.forward(x).frame;
  auto rv = r.data();
  auto yv = y.frame.data();
  for (std::size_t p = 0; p < rv.size(); ++p) rv[p] = step * (yv[p] - rv[p]);
  VideoCube g = op.adjoint(r);
  VideoCube out = x;
  auto o = out.data();
  auto gv = g.data();
  for (std::size_t n = 0; n < o.size(); ++n) o[n] += gv[n];
  return out;
}

}  // namespace

std::string_view to_string(Framework framework) {
  switch (framework) {
    case Framework::Fista: return "FISTA";
    case Framework::Twist: return "TwIST";
    case Framework::Gap: return "GAP";
    case Framework::Admm: return "ADMM";
  }
  return "?";
}

Framework parse_framework(std::string_view tag) {
  std::string lower(tag);
  std::ranges::transform(lower, lower.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "fista") return Framework::Fista;
  if (lower == "twist") return Framework::Twist;
  if (lower == "gap") return Framework::Gap;
  if (lower == "admm") return Framework::Admm;
  throw ConfigError("unknown framework '" + std::string(tag) + "' (expected fista, twist, gap or admm)");
}

int SolveConfig::inner_iterations() const {
  if (in_iter) return *in_iter;
  return tv.solver() == InnerSolver::Fgp ? 2 : 5;
}

DenoiseConfig SolveConfig::denoise_config(double weight) const {
  DenoiseConfig d;
  d.lambda = weight;
  d.in_iter = inner_iterations();
  d.clip_alpha = clip_alpha;
  d.cham_dt = cham_dt;
  d.projection_rule = projection_rule;
  return d;
}

void SolveConfig::validate() const {
  if (max_iter < 1) throw ParameterError("max_iter must be at least 1");
  if (framework == Framework::Admm && !(rho > 0.0)) throw ParameterError("ADMM requires rho > 0");
  if (framework == Framework::Twist && !(twist_xi1 > 0.0 && twist_xi1 <= 1.0)) {
    throw ParameterError("twist_xi1 must lie in (0, 1]");
  }
  if (!(reference_peak > 0.0)) throw ParameterError("reference_peak must be positive");
  denoise_config(lambda).validate();
}

TwistWeights twist_weights(double xi1) {
  const double root = std::sqrt(xi1);
  const double rho_bar = (1.0 - root) / (1.0 + root);
  const double alpha = rho_bar * rho_bar + 1.0;
  return TwistWeights{alpha, 2.0 * alpha / (1.0 + xi1)};
}

SolveResult solve_fista(const Measurement& y, const SensingOperator& op, const SolveConfig& cfg,
                        const IterationCallback& callback) {
  require_framework(cfg, Framework::Fista);
  cfg.validate();
  check_measurement(y, op);

  const double inv_l = 1.0 / op.lipschitz();
  const DenoiseConfig dcfg = cfg.denoise_config(cfg.lambda * inv_l);
  DenoiseWorkspace ws = make_workspace(cfg);
  Tracer tracer(y, op, cfg, callback);

  VideoCube theta = op.adjoint(y);
  VideoCube x_prev = theta;
  double tau = 1.0;
  for (int t = 1; t <= cfg.max_iter; ++t) {
    const VideoCube z = gradient_step(op, theta, y, inv_l);
    VideoCube x = tv_denoise(z, cfg.tv, dcfg, &ws);
    const double tau_next = nesterov_next(tau);
    const double momentum = (tau - 1.0) / tau_next;
    auto th = theta.data();
    auto xv = x.data();
    auto xp = x_prev.data();
    for (std::size_t n = 0; n < th.size(); ++n) th[n] = xv[n] + momentum * (xv[n] - xp[n]);
    tau = tau_next;
    x_prev = std::move(x);
    tracer.record(t, x_prev, z);
  }
  return SolveResult{std::move(x_prev), tracer.take()};
}

SolveResult solve_twist(const Measurement& y, const SensingOperator& op, const SolveConfig& cfg,
                        const IterationCallback& callback) {
  require_framework(cfg, Framework::Twist);
  cfg.validate();
  check_measurement(y, op);

  // Operator normalized to unit spectral norm: step 1/L, weight lambda/L.
  const double inv_l = 1.0 / op.lipschitz();
  const DenoiseConfig dcfg = cfg.denoise_config(cfg.lambda * inv_l);
  const TwistWeights wts = twist_weights(cfg.twist_xi1);
  DenoiseWorkspace ws = make_workspace(cfg);
  Tracer tracer(y, op, cfg, callback);

  // Weight of the TV term in the objective that the denoise step targets.
  const double tv_weight =
      cfg.lambda * (cfg.tv.solver() == InnerSolver::Clip ? kClipWeightFactor : 1.0);
  const auto objective = [&](const VideoCube& v) {
    const Frame fit = op.forward(v).frame;
    double sse = 0.0;
    for (std::size_t p = 0; p < fit.size(); ++p) {
      const double d = y.frame.data()[p] - fit.data()[p];
      sse += d * d;
    }
    return 0.5 * sse + tv_weight * tv_penalty(v, cfg.tv.norm());
  };

  VideoCube x = op.adjoint(y);
  VideoCube x_prev = x;
  const bool monotone = cfg.twist_monotone;
  double f_prev = monotone ? objective(x) : 0.0;
  bool shrinkage_only = monotone;  // the safeguarded variant opens with a shrinkage step
  for (int t = 1; t <= cfg.max_iter; ++t) {
    const VideoCube z = gradient_step(op, x, y, inv_l);
    VideoCube theta = tv_denoise(z, cfg.tv, dcfg, &ws);
    VideoCube next = theta;
    double f_next = 0.0;
    bool two_step = !shrinkage_only;
    if (two_step) {
      auto nv = next.data();
      auto xp = x_prev.data();
      auto xv = x.data();
      auto tv = theta.data();
      for (std::size_t n = 0; n < nv.size(); ++n) {
        nv[n] = (1.0 - wts.alpha) * xp[n] + (wts.alpha - wts.beta) * xv[n] + wts.beta * tv[n];
      }
      if (monotone) f_next = objective(next);
      if (monotone && f_next > f_prev) {
        two_step = false;
        next = std::move(theta);
      }
    }
    if (monotone && !two_step) f_next = objective(next);
    shrinkage_only = false;
    x_prev = std::move(x);
    x = std::move(next);
    f_prev = f_next;
    tracer.record(t, x, z);
  }
  return SolveResult{std::move(x), tracer.take()};
}

SolveResult solve_gap(const Measurement& y, const SensingOperator& op, const SolveConfig& cfg,
                      const IterationCallback& callback) {
  require_framework(cfg, Framework::Gap);
  cfg.validate();
  check_measurement(y, op);

  const DenoiseConfig dcfg = cfg.denoise_config(cfg.lambda);
  DenoiseWorkspace ws = make_workspace(cfg);
  Tracer tracer(y, op, cfg, callback);

  VideoCube theta = op.adjoint(y);
  for (int t = 1; t <= cfg.max_iter; ++t) {
    const VideoCube x = op.project_affine(theta, y);
    theta = tv_denoise(x, cfg.tv, dcfg, &ws);
    tracer.record(t, theta, x);
  }
  return SolveResult{std::move(theta), tracer.take()};
}

SolveResult solve_admm(const Measurement& y, const SensingOperator& op, const SolveConfig& cfg,
                       const IterationCallback& callback) {
  require_framework(cfg, Framework::Admm);
  cfg.validate();
  check_measurement(y, op);

  const DenoiseConfig dcfg = cfg.denoise_config(cfg.lambda);
  DenoiseWorkspace ws = make_workspace(cfg);
  Tracer tracer(y, op, cfg, callback);

  VideoCube theta = op.adjoint(y);
  VideoCube u(op.shape());
  VideoCube work(op.shape());
  for (int t = 1; t <= cfg.max_iter; ++t) {
    auto wv = work.data();
    auto th = theta.data();
    auto uv = u.data();
    for (std::size_t n = 0; n < wv.size(); ++n) wv[n] = th[n] - uv[n];
    const VideoCube x = op.admm_x_update(work, y, cfg.rho);

    auto xv = x.data();
    for (std::size_t n = 0; n < wv.size(); ++n) wv[n] = xv[n] + uv[n];
    theta = tv_denoise(work, cfg.tv, dcfg, &ws);

    th = theta.data();
    for (std::size_t n = 0; n < uv.size(); ++n) uv[n] += xv[n] - th[n];
    tracer.record(t, theta, x);
  }
  return SolveResult{std::move(theta), tracer.take()};
}

SolveResult solve(const Measurement& y, const SensingOperator& op, const SolveConfig& cfg,
                  const IterationCallback& callback) {
  switch (cfg.framework) {
    case Framework::Fista: return solve_fista(y, op, cfg, callback);
    case Framework::Twist: return solve_twist(y, op, cfg, callback);
    case Framework::Gap: return solve_gap(y, op, cfg, callback);
    case Framework::Admm: return solve_admm(y, op, cfg, callback);
  }
  throw ConfigError("unknown framework");
}

SolveResult reconstruct(const Measurement& y, const MaskCube& masks, const SolveConfig& cfg,
                        const IterationCallback& callback) {
  const SensingOperator op(masks);
  return solve(y, op, cfg, callback);
}

}  // namespace sci
