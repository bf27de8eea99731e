#include "sci/tv.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "sci/errors.hpp"

namespace sci {

namespace {

std::size_t h_cols(const Shape& s) { return s.n_y - 1; }
std::size_t v_rows(const Shape& s) { return s.n_x - 1; }

GradientField empty_field(std::size_t rows, std::size_t cols, std::size_t frames) {
  return GradientField{rows, cols, frames, std::vector<double>(rows * cols * frames, 0.0)};
}

// gh(k, i, j) = x(k, i, j+1) - x(k, i, j)
void diff_h(const Shape& s, const double* x, double* gh) {
  const std::size_t nc = h_cols(s);
  for (std::size_t r = 0; r < s.frames * s.n_x; ++r) {
    const double* row = x + r * s.n_y;
    double* out = gh + r * nc;
    for (std::size_t j = 0; j < nc; ++j) out[j] = row[j + 1] - row[j];
  }
}

// gv(k, i, j) = x(k, i+1, j) - x(k, i, j)
void diff_v(const Shape& s, const double* x, double* gv) {
  const std::size_t nr = v_rows(s);
  for (std::size_t k = 0; k < s.frames; ++k) {
    const double* xk = x + k * s.frame_size();
    double* out = gv + k * nr * s.n_y;
    for (std::size_t i = 0; i < nr; ++i) {
      for (std::size_t j = 0; j < s.n_y; ++j) {
        out[i * s.n_y + j] = xk[(i + 1) * s.n_y + j] - xk[i * s.n_y + j];
      }
    }
  }
}

// out += scale * D_h^T wh
void add_adjoint_h(const Shape& s, const double* wh, double scale, double* out) {
  const std::size_t nc = h_cols(s);
  if (nc == 0) return;
  for (std::size_t r = 0; r < s.frames * s.n_x; ++r) {
    const double* w = wh + r * nc;
    double* o = out + r * s.n_y;
    o[0] -= scale * w[0];
    for (std::size_t j = 1; j < nc; ++j) o[j] += scale * (w[j - 1] - w[j]);
    o[nc] += scale * w[nc - 1];
  }
}

// out += scale * D_v^T wv
void add_adjoint_v(const Shape& s, const double* wv, double scale, double* out) {
  const std::size_t nr = v_rows(s);
  if (nr == 0) return;
  const std::size_t ny = s.n_y;
  for (std::size_t k = 0; k < s.frames; ++k) {
    const double* w = wv + k * nr * ny;
    double* o = out + k * s.frame_size();
    for (std::size_t j = 0; j < ny; ++j) o[j] -= scale * w[j];
    for (std::size_t i = 1; i < nr; ++i) {
      for (std::size_t j = 0; j < ny; ++j) o[i * ny + j] += scale * (w[(i - 1) * ny + j] - w[i * ny + j]);
    }
    for (std::size_t j = 0; j < ny; ++j) o[nr * ny + j] += scale * w[(nr - 1) * ny + j];
  }
}

// Replaces w by the projection of w + step * z onto the dual unit ball of
// the chosen norm: pointwise for ATV, per (i, j, k) for ITV2D, and per (i, j)
// across all frames for ITV3D.
void project_dual(TvNorm norm, ProjectionRule rule, double step, const Shape& s, DualField& w,
                  const std::vector<double>& zh, const std::vector<double>& zv) {
  auto& wh = w.h.data;
  auto& wv = w.v.data;
  for (std::size_t n = 0; n < wh.size(); ++n) wh[n] += step * zh[n];
  for (std::size_t n = 0; n < wv.size(); ++n) wv[n] += step * zv[n];

  const bool max_one = rule == ProjectionRule::MaxOne;

  if (norm == TvNorm::Anisotropic) {
    for (std::size_t n = 0; n < wh.size(); ++n) {
      wh[n] /= max_one ? std::max(1.0, std::abs(wh[n])) : 1.0 + step * std::abs(zh[n]);
    }
    for (std::size_t n = 0; n < wv.size(); ++n) {
      wv[n] /= max_one ? std::max(1.0, std::abs(wv[n])) : 1.0 + step * std::abs(zv[n]);
    }
    return;
  }

  const std::size_t nc = h_cols(s);
  const std::size_t nr = v_rows(s);
  auto h_index = [&](std::size_t i, std::size_t j, std::size_t k) { return ((k * s.n_x) + i) * nc + j; };
  auto v_index = [&](std::size_t i, std::size_t j, std::size_t k) { return ((k * nr) + i) * s.n_y + j; };

  // Squared magnitude at (i, j, k) of either the candidate (max-one) or the step (additive).
  auto magnitude2 = [&](std::size_t i, std::size_t j, std::size_t k) {
    double m = 0.0;
    if (j < nc) {
      const double a = max_one ? wh[h_index(i, j, k)] : zh[h_index(i, j, k)];
      m += a * a;
    }
    if (i < nr) {
      const double b = max_one ? wv[v_index(i, j, k)] : zv[v_index(i, j, k)];
      m += b * b;
    }
    return m;
  };
  auto denominator = [&](double m2) {
    return max_one ? std::max(1.0, std::sqrt(m2)) : 1.0 + step * std::sqrt(m2);
  };
  auto scale_at = [&](std::size_t i, std::size_t j, std::size_t k, double d) {
    if (j < nc) wh[h_index(i, j, k)] /= d;
    if (i < nr) wv[v_index(i, j, k)] /= d;
  };

  if (norm == TvNorm::Isotropic2D) {
    for (std::size_t k = 0; k < s.frames; ++k) {
      for (std::size_t i = 0; i < s.n_x; ++i) {
        for (std::size_t j = 0; j < s.n_y; ++j) scale_at(i, j, k, denominator(magnitude2(i, j, k)));
      }
    }
    return;
  }

  for (std::size_t i = 0; i < s.n_x; ++i) {
    for (std::size_t j = 0; j < s.n_y; ++j) {
      double m2 = 0.0;
      for (std::size_t k = 0; k < s.frames; ++k) m2 += magnitude2(i, j, k);
      const double d = denominator(m2);
      for (std::size_t k = 0; k < s.frames; ++k) scale_at(i, j, k, d);
    }
  }
}

// out = D_h^T wh + D_v^T wv
void adjoint_sum(const Shape& s, const DualField& w, std::vector<double>& out) {
  std::ranges::fill(out, 0.0);
  add_adjoint_h(s, w.h.data.data(), 1.0, out.data());
  add_adjoint_v(s, w.v.data.data(), 1.0, out.data());
}

DualField initial_dual(const Shape& s, const DenoiseWorkspace* ws) {
  if (ws != nullptr && ws->warm_start && ws->dual.matches(s)) return ws->dual;
  return DualField::zeros(s);
}

void store_dual(DenoiseWorkspace* ws, DualField&& w) {
  if (ws != nullptr && ws->warm_start) ws->dual = std::move(w);
}

void observe(const DenoiseWorkspace* ws, const DualField& w) {
  if (ws != nullptr && ws->on_projection) ws->on_projection(w);
}

// z - lambda * (D_h^T wh + D_v^T wv)
VideoCube primal_from_dual(const VideoCube& z, const DualField& w, double lambda) {
  VideoCube out = z;
  add_adjoint_h(z.shape(), w.h.data.data(), -lambda, out.data().data());
  add_adjoint_v(z.shape(), w.v.data.data(), -lambda, out.data().data());
  return out;
}

}  // namespace

TvVariant::TvVariant(TvNorm norm, InnerSolver solver) : norm_(norm), solver_(solver) {
  if (solver == InnerSolver::Clip && norm != TvNorm::Anisotropic) {
    throw ConfigError("the clipping solver is only defined for anisotropic TV");
  }
}

std::span<const TvVariant> TvVariant::all() {
  static const std::array<TvVariant, 7> variants = {
      TvVariant(TvNorm::Anisotropic, InnerSolver::Clip),   TvVariant(TvNorm::Anisotropic, InnerSolver::Chambolle),
      TvVariant(TvNorm::Anisotropic, InnerSolver::Fgp),    TvVariant(TvNorm::Isotropic2D, InnerSolver::Chambolle),
      TvVariant(TvNorm::Isotropic2D, InnerSolver::Fgp),    TvVariant(TvNorm::Isotropic3D, InnerSolver::Chambolle),
      TvVariant(TvNorm::Isotropic3D, InnerSolver::Fgp),
  };
  return variants;
}

TvVariant TvVariant::parse(std::string_view tag) {
  for (const auto& v : all()) {
    if (v.tag() == tag) return v;
  }
  throw ConfigError("unknown TV variant '" + std::string(tag) +
                    "' (expected atv-clip, atv-cham, atv-fgp, itv2d-cham, itv2d-fgp, itv3d-cham or itv3d-fgp)");
}

std::string TvVariant::tag() const {
  std::string s(to_string(norm_));
  std::ranges::transform(s, s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  switch (solver_) {
    case InnerSolver::Clip: return s + "-clip";
    case InnerSolver::Chambolle: return s + "-cham";
    case InnerSolver::Fgp: return s + "-fgp";
  }
  return s;
}

std::string TvVariant::label() const {
  return std::string(to_string(norm_)) + "-" + std::string(to_string(solver_));
}

std::string_view to_string(TvNorm norm) {
  switch (norm) {
    case TvNorm::Anisotropic: return "ATV";
    case TvNorm::Isotropic2D: return "ITV2D";
    case TvNorm::Isotropic3D: return "ITV3D";
  }
  return "?";
}

std::string_view to_string(InnerSolver solver) {
  switch (solver) {
    case InnerSolver::Clip: return "Clip";
    case InnerSolver::Chambolle: return "Cham";
    case InnerSolver::Fgp: return "FGP";
  }
  return "?";
}

void DenoiseConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ParameterError("lambda must be a finite value >= 0");
  if (in_iter < 1) throw ParameterError("in_iter must be at least 1");
  if (!(clip_alpha > 0.0)) throw ParameterError("clip_alpha must be positive");
  if (!(cham_dt > 0.0 && cham_dt <= 0.25)) throw ParameterError("cham_dt must lie in (0, 1/4]");
}

DualField DualField::zeros(const Shape& s) {
  return DualField{empty_field(s.n_x, s.n_y - 1, s.frames), empty_field(s.n_x - 1, s.n_y, s.frames)};
}

bool DualField::matches(const Shape& s) const noexcept {
  return h.rows == s.n_x && h.cols == s.n_y - 1 && h.frames == s.frames && v.rows == s.n_x - 1 &&
         v.cols == s.n_y && v.frames == s.frames;
}

GradientField grad_h(const VideoCube& x) {
  const Shape& s = x.shape();
  GradientField g = empty_field(s.n_x, s.n_y - 1, s.frames);
  diff_h(s, x.data().data(), g.data.data());
  return g;
}

GradientField grad_v(const VideoCube& x) {
  const Shape& s = x.shape();
  GradientField g = empty_field(s.n_x - 1, s.n_y, s.frames);
  diff_v(s, x.data().data(), g.data.data());
  return g;
}

GradientField grad_h(const Frame& f) { return grad_h(VideoCube(Shape{f.n_x(), f.n_y(), 1}, f.values())); }
GradientField grad_v(const Frame& f) { return grad_v(VideoCube(Shape{f.n_x(), f.n_y(), 1}, f.values())); }

VideoCube grad_h_adjoint(const GradientField& w, const Shape& shape) {
  if (w.rows != shape.n_x || w.cols != shape.n_y - 1 || w.frames != shape.frames ||
      w.data.size() != w.rows * w.cols * w.frames) {
    throw DimensionError("grad_h_adjoint: dual field does not match an n_x x (n_y - 1) layout");
  }
  VideoCube out(shape);
  add_adjoint_h(shape, w.data.data(), 1.0, out.data().data());
  return out;
}

VideoCube grad_v_adjoint(const GradientField& w, const Shape& shape) {
  if (w.rows != shape.n_x - 1 || w.cols != shape.n_y || w.frames != shape.frames ||
      w.data.size() != w.rows * w.cols * w.frames) {
    throw DimensionError("grad_v_adjoint: dual field does not match an (n_x - 1) x n_y layout");
  }
  VideoCube out(shape);
  add_adjoint_v(shape, w.data.data(), 1.0, out.data().data());
  return out;
}

Frame grad_h_adjoint(const GradientField& w, std::size_t n_x, std::size_t n_y) {
  return grad_h_adjoint(w, Shape{n_x, n_y, 1}).frame_copy(0);
}

Frame grad_v_adjoint(const GradientField& w, std::size_t n_x, std::size_t n_y) {
  return grad_v_adjoint(w, Shape{n_x, n_y, 1}).frame_copy(0);
}

double tv_norm(const VideoCube& x, TvNorm norm) {
  const Shape& s = x.shape();
  const GradientField gh = grad_h(x);
  const GradientField gv = grad_v(x);
  const std::size_t per_h = gh.rows * gh.cols;
  const std::size_t per_v = gv.rows * gv.cols;

  if (norm == TvNorm::Anisotropic) return tv_penalty(x, norm);

  double total = 0.0;
  for (std::size_t k = 0; k < s.frames; ++k) {
    const double e = squared_norm(std::span(gh.data).subspan(k * per_h, per_h)) +
                     squared_norm(std::span(gv.data).subspan(k * per_v, per_v));
    total += norm == TvNorm::Isotropic2D ? std::sqrt(e) : e;
  }
  return norm == TvNorm::Isotropic2D ? total : std::sqrt(total);
}

double tv_penalty(const VideoCube& x, TvNorm norm) {
  const Shape& s = x.shape();
  const GradientField gh = grad_h(x);
  const GradientField gv = grad_v(x);

  if (norm == TvNorm::Anisotropic) {
    double total = 0.0;
    for (double g : gh.data) total += std::abs(g);
    for (double g : gv.data) total += std::abs(g);
    return total;
  }

  auto mag2 = [&](std::size_t i, std::size_t j, std::size_t k) {
    double m = 0.0;
    if (j + 1 < s.n_y) m += gh(i, j, k) * gh(i, j, k);
    if (i + 1 < s.n_x) m += gv(i, j, k) * gv(i, j, k);
    return m;
  };

  double total = 0.0;
  for (std::size_t i = 0; i < s.n_x; ++i) {
    for (std::size_t j = 0; j < s.n_y; ++j) {
      if (norm == TvNorm::Isotropic2D) {
        for (std::size_t k = 0; k < s.frames; ++k) total += std::sqrt(mag2(i, j, k));
      } else {
        double m = 0.0;
        for (std::size_t k = 0; k < s.frames; ++k) m += mag2(i, j, k);
        total += std::sqrt(m);
      }
    }
  }
  return total;
}

double prox_objective(const VideoCube& x, const VideoCube& z, double lambda, TvNorm norm) {
  double fit = 0.0;
  auto xv = x.data();
  auto zv = z.data();
  if (xv.size() != zv.size()) throw DimensionError("prox_objective: shape mismatch");
  for (std::size_t n = 0; n < xv.size(); ++n) fit += (xv[n] - zv[n]) * (xv[n] - zv[n]);
  return 0.5 * fit + lambda * tv_penalty(x, norm);
}

VideoCube denoise_clip(const VideoCube& z, const DenoiseConfig& cfg, DenoiseWorkspace* ws) {
  cfg.validate();
  const Shape& s = z.shape();
  const double threshold = kClipWeightFactor * cfg.lambda;
  const double step = 1.0 / cfg.clip_alpha;

  DualField w = initial_dual(s, ws);
  std::vector<double> theta(s.size());
  std::vector<double> g_h(w.h.data.size());
  std::vector<double> g_v(w.v.data.size());
  auto clip = [threshold](double t) { return std::clamp(t, -threshold, threshold); };

  for (int it = 0; it < cfg.in_iter; ++it) {
    // Both directions see the joint primal z - D_h^T w_h - D_v^T w_v.
    std::ranges::copy(z.data(), theta.begin());
    add_adjoint_h(s, w.h.data.data(), -1.0, theta.data());
    add_adjoint_v(s, w.v.data.data(), -1.0, theta.data());
    diff_h(s, theta.data(), g_h.data());
    diff_v(s, theta.data(), g_v.data());
    for (std::size_t n = 0; n < g_h.size(); ++n) w.h.data[n] = clip(w.h.data[n] + step * g_h[n]);
    for (std::size_t n = 0; n < g_v.size(); ++n) w.v.data[n] = clip(w.v.data[n] + step * g_v[n]);
    observe(ws, w);
  }

  // theta_h + theta_v - z with both halves evaluated at the final duals.
  VideoCube out = primal_from_dual(z, w, 1.0);
  store_dual(ws, std::move(w));
  return out;
}

VideoCube denoise_chambolle(const VideoCube& z, TvNorm norm, const DenoiseConfig& cfg, DenoiseWorkspace* ws) {
  cfg.validate();
  if (cfg.lambda == 0.0) return z;
  const Shape& s = z.shape();
  const double inv_lambda = 1.0 / cfg.lambda;

  DualField w = initial_dual(s, ws);
  std::vector<double> residual(s.size());
  std::vector<double> z_h(w.h.data.size());
  std::vector<double> z_v(w.v.data.size());

  for (int it = 0; it < cfg.in_iter; ++it) {
    // r = z / lambda - D^T w; ascent direction D r for the dual.
    adjoint_sum(s, w, residual);
    auto zv = z.data();
    for (std::size_t n = 0; n < residual.size(); ++n) residual[n] = zv[n] * inv_lambda - residual[n];
    diff_h(s, residual.data(), z_h.data());
    diff_v(s, residual.data(), z_v.data());
    project_dual(norm, cfg.projection_rule, cfg.cham_dt, s, w, z_h, z_v);
    observe(ws, w);
  }

  VideoCube out = primal_from_dual(z, w, cfg.lambda);
  store_dual(ws, std::move(w));
  return out;
}

VideoCube denoise_fgp(const VideoCube& z, TvNorm norm, const DenoiseConfig& cfg, DenoiseWorkspace* ws) {
  cfg.validate();
  if (cfg.lambda == 0.0) return z;
  const Shape& s = z.shape();
  const double step = 1.0 / (8.0 * cfg.lambda);

  DualField w = initial_dual(s, ws);
  DualField p_prev = w;
  DualField p = w;
  std::vector<double> theta(s.size());
  std::vector<double> z_h(w.h.data.size());
  std::vector<double> z_v(w.v.data.size());
  double nu = 1.0;

  for (int it = 0; it < cfg.in_iter; ++it) {
    adjoint_sum(s, w, theta);
    auto zv = z.data();
    for (std::size_t n = 0; n < theta.size(); ++n) theta[n] = zv[n] - cfg.lambda * theta[n];
    diff_h(s, theta.data(), z_h.data());
    diff_v(s, theta.data(), z_v.data());

    p.h.data = w.h.data;
    p.v.data = w.v.data;
    project_dual(norm, cfg.projection_rule, step, s, p, z_h, z_v);
    // The additive denominator keeps a feasible point feasible, but the
    // extrapolated point need not be feasible, so finish with max-one.
    if (cfg.projection_rule == ProjectionRule::Additive) {
      project_dual(norm, ProjectionRule::MaxOne, 0.0, s, p, z_h, z_v);
    }
    observe(ws, p);

    const double nu_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * nu * nu));
    const double momentum = (nu - 1.0) / nu_next;
    for (std::size_t n = 0; n < p.h.data.size(); ++n) {
      w.h.data[n] = p.h.data[n] + momentum * (p.h.data[n] - p_prev.h.data[n]);
    }
    for (std::size_t n = 0; n < p.v.data.size(); ++n) {
      w.v.data[n] = p.v.data[n] + momentum * (p.v.data[n] - p_prev.v.data[n]);
    }
    std::swap(p_prev, p);
    nu = nu_next;
  }

  VideoCube out = primal_from_dual(z, p_prev, cfg.lambda);
  store_dual(ws, std::move(p_prev));
  return out;
}

VideoCube tv_denoise(const VideoCube& z, const TvVariant& variant, const DenoiseConfig& cfg, DenoiseWorkspace* ws) {
  switch (variant.solver()) {
    case InnerSolver::Clip: return denoise_clip(z, cfg, ws);
    case InnerSolver::Chambolle: return denoise_chambolle(z, variant.norm(), cfg, ws);
    case InnerSolver::Fgp: return denoise_fgp(z, variant.norm(), cfg, ws);
  }
  throw ConfigError("unknown inner solver");
}

}  // namespace sci
