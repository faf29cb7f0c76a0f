#include "uwimg/losses.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "uwimg/errors.hpp"
#include "uwimg/filters.hpp"
#include "uwimg/rng.hpp"

namespace uwimg {

namespace {

// MS-SSIM per-scale weights (finest to coarsest); truncated and
// renormalized when the image supports fewer dyadic scales.
constexpr int kMsSsimMaxScales = 5;
constexpr double kMsSsimWeights[kMsSsimMaxScales] = {0.0448, 0.2856, 0.3001,
                                                     0.2363, 0.1333};
// Scale terms below this are clamped before exponentiation; their gradient
// contribution is dropped.
constexpr double kScaleTermFloor = 1e-6;

void require_pair(const Image& g, const Image& r) {
  require_image(g, "g");
  require_image(r, "r");
  require_same_shape(g, r, "g/r");
}

LossResult l1_impl(const Image& g, const Image& r, bool want_grad) {
  const double n = double(g.size());
  LossResult res;
  if (want_grad) res.gradient = Image(g.rows(), g.cols());
  double sum = 0.0;
  for (int c = 0; c < 3; ++c) {
    Plane d = g[c] - r[c];
    sum += d.abs().sum();
    if (want_grad) res.gradient[c] = d.sign() / n;
  }
  res.value = sum / n;
  return res;
}

LossResult l2_impl(const Image& g, const Image& r, bool want_grad) {
  const double n = double(g.size());
  LossResult res;
  if (want_grad) res.gradient = Image(g.rows(), g.cols());
  double sum = 0.0;
  for (int c = 0; c < 3; ++c) {
    Plane d = g[c] - r[c];
    sum += d.square().sum();
    if (want_grad) res.gradient[c] = 2.0 * d / n;
  }
  res.value = sum / n;
  return res;
}

LossResult gdl_impl(const Image& g, const Image& r, bool want_grad) {
  if (g.rows() < 2 || g.cols() < 2)
    throw InvalidInput("GDL loss needs at least 2 pixels per axis");
  const Eigen::Index h = g.rows(), w = g.cols();
  const double n = 3.0 * double(h * (w - 1) + (h - 1) * w);
  LossResult res;
  if (want_grad) res.gradient = Image(h, w);
  double sum = 0.0;
  for (int c = 0; c < 3; ++c) {
    Plane ddx = (g[c].rightCols(w - 1) - g[c].leftCols(w - 1)) -
                (r[c].rightCols(w - 1) - r[c].leftCols(w - 1));
    Plane ddy = (g[c].bottomRows(h - 1) - g[c].topRows(h - 1)) -
                (r[c].bottomRows(h - 1) - r[c].topRows(h - 1));
    sum += ddx.abs().sum() + ddy.abs().sum();
    if (want_grad) {
      Plane sx = ddx.sign() / n;
      Plane sy = ddy.sign() / n;
      res.gradient[c].rightCols(w - 1) += sx;
      res.gradient[c].leftCols(w - 1) -= sx;
      res.gradient[c].bottomRows(h - 1) += sy;
      res.gradient[c].topRows(h - 1) -= sy;
    }
  }
  res.value = sum / n;
  return res;
}

// Shared SSIM-channel evaluation. With want_grad the gradient of
// mean(S) w.r.t. g is produced via the adjoint of the window filter.
struct SsimChannel {
  double mean_ssim = 0.0;
  Plane grad;  // d mean(S) / d g, full grid
};

SsimChannel ssim_channel(const Plane& g, const Plane& r, const SsimConfig& cfg,
                         bool want_grad) {
  const Eigen::ArrayXd kern = gaussian_kernel_1d(cfg.radius(), cfg.sigma);
  const SsimStats st = ssim_statistics(g, r, cfg);
  const double c1 = cfg.c1(), c2 = cfg.c2();
  Plane a1 = 2.0 * st.mu_g * st.mu_r + c1;
  Plane a2 = 2.0 * st.cov + c2;
  Plane b1 = st.mu_g.square() + st.mu_r.square() + c1;
  Plane b2 = st.var_g + st.var_r + c2;
  Plane s = (a1 * a2) / (b1 * b2);
  const double nv = double(s.size());

  SsimChannel out;
  out.mean_ssim = s.sum() / nv;
  if (!want_grad) return out;

  // dS/dmu_g, dS/dvar_g, dS/dcov on the valid grid.
  Plane f1 = 2.0 * (st.mu_r * a2 * b1 - st.mu_g * a1 * a2) / (b1.square() * b2);
  Plane f2 = -(a1 * a2) / (b1 * b2.square());
  Plane f3 = 2.0 * a1 / (b1 * b2);
  // Chain through mu_g, var_g and cov in one scatter each; the g- and
  // r-valued factors multiply pointwise after the adjoint.
  Plane core = f1 - 2.0 * f2 * st.mu_g - f3 * st.mu_r;
  out.grad = (correlate_valid_adjoint(core, kern, g.rows(), g.cols()) +
              2.0 * g * correlate_valid_adjoint(f2, kern, g.rows(), g.cols()) +
              r * correlate_valid_adjoint(f3, kern, g.rows(), g.cols())) /
             nv;
  return out;
}

// Contrast-structure term of one MS-SSIM scale.
SsimChannel cs_channel(const Plane& g, const Plane& r, const SsimConfig& cfg,
                       bool want_grad) {
  const Eigen::ArrayXd kern = gaussian_kernel_1d(cfg.radius(), cfg.sigma);
  const SsimStats st = ssim_statistics(g, r, cfg);
  const double c2 = cfg.c2();
  Plane a2 = 2.0 * st.cov + c2;
  Plane b2 = st.var_g + st.var_r + c2;
  Plane cs = a2 / b2;
  const double nv = double(cs.size());

  SsimChannel out;
  out.mean_ssim = cs.sum() / nv;
  if (!want_grad) return out;

  Plane f2 = -a2 / b2.square();  // d cs / d var_g
  Plane f3 = 2.0 / b2;           // d cs / d cov
  Plane core = -2.0 * f2 * st.mu_g - f3 * st.mu_r;
  out.grad = (correlate_valid_adjoint(core, kern, g.rows(), g.cols()) +
              2.0 * g * correlate_valid_adjoint(f2, kern, g.rows(), g.cols()) +
              r * correlate_valid_adjoint(f3, kern, g.rows(), g.cols())) /
             nv;
  return out;
}

LossResult ssim_loss_impl(const Image& g, const Image& r,
                          const SsimConfig& cfg, bool want_grad) {
  require_ssim_size(g, cfg);
  LossResult res;
  if (want_grad) res.gradient = Image(g.rows(), g.cols());
  double acc = 0.0;
  for (int c = 0; c < 3; ++c) {
    SsimChannel sc = ssim_channel(g[c], r[c], cfg, want_grad);
    acc += 1.0 - sc.mean_ssim;
    if (want_grad) res.gradient[c] = -sc.grad / 3.0;
  }
  res.value = acc / 3.0;
  return res;
}

int msssim_feasible_scales(const Image& img, const SsimConfig& cfg) {
  Eigen::Index side = std::min(img.rows(), img.cols());
  int scales = 0;
  while (scales < kMsSsimMaxScales && side >= cfg.window) {
    ++scales;
    side /= 2;
  }
  return scales;
}

LossResult msssim_loss_impl(const Image& g, const Image& r,
                            const SsimConfig& cfg, bool want_grad) {
  const int scales = msssim_feasible_scales(g, cfg);
  if (scales == 0)
    throw InvalidInput("MS-SSIM needs an image of at least " +
                       std::to_string(cfg.window) + "x" +
                       std::to_string(cfg.window) + ", got " +
                       shape_string(g.rows(), g.cols()));
  std::vector<double> weights(kMsSsimWeights, kMsSsimWeights + scales);
  const double wsum =
      std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double& w : weights) w /= wsum;

  LossResult res;
  if (want_grad) res.gradient = Image(g.rows(), g.cols());
  double acc = 0.0;
  for (int c = 0; c < 3; ++c) {
    std::vector<Plane> gs{g[c]}, rs{r[c]};
    for (int j = 1; j < scales; ++j) {
      gs.push_back(mean_pool2(gs.back()));
      rs.push_back(mean_pool2(rs.back()));
    }
    std::vector<double> terms(scales);
    std::vector<Plane> term_grads(scales);
    for (int j = 0; j < scales; ++j) {
      SsimChannel sc = (j == scales - 1)
                           ? ssim_channel(gs[j], rs[j], cfg, want_grad)
                           : cs_channel(gs[j], rs[j], cfg, want_grad);
      terms[j] = sc.mean_ssim;
      if (want_grad) term_grads[j] = std::move(sc.grad);
    }
    double ms = 1.0;
    for (int j = 0; j < scales; ++j)
      ms *= std::pow(std::max(terms[j], kScaleTermFloor), weights[j]);
    acc += 1.0 - ms;
    if (want_grad) {
      Plane grad = Plane::Zero(g.rows(), g.cols());
      for (int j = 0; j < scales; ++j) {
        if (terms[j] <= kScaleTermFloor) continue;
        Plane gj = (ms * weights[j] / terms[j]) * term_grads[j];
        for (int k = j; k > 0; --k)
          gj = mean_pool2_adjoint(gj, gs[k - 1].rows(), gs[k - 1].cols());
        grad += gj;
      }
      res.gradient[c] = -grad / 3.0;
    }
  }
  res.value = acc / 3.0;
  return res;
}

LossResult evaluate_impl(const Image& g, const Image& r, const LossSpec& spec,
                         bool want_grad) {
  spec.validate();
  require_pair(g, r);
  switch (spec.kind) {
    case LossKind::L1:
      return l1_impl(g, r, want_grad);
    case LossKind::L2:
      return l2_impl(g, r, want_grad);
    case LossKind::Ssim:
      return ssim_loss_impl(g, r, SsimConfig{}, want_grad);
    case LossKind::MsSsim:
      return msssim_loss_impl(g, r, SsimConfig{}, want_grad);
    case LossKind::Gdl:
      return gdl_impl(g, r, want_grad);
    default:
      break;
  }
  // Combined kind: mix_alpha * base + (1 - mix_alpha) * L1.
  LossSpec base_spec{base_of_combined(spec.kind), spec.mix_alpha};
  LossResult base = evaluate_impl(g, r, base_spec, want_grad);
  LossResult l1 = l1_impl(g, r, want_grad);
  LossResult res;
  res.value = spec.mix_alpha * base.value + (1.0 - spec.mix_alpha) * l1.value;
  if (want_grad) {
    res.gradient = Image(g.rows(), g.cols());
    for (int c = 0; c < 3; ++c)
      res.gradient[c] = spec.mix_alpha * base.gradient[c] +
                        (1.0 - spec.mix_alpha) * l1.gradient[c];
  }
  return res;
}

}  // namespace

std::string_view loss_kind_name(LossKind kind) {
  switch (kind) {
    case LossKind::L1:
      return "l1";
    case LossKind::L2:
      return "l2";
    case LossKind::Ssim:
      return "ssim";
    case LossKind::MsSsim:
      return "msssim";
    case LossKind::Gdl:
      return "gdl";
    case LossKind::L1L2:
      return "l1l2";
    case LossKind::L1Ssim:
      return "l1ssim";
    case LossKind::L1MsSsim:
      return "l1msssim";
    case LossKind::L1Gdl:
      return "l1gdl";
  }
  return "?";
}

LossKind loss_kind_from_name(std::string_view name) {
  for (LossKind k :
       {LossKind::L1, LossKind::L2, LossKind::Ssim, LossKind::MsSsim,
        LossKind::Gdl, LossKind::L1L2, LossKind::L1Ssim, LossKind::L1MsSsim,
        LossKind::L1Gdl}) {
    if (loss_kind_name(k) == name) return k;
  }
  throw InvalidParameter("unknown loss kind: " + std::string(name));
}

bool is_combined(LossKind kind) {
  switch (kind) {
    case LossKind::L1L2:
    case LossKind::L1Ssim:
    case LossKind::L1MsSsim:
    case LossKind::L1Gdl:
      return true;
    default:
      return false;
  }
}

LossKind base_of_combined(LossKind kind) {
  switch (kind) {
    case LossKind::L1L2:
      return LossKind::L2;
    case LossKind::L1Ssim:
      return LossKind::Ssim;
    case LossKind::L1MsSsim:
      return LossKind::MsSsim;
    case LossKind::L1Gdl:
      return LossKind::Gdl;
    default:
      throw InvalidParameter("loss kind " + std::string(loss_kind_name(kind)) +
                             " is not a combined kind");
  }
}

void LossSpec::validate() const {
  if (!std::isfinite(mix_alpha) || mix_alpha < 0.0 || mix_alpha > 1.0)
    throw InvalidParameter("LossSpec: mix_alpha must lie in [0, 1]");
}

LossResult loss_l1(const Image& g, const Image& r) {
  require_pair(g, r);
  return l1_impl(g, r, true);
}

LossResult loss_l2(const Image& g, const Image& r) {
  require_pair(g, r);
  return l2_impl(g, r, true);
}

LossResult loss_ssim(const Image& g, const Image& r, const SsimConfig& cfg) {
  require_pair(g, r);
  return ssim_loss_impl(g, r, cfg, true);
}

LossResult loss_msssim(const Image& g, const Image& r, const SsimConfig& cfg) {
  require_pair(g, r);
  return msssim_loss_impl(g, r, cfg, true);
}

LossResult loss_gdl(const Image& g, const Image& r) {
  require_pair(g, r);
  return gdl_impl(g, r, true);
}

LossResult loss_combine(const Image& g, const Image& r, const LossSpec& spec) {
  if (!is_combined(spec.kind))
    throw InvalidParameter("loss_combine requires a combined kind, got " +
                           std::string(loss_kind_name(spec.kind)));
  return evaluate_impl(g, r, spec, true);
}

LossResult evaluate_loss(const Image& g, const Image& r,
                         const LossSpec& spec) {
  return evaluate_impl(g, r, spec, true);
}

double evaluate_loss_value(const Image& g, const Image& r,
                           const LossSpec& spec) {
  return evaluate_impl(g, r, spec, false).value;
}

double check_gradient(const LossSpec& spec, const Image& g, const Image& r,
                      double step, int samples, uint64_t seed) {
  if (!(step > 0) || !std::isfinite(step))
    throw InvalidParameter("check_gradient: step must be > 0");
  if (samples < 1) throw InvalidParameter("check_gradient: samples must be >= 1");
  const LossResult base = evaluate_loss(g, r, spec);
  const double l0 = base.value;

  Image probe = g;
  auto value_with = [&](int c, Eigen::Index i, Eigen::Index j, double v) {
    const double old = probe[c](i, j);
    probe[c](i, j) = v;
    const double val = evaluate_loss_value(probe, r, spec);
    probe[c](i, j) = old;
    return val;
  };

  Rng rng(seed, 0x6772616463686b);
  double max_err = 0.0;
  for (int s = 0; s < samples; ++s) {
    const int c = rng.uniform_int(3);
    const Eigen::Index i = rng.uniform_int(int(g.rows()));
    const Eigen::Index j = rng.uniform_int(int(g.cols()));
    const double x = g[c](i, j);
    const double lp = value_with(c, i, j, x + step);
    const double lm = value_with(c, i, j, x - step);
    const double numeric = (lp - lm) / (2.0 * step);
    const double analytic = base.gradient[c](i, j);
    if (std::max(std::abs(numeric), std::abs(analytic)) < 1e-12) continue;
    // One-sided slopes disagreeing flags a kink (L1 tie, GDL sign flip);
    // relative error is meaningless there.
    const double sp = (lp - l0) / step;
    const double sm = (l0 - lm) / step;
    const double scale = std::max(std::abs(sp), std::abs(sm));
    if (scale > 0.0 && std::abs(sp - sm) > 0.25 * scale) continue;
    const double err =
        std::abs(analytic - numeric) / std::max(std::abs(numeric), 1e-8);
    max_err = std::max(max_err, err);
  }
  return max_err;
}

}  // namespace uwimg
