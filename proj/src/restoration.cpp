#include "uwimg/restoration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "uwimg/errors.hpp"
#include "uwimg/filters.hpp"

namespace uwimg {

namespace {

constexpr double kUdcpOmega = 0.95;
// Fraction of brightest dark-channel pixels used for the ambient estimate.
constexpr double kAmbientTopFraction = 0.001;

double inf_norm(const Image& img) {
  double m = 0.0;
  for (int c = 0; c < 3; ++c) m = std::max(m, img[c].abs().maxCoeff());
  return m;
}

}  // namespace

void InversionConfig::validate() const {
  if (!(transmission_floor > 0.0) || transmission_floor >= 1.0)
    throw InvalidParameter("InversionConfig: transmission_floor in (0, 1)");
  if (max_iters < 0)
    throw InvalidParameter("InversionConfig: max_iters must be >= 0");
  if (!(step_size > 0.0))
    throw InvalidParameter("InversionConfig: step_size must be > 0");
  if (!(stop_tol > 0.0))
    throw InvalidParameter("InversionConfig: stop_tol must be > 0");
  if (!(grad_tol > 0.0))
    throw InvalidParameter("InversionConfig: grad_tol must be > 0");
  loss.validate();
}

AnalyticInversion analytic_invert(const Image& observed, const DepthMap& depth,
                                  const WaterParams& params,
                                  const InversionConfig& cfg) {
  cfg.validate();
  params.validate();
  require_image(observed, "observed");
  require_depth(depth);
  require_same_shape(observed, depth, "observed/depth");

  Plane haze = 1.0 - transmission_plane(depth, params.alpha);
  AnalyticInversion res;
  res.floor_mask = Mask::Constant(observed.rows(), observed.cols(), false);
  for (int c = 0; c < 3; ++c) {
    Plane t = transmission_plane(depth, params.beta[c]);
    res.floor_mask = res.floor_mask || (t < cfg.transmission_floor);
    res.image[c] = (observed[c] - params.ambient[c] * t * haze) /
                   t.max(cfg.transmission_floor);
  }
  clamp01_in_place(res.image);
  res.floored_fraction =
      double(res.floor_mask.count()) / double(res.floor_mask.size());
  return res;
}

DescentResult invert_by_gradient_descent(const Image& observed,
                                         const DepthMap& depth,
                                         const WaterParams& params,
                                         const InversionConfig& cfg) {
  cfg.validate();
  params.validate();
  require_image(observed, "observed");
  require_depth(depth);
  require_same_shape(observed, depth, "observed/depth");

  // The forward model is affine per pixel: I = J * T + Q with
  // Q = A * T * (1 - T'). Precompute both parts once.
  const TransmissionMap t = forward_sensitivity(depth, params);
  Plane haze = 1.0 - transmission_plane(depth, params.alpha);
  Image background;
  Image precond;  // inverse Gauss-Newton diagonal, 1 / max(T, floor)^2
  for (int c = 0; c < 3; ++c) {
    background[c] = params.ambient[c] * t[c] * haze;
    precond[c] = t[c].max(cfg.transmission_floor).square().inverse();
  }
  auto forward = [&](const Image& j) {
    Image out;
    for (int c = 0; c < 3; ++c) out[c] = j[c] * t[c] + background[c];
    return out;
  };
  auto chain_gradient = [&](const Image& loss_grad) {
    Image grad;
    for (int c = 0; c < 3; ++c) grad[c] = t[c] * loss_grad[c];
    return grad;
  };

  Image j = observed;
  LossResult lr = evaluate_loss(forward(j), observed, cfg.loss);
  std::vector<double> trace{lr.value};
  if (!std::isfinite(lr.value) || !all_finite(lr.gradient))
    throw DescentFailure("non-finite loss at initialization", trace);

  DescentResult res;
  Image grad = chain_gradient(lr.gradient);
  if (inf_norm(grad) < cfg.grad_tol) {
    res.image = clamped01(std::move(j));
    res.trace = std::move(trace);
    res.converged = true;
    return res;
  }

  double step = cfg.step_size;
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    Image dir;
    for (int c = 0; c < 3; ++c) dir[c] = -grad[c] * precond[c];

    // Accept-only backtracking: halve until the loss decreases, grow the
    // step after success so the scheme adapts to the loss normalization.
    bool accepted = false;
    Image j_try;
    double value_try = 0.0;
    for (int halvings = 0; halvings < 60; ++halvings) {
      j_try = j;
      for (int c = 0; c < 3; ++c) j_try[c] += step * dir[c];
      value_try = evaluate_loss_value(forward(j_try), observed, cfg.loss);
      if (std::isfinite(value_try) && value_try < trace.back()) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // No improving step along the (sub)gradient: stationary or at a kink.
      res.converged = true;
      break;
    }
    const double decrease = trace.back() - value_try;
    j = std::move(j_try);
    trace.push_back(value_try);
    ++res.iterations;

    lr = evaluate_loss(forward(j), observed, cfg.loss);
    if (!std::isfinite(lr.value) || !all_finite(lr.gradient))
      throw DescentFailure("non-finite loss during descent", trace);
    grad = chain_gradient(lr.gradient);

    if (decrease < cfg.stop_tol || inf_norm(grad) < cfg.grad_tol) {
      res.converged = true;
      break;
    }
    step = std::min(step * 2.0, 1e15);
  }

  res.image = clamped01(std::move(j));
  res.trace = std::move(trace);
  return res;
}

UdcpDecomposition udcp_decompose(const Image& observed, int patch,
                                 double floor) {
  require_image(observed, "observed");
  if (patch < 1 || patch % 2 == 0)
    throw InvalidParameter("udcp: patch must be odd and >= 1, got " +
                           std::to_string(patch));
  if (!(floor > 0.0) || floor >= 1.0)
    throw InvalidParameter("udcp: floor must lie in (0, 1)");
  const int radius = patch / 2;

  // Underwater dark channel: red is unreliable, so take min over G and B.
  Plane dark_raw = min_filter(observed[1].min(observed[2]), radius);

  // Ambient = mean color of the brightest dark-channel pixels.
  std::vector<Eigen::Index> order(size_t(dark_raw.size()));
  std::iota(order.begin(), order.end(), 0);
  const auto count = std::max<Eigen::Index>(
      1, Eigen::Index(std::llround(kAmbientTopFraction * double(dark_raw.size()))));
  std::nth_element(order.begin(), order.begin() + count, order.end(),
                   [&](Eigen::Index a, Eigen::Index b) {
                     return dark_raw(a) > dark_raw(b);
                   });
  UdcpDecomposition res;
  res.ambient = Vec3::Zero();
  for (Eigen::Index i = 0; i < count; ++i)
    for (int c = 0; c < 3; ++c) res.ambient[c] += observed[c](order[size_t(i)]);
  res.ambient /= double(count);

  const Vec3 safe = res.ambient.max(1e-6);
  Plane normalized = (observed[1] / safe[1]).min(observed[2] / safe[2]);
  Plane dark = min_filter(normalized, radius);
  res.transmission = (1.0 - kUdcpOmega * dark).max(floor).min(1.0);
  return res;
}

TransmissionMap estimate_transmission_udcp(const Image& observed, int patch,
                                           double floor) {
  const UdcpDecomposition d = udcp_decompose(observed, patch, floor);
  TransmissionMap t;
  for (int c = 0; c < 3; ++c) t[c] = d.transmission;
  return t;
}

Image restore_udcp(const Image& observed, int patch, double floor) {
  const UdcpDecomposition d = udcp_decompose(observed, patch, floor);
  Plane t = d.transmission.max(floor);
  Image out;
  for (int c = 0; c < 3; ++c)
    out[c] = (observed[c] - d.ambient[c]) / t + d.ambient[c];
  clamp01_in_place(out);
  return out;
}

Image equalize_hist(const Image& observed) {
  require_image(observed, "observed");
  constexpr int kLevels = 256;
  const double n = double(observed[0].size());
  Image out;
  for (int c = 0; c < 3; ++c) {
    const Plane& p = observed[c];
    int hist[kLevels] = {0};
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      int level = int(std::lround(std::clamp(p(i), 0.0, 1.0) * (kLevels - 1)));
      ++hist[level];
    }
    double cdf[kLevels];
    double run = 0.0;
    for (int k = 0; k < kLevels; ++k) {
      run += hist[k];
      cdf[k] = run / n;
    }
    double cdf_min = 1.0;
    for (int k = 0; k < kLevels; ++k)
      if (hist[k] > 0) {
        cdf_min = cdf[k];
        break;
      }
    if (cdf_min >= 1.0) {
      // Single occupied level; the remap is degenerate, keep the image.
      out[c] = p;
      continue;
    }
    double remap[kLevels];
    for (int k = 0; k < kLevels; ++k)
      remap[k] = std::clamp((cdf[k] - cdf_min) / (1.0 - cdf_min), 0.0, 1.0);
    out[c] = Plane(p.rows(), p.cols());
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      int level = int(std::lround(std::clamp(p(i), 0.0, 1.0) * (kLevels - 1)));
      out[c](i) = std::round(remap[level] * (kLevels - 1)) / (kLevels - 1);
    }
  }
  return out;
}

Image gray_world_balance(const Image& observed) {
  require_image(observed, "observed");
  const Vec3 means(observed[0].mean(), observed[1].mean(), observed[2].mean());
  if ((means <= 0.0).any())
    throw InvalidInput("gray_world_balance: a channel mean is zero");
  const double target = means.mean();
  Image out;
  for (int c = 0; c < 3; ++c) out[c] = observed[c] * (target / means[c]);
  clamp01_in_place(out);
  return out;
}

const std::vector<std::string>& restoration_method_names() {
  static const std::vector<std::string> names = {"analytic", "graddesc",
                                                 "udcp", "he", "grayworld"};
  return names;
}

}  // namespace uwimg
