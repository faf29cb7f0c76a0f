#include "uwimg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "uwimg/errors.hpp"
#include "uwimg/filters.hpp"

namespace uwimg {

namespace {

// UICM linear-combination constants from the published colorfulness
// measure.
constexpr double kUicmMeanCoeff = -0.0268;
constexpr double kUicmVarCoeff = 0.1586;
// Channel weights for the sharpness measure (luma decomposition).
constexpr double kUismLambda[3] = {0.299, 0.587, 0.114};

void require_metric_pair(const Image& a, const Image& b) {
  require_image(a, "a");
  require_image(b, "b");
  require_same_shape(a, b, "a/b");
}

double guarded_log(double x, double guard) {
  return std::log(std::max(x, guard));
}

// Mean after dropping a fraction of each tail.
double trimmed_mean(const Plane& p, double trim_fraction) {
  std::vector<double> v(p.data(), p.data() + p.size());
  std::sort(v.begin(), v.end());
  const auto n = static_cast<long>(v.size());
  long k = static_cast<long>(std::floor(trim_fraction * double(n)));
  k = std::min(k, (n - 1) / 2);
  double sum = 0.0;
  for (long i = k; i < n - k; ++i) sum += v[size_t(i)];
  return sum / double(n - 2 * k);
}

}  // namespace

void UiqmConfig::validate() const {
  if (!(trim_fraction >= 0.0) || trim_fraction >= 0.5)
    throw InvalidParameter("UiqmConfig: trim_fraction must lie in [0, 0.5)");
  if (block < 1) throw InvalidParameter("UiqmConfig: block must be >= 1");
  if (!(log_guard > 0.0))
    throw InvalidParameter("UiqmConfig: log_guard must be > 0");
}

double mse(const Image& a, const Image& b) {
  require_metric_pair(a, b);
  double sum = 0.0;
  for (int c = 0; c < 3; ++c) sum += (a[c] - b[c]).square().sum();
  return sum / double(a.size());
}

double psnr(const Image& a, const Image& b, double max_value) {
  if (!(max_value > 0.0))
    throw InvalidParameter("psnr: max_value must be > 0");
  const double m = mse(a, b);
  if (m == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(max_value * max_value / m);
}

double ssim_index(const Image& a, const Image& b, const SsimConfig& cfg) {
  require_metric_pair(a, b);
  require_ssim_size(a, cfg);
  double acc = 0.0;
  for (int c = 0; c < 3; ++c) acc += ssim_map(a[c], b[c], cfg).mean();
  return acc / 3.0;
}

double uicm(const Image& img, const UiqmConfig& cfg) {
  require_image(img);
  cfg.validate();
  Plane rg = img[0] - img[1];
  Plane yb = 0.5 * (img[0] + img[1]) - img[2];
  const double mu_rg = trimmed_mean(rg, cfg.trim_fraction);
  const double mu_yb = trimmed_mean(yb, cfg.trim_fraction);
  const double s2_rg = (rg - mu_rg).square().mean();
  const double s2_yb = (yb - mu_yb).square().mean();
  return kUicmMeanCoeff * std::sqrt(mu_rg * mu_rg + mu_yb * mu_yb) +
         kUicmVarCoeff * std::sqrt(s2_rg + s2_yb);
}

namespace {

// Log max/min enhancement measure over full blocks; partial edge blocks
// are dropped. All-equal blocks contribute log(1) = 0.
double eme(const Plane& p, int block, double guard) {
  const Eigen::Index k1 = p.rows() / block;
  const Eigen::Index k2 = p.cols() / block;
  if (k1 < 1 || k2 < 1)
    throw InvalidInput("block measure needs at least one full " +
                       std::to_string(block) + "x" + std::to_string(block) +
                       " block, image is " + shape_string(p.rows(), p.cols()));
  double sum = 0.0;
  for (Eigen::Index br = 0; br < k1; ++br)
    for (Eigen::Index bc = 0; bc < k2; ++bc) {
      auto blk = p.block(br * block, bc * block, block, block);
      const double mx = blk.maxCoeff();
      const double mn = blk.minCoeff();
      if (mx > mn) sum += guarded_log(mx, guard) - guarded_log(mn, guard);
    }
  return 2.0 / double(k1 * k2) * sum;
}

}  // namespace

double uism(const Image& img, const UiqmConfig& cfg) {
  require_image(img);
  cfg.validate();
  double acc = 0.0;
  for (int c = 0; c < 3; ++c) {
    Plane mag = (sobel_x(img[c]).square() + sobel_y(img[c]).square()).sqrt();
    acc += kUismLambda[c] * eme(mag * img[c], cfg.block, cfg.log_guard);
  }
  return acc;
}

double uiconm(const Image& img, const UiqmConfig& cfg) {
  require_image(img);
  cfg.validate();
  Plane intensity = (img[0] + img[1] + img[2]) / 3.0;
  const int block = cfg.block;
  const Eigen::Index k1 = intensity.rows() / block;
  const Eigen::Index k2 = intensity.cols() / block;
  if (k1 < 1 || k2 < 1)
    throw InvalidInput("uiconm needs at least one full block");
  double sum = 0.0;
  for (Eigen::Index br = 0; br < k1; ++br)
    for (Eigen::Index bc = 0; bc < k2; ++bc) {
      auto blk = intensity.block(br * block, bc * block, block, block);
      const double mx = blk.maxCoeff();
      const double mn = blk.minCoeff();
      const double top = mx - mn;
      const double bot = mx + mn;
      if (top <= 0.0 || bot <= 0.0) continue;
      const double m = top / bot;  // Michelson contrast of the block
      sum += m * guarded_log(m, cfg.log_guard);
    }
  return -sum / double(k1 * k2);
}

double uiqm_combine(double uicm_value, double uism_value, double uiconm_value,
                    const UiqmWeights& weights) {
  if (!std::isfinite(uicm_value) || !std::isfinite(uism_value) ||
      !std::isfinite(uiconm_value))
    throw InvalidInput("uiqm_combine: components must be finite");
  return weights.c1 * uicm_value + weights.c2 * uism_value +
         weights.c3 * uiconm_value;
}

QualityReport assess_quality(const Image& img, const UiqmConfig& cfg) {
  QualityReport rep;
  rep.uicm = uicm(img, cfg);
  rep.uism = uism(img, cfg);
  rep.uiconm = uiconm(img, cfg);
  rep.uiqm = uiqm_combine(rep.uicm, rep.uism, rep.uiconm, cfg.weights);
  return rep;
}

QualityReport assess_quality(const Image& img, const Image& reference,
                             const UiqmConfig& cfg) {
  QualityReport rep = assess_quality(img, cfg);
  rep.mse = mse(img, reference);
  rep.psnr = psnr(img, reference);
  rep.ssim = ssim_index(img, reference);
  return rep;
}

}  // namespace uwimg
