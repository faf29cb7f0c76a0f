#pragma once

#include <optional>

#include "uwimg/image.hpp"
#include "uwimg/ssim.hpp"

namespace uwimg {

// Linear combination weights of the composite underwater quality measure.
// Defaults are the published scale factors; scores depend strongly on them,
// so they stay configurable.
struct UiqmWeights {
  double c1 = 0.0282;  // colorfulness
  double c2 = 0.2953;  // sharpness
  double c3 = 3.5753;  // contrast
};

struct UiqmConfig {
  double trim_fraction = 0.1;  // per tail, alpha-trimmed colorfulness means
  int block = 8;               // block size for sharpness/contrast measures
  double log_guard = 1e-7;     // log(x) evaluated as log(max(x, guard))
  UiqmWeights weights{};

  void validate() const;
};

double mse(const Image& a, const Image& b);

// 10*log10(max_value^2 / mse). Identical images report +infinity.
double psnr(const Image& a, const Image& b, double max_value = 1.0);

// Mean windowed SSIM over the valid grid, averaged over channels; in
// [-1, 1]. Equals 1 - loss_ssim(a, b).value for the same window config.
double ssim_index(const Image& a, const Image& b, const SsimConfig& cfg = {});

// Colorfulness from the RG / YB opponent channels via asymmetric
// alpha-trimmed means and variances. Zero for achromatic images.
double uicm(const Image& img, const UiqmConfig& cfg = {});

// Sharpness: Sobel edge maps weighted into each channel, then a
// block-based log max/min enhancement measure per channel.
double uism(const Image& img, const UiqmConfig& cfg = {});

// Contrast: block-based entropy-style log measure of the Michelson
// contrast of the intensity plane. Zero for constant images.
double uiconm(const Image& img, const UiqmConfig& cfg = {});

double uiqm_combine(double uicm_value, double uism_value, double uiconm_value,
                    const UiqmWeights& weights = {});

struct QualityReport {
  double uicm = 0.0;
  double uism = 0.0;
  double uiconm = 0.0;
  double uiqm = 0.0;
  std::optional<double> mse;
  std::optional<double> psnr;
  std::optional<double> ssim;
};

QualityReport assess_quality(const Image& img, const UiqmConfig& cfg = {});
QualityReport assess_quality(const Image& img, const Image& reference,
                             const UiqmConfig& cfg = {});

}  // namespace uwimg
