#pragma once

#include "uwimg/image.hpp"

namespace uwimg {

// Windowed SSIM configuration: 11x11 Gaussian window, sigma 1.5, and the
// usual stability constants for a dynamic range of 1.
struct SsimConfig {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 1.0;

  double c1() const { return (k1 * dynamic_range) * (k1 * dynamic_range); }
  double c2() const { return (k2 * dynamic_range) * (k2 * dynamic_range); }
  int radius() const { return window / 2; }

  void validate() const;
};

// Local Gaussian-window statistics on the valid grid (fully covered
// window positions only).
struct SsimStats {
  Plane mu_g, mu_r;    // window means
  Plane var_g, var_r;  // window variances
  Plane cov;           // window covariance
};

SsimStats ssim_statistics(const Plane& g, const Plane& r,
                          const SsimConfig& cfg = {});

// Full SSIM map on the valid grid.
Plane ssim_map(const Plane& g, const Plane& r, const SsimConfig& cfg = {});

// Contrast-structure component (2*cov + C2) / (var_g + var_r + C2), the
// per-scale term of MS-SSIM.
Plane ssim_cs_map(const Plane& g, const Plane& r, const SsimConfig& cfg = {});

// Throws InvalidInput when either dimension is below the window size.
void require_ssim_size(const Image& img, const SsimConfig& cfg);

}  // namespace uwimg
