#include "uwimg/ssim.hpp"

#include "uwimg/errors.hpp"
#include "uwimg/filters.hpp"

namespace uwimg {

void SsimConfig::validate() const {
  if (window < 3 || window % 2 == 0)
    throw InvalidParameter("SsimConfig: window must be odd and >= 3");
  if (!(sigma > 0)) throw InvalidParameter("SsimConfig: sigma must be > 0");
  if (!(dynamic_range > 0))
    throw InvalidParameter("SsimConfig: dynamic range must be > 0");
}

SsimStats ssim_statistics(const Plane& g, const Plane& r,
                          const SsimConfig& cfg) {
  cfg.validate();
  const Eigen::ArrayXd kern = gaussian_kernel_1d(cfg.radius(), cfg.sigma);
  SsimStats st;
  st.mu_g = correlate_valid(g, kern);
  st.mu_r = correlate_valid(r, kern);
  st.var_g = correlate_valid(g.square(), kern) - st.mu_g.square();
  st.var_r = correlate_valid(r.square(), kern) - st.mu_r.square();
  st.cov = correlate_valid(g * r, kern) - st.mu_g * st.mu_r;
  return st;
}

Plane ssim_map(const Plane& g, const Plane& r, const SsimConfig& cfg) {
  const SsimStats st = ssim_statistics(g, r, cfg);
  const double c1 = cfg.c1(), c2 = cfg.c2();
  return ((2.0 * st.mu_g * st.mu_r + c1) * (2.0 * st.cov + c2)) /
         ((st.mu_g.square() + st.mu_r.square() + c1) *
          (st.var_g + st.var_r + c2));
}

Plane ssim_cs_map(const Plane& g, const Plane& r, const SsimConfig& cfg) {
  const SsimStats st = ssim_statistics(g, r, cfg);
  const double c2 = cfg.c2();
  return (2.0 * st.cov + c2) / (st.var_g + st.var_r + c2);
}

void require_ssim_size(const Image& img, const SsimConfig& cfg) {
  if (img.rows() < cfg.window || img.cols() < cfg.window)
    throw InvalidInput("image " + shape_string(img.rows(), img.cols()) +
                       " is smaller than the " + std::to_string(cfg.window) +
                       "x" + std::to_string(cfg.window) + " SSIM window");
}

}  // namespace uwimg
