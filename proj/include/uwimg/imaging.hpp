#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "uwimg/errors.hpp"
#include "uwimg/image.hpp"

namespace uwimg {

// Per-channel attenuation and ambient light plus the scene scattering
// coefficient controlling the haze veil. beta orders as (r, g, b); oceanic
// water attenuates red fastest.
struct WaterParams {
  Vec3 beta = Vec3::Zero();     // attenuation, 1/m
  Vec3 ambient = Vec3::Zero();  // background light, [0, 1]
  double alpha = 1.0;           // scattering coefficient, 1/m

  void validate() const {
    if (!beta.isFinite().all() || (beta < 0.0).any())
      throw InvalidParameter("WaterParams: beta must be finite and >= 0");
    if (!ambient.isFinite().all() || (ambient < 0.0).any() ||
        (ambient > 1.0).any())
      throw InvalidParameter("WaterParams: ambient must lie in [0, 1]");
    if (!std::isfinite(alpha) || alpha < 0.0)
      throw InvalidParameter("WaterParams: alpha must be finite and >= 0");
  }
};

// Built-in water types. The numbers are indicative configuration defaults,
// not calibrated optical constants; all satisfy beta_r >= beta_g >= beta_b.
inline const std::vector<std::string>& water_preset_names() {
  static const std::vector<std::string> names = {
      "clear-oceanic", "coastal-green", "turbid-green"};
  return names;
}

inline WaterParams water_preset(std::string_view name) {
  WaterParams p;
  if (name == "clear-oceanic") {
    p.beta << 0.40, 0.12, 0.07;
    p.ambient << 0.20, 0.45, 0.62;
    p.alpha = 0.8;
  } else if (name == "coastal-green") {
    p.beta << 0.65, 0.30, 0.22;
    p.ambient << 0.18, 0.50, 0.40;
    p.alpha = 1.0;
  } else if (name == "turbid-green") {
    p.beta << 1.10, 0.60, 0.45;
    p.ambient << 0.24, 0.52, 0.36;
    p.alpha = 1.4;
  } else {
    throw InvalidParameter("unknown water preset: " + std::string(name));
  }
  return p;
}

// Single-coefficient transmission plane exp(-coeff * d).
inline Plane transmission_plane(const DepthMap& depth, double coeff) {
  if (!std::isfinite(coeff) || coeff < 0.0)
    throw InvalidParameter("transmission: coefficient must be >= 0, got " +
                           std::to_string(coeff));
  require_depth(depth);
  return (-coeff * depth).exp();
}

// Per-channel transmission exp(-coeff_c * d). Values lie in (0, 1]; exactly
// 1 where d = 0 or the coefficient is 0.
inline TransmissionMap transmission_map(const DepthMap& depth,
                                        const Vec3& coeff) {
  TransmissionMap t;
  for (int c = 0; c < 3; ++c) t[c] = transmission_plane(depth, coeff[c]);
  return t;
}

inline TransmissionMap transmission_map(const DepthMap& depth, double coeff) {
  return transmission_map(depth, Vec3::Constant(coeff));
}

namespace detail {

inline void check_synth_inputs(const Image& clear, const DepthMap& depth,
                               const WaterParams& params) {
  params.validate();
  require_image(clear, "clear");
  require_depth(depth);
  require_same_shape(clear, depth, "clear/depth");
}

}  // namespace detail

// Simplified formation model: I = J * T + A * (1 - T), T = exp(-beta * d).
// Output clamped to [0, 1].
inline Image synthesize_legacy(const Image& clear, const DepthMap& depth,
                               const WaterParams& params) {
  detail::check_synth_inputs(clear, depth, params);
  Image out;
  for (int c = 0; c < 3; ++c) {
    Plane t = transmission_plane(depth, params.beta[c]);
    out[c] = (clear[c] * t + params.ambient[c] * (1.0 - t))
                 .max(0.0)
                 .min(1.0);
  }
  return out;
}

// Improved formation model before clamping:
//   I = J * T + A * T * (1 - T'),  T = exp(-beta * d),  T' = exp(-alpha * d).
// The ambient veil is itself attenuated per channel, which produces the
// depth-dependent haze missing from the legacy model.
inline Image synthesize_improved_unclamped(const Image& clear,
                                           const DepthMap& depth,
                                           const WaterParams& params) {
  detail::check_synth_inputs(clear, depth, params);
  Plane haze = 1.0 - transmission_plane(depth, params.alpha);
  Image out;
  for (int c = 0; c < 3; ++c) {
    Plane t = transmission_plane(depth, params.beta[c]);
    out[c] = clear[c] * t + params.ambient[c] * t * haze;
  }
  return out;
}

inline Image synthesize_improved(const Image& clear, const DepthMap& depth,
                                 const WaterParams& params) {
  return clamped01(synthesize_improved_unclamped(clear, depth, params));
}

// Diagonal Jacobian dI_c/dJ_c of the improved model: identical to the
// per-channel transmission. Needed by gradient-based inversion.
inline TransmissionMap forward_sensitivity(const DepthMap& depth,
                                           const WaterParams& params) {
  params.validate();
  return transmission_map(depth, params.beta);
}

}  // namespace uwimg
