#pragma once

#include <string_view>
#include <vector>

#include "uwimg/image.hpp"
#include "uwimg/imaging.hpp"
#include "uwimg/losses.hpp"

namespace uwimg {

using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct InversionConfig {
  // Transmission values below this are replaced before division.
  double transmission_floor = 0.05;
  int max_iters = 500;
  double step_size = 0.5;
  LossSpec loss{};
  // Stop once an accepted step decreases the loss by less than this.
  double stop_tol = 1e-8;
  // Immediate return when the initial gradient is already below this.
  double grad_tol = 1e-8;

  void validate() const;
};

// Exact model inversion when (beta, ambient, alpha, depth) are known:
//   J = (I - A * T * (1 - T')) / max(T, floor)
// clamped to [0, 1]. floor_mask flags pixels where any channel hit the
// transmission floor and the division is unreliable.
struct AnalyticInversion {
  Image image;
  Mask floor_mask;
  double floored_fraction = 0.0;
};

AnalyticInversion analytic_invert(const Image& observed, const DepthMap& depth,
                                  const WaterParams& params,
                                  const InversionConfig& cfg = {});

// First-order inversion of the improved model: minimizes
// cfg.loss(synthesize(J), observed) over J starting from J = observed.
// The loss trace over accepted steps is monotone non-increasing.
struct DescentResult {
  Image image;
  std::vector<double> trace;  // loss after each accepted step, trace[0] = initial
  int iterations = 0;         // accepted steps
  bool converged = false;     // stopped by tolerance rather than iteration cap
};

DescentResult invert_by_gradient_descent(const Image& observed,
                                         const DepthMap& depth,
                                         const WaterParams& params,
                                         const InversionConfig& cfg = {});

// Scalar transmission and ambient color estimated from the green/blue dark
// channel of a single image.
struct UdcpDecomposition {
  Plane transmission;  // values in [floor, 1]
  Vec3 ambient;
};

UdcpDecomposition udcp_decompose(const Image& observed, int patch = 15,
                                 double floor = 0.05);

// Transmission broadcast per channel; patch must be odd.
TransmissionMap estimate_transmission_udcp(const Image& observed,
                                           int patch = 15,
                                           double floor = 0.05);

// Single-image dehazing: J = (I - A) / max(T, floor) + A, clamped.
Image restore_udcp(const Image& observed, int patch = 15, double floor = 0.1);

// Per-channel 256-bin histogram equalization.
Image equalize_hist(const Image& observed);

// Scales each channel by mean(all) / mean(channel); clamped to [0, 1].
Image gray_world_balance(const Image& observed);

// CLI method names: "analytic", "graddesc", "udcp", "he", "grayworld".
const std::vector<std::string>& restoration_method_names();

}  // namespace uwimg
