#pragma once

#include <cstdint>
#include <string_view>

#include "uwimg/image.hpp"
#include "uwimg/ssim.hpp"

namespace uwimg {

// Restoration losses: five bases plus the convex combinations of each
// non-L1 base with L1.
enum class LossKind {
  L1,
  L2,
  Ssim,
  MsSsim,
  Gdl,
  L1L2,
  L1Ssim,
  L1MsSsim,
  L1Gdl,
};

// Wire names used by CLI flags and config files.
std::string_view loss_kind_name(LossKind kind);
LossKind loss_kind_from_name(std::string_view name);
bool is_combined(LossKind kind);
// The non-L1 component of a combined kind.
LossKind base_of_combined(LossKind kind);

struct LossSpec {
  LossKind kind = LossKind::L2;
  // Weight of the base component in combined kinds; the L1 component gets
  // (1 - mix_alpha). Ignored for plain kinds.
  double mix_alpha = 0.8;

  void validate() const;
};

// Scalar loss value plus the analytic gradient with respect to the first
// (reconstructed) image.
struct LossResult {
  double value = 0.0;
  Image gradient;
};

LossResult loss_l1(const Image& g, const Image& r);
LossResult loss_l2(const Image& g, const Image& r);
LossResult loss_ssim(const Image& g, const Image& r,
                     const SsimConfig& cfg = {});
LossResult loss_msssim(const Image& g, const Image& r,
                       const SsimConfig& cfg = {});
LossResult loss_gdl(const Image& g, const Image& r);
// Combined kinds only; throws InvalidParameter otherwise.
LossResult loss_combine(const Image& g, const Image& r, const LossSpec& spec);

// Dispatch on any kind.
LossResult evaluate_loss(const Image& g, const Image& r, const LossSpec& spec);
// Value-only fast path (no gradient work); used by line searches and
// finite-difference probes.
double evaluate_loss_value(const Image& g, const Image& r,
                           const LossSpec& spec);

// Max relative error between the analytic gradient and central finite
// differences over a random subset of coordinates. Points where the value
// function is locally non-smooth (one-sided slopes disagree) or locally
// flat are skipped.
double check_gradient(const LossSpec& spec, const Image& g, const Image& r,
                      double step, int samples = 200, uint64_t seed = 0);

}  // namespace uwimg
