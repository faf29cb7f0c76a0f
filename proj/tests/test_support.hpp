#pragma once

#include <algorithm>
#include <cmath>

#include "uwimg/image.hpp"
#include "uwimg/imaging.hpp"
#include "uwimg/rng.hpp"

namespace uwimg::testing {

inline Plane random_plane(Rng& rng, Eigen::Index rows, Eigen::Index cols,
                          double lo = 0.0, double hi = 1.0) {
  Plane p(rows, cols);
  for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = rng.uniform(lo, hi);
  return p;
}

inline Image random_image(Rng& rng, Eigen::Index rows, Eigen::Index cols,
                          double lo = 0.0, double hi = 1.0) {
  Image img;
  for (int c = 0; c < 3; ++c) img[c] = random_plane(rng, rows, cols, lo, hi);
  return img;
}

// Piecewise-smooth scene: a ramp plus random Gaussian blobs, affinely
// mapped into [lo, hi]. Closer to a natural image than white noise.
inline Plane smooth_plane(Rng& rng, Eigen::Index rows, Eigen::Index cols,
                          double lo, double hi) {
  Plane p(rows, cols);
  const double ax = rng.uniform(-1.0, 1.0), ay = rng.uniform(-1.0, 1.0);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      p(r, c) = ax * double(c) / double(cols) + ay * double(r) / double(rows);
  const int blobs = 4 + rng.uniform_int(4);
  for (int b = 0; b < blobs; ++b) {
    const double cx = rng.uniform(0.0, double(cols));
    const double cy = rng.uniform(0.0, double(rows));
    const double amp = rng.uniform(-1.0, 1.0);
    const double sig = rng.uniform(0.05, 0.25) * double(std::min(rows, cols));
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) {
        const double dx = double(c) - cx, dy = double(r) - cy;
        p(r, c) += amp * std::exp(-(dx * dx + dy * dy) / (2.0 * sig * sig));
      }
  }
  const double mn = p.minCoeff(), mx = p.maxCoeff();
  if (mx > mn) p = lo + (hi - lo) * (p - mn) / (mx - mn);
  else p.setConstant(0.5 * (lo + hi));
  return p;
}

inline Image smooth_image(Rng& rng, Eigen::Index rows, Eigen::Index cols,
                          double lo = 0.05, double hi = 0.95) {
  Image img;
  for (int c = 0; c < 3; ++c) img[c] = smooth_plane(rng, rows, cols, lo, hi);
  return img;
}

inline DepthMap random_depth(Rng& rng, Eigen::Index rows, Eigen::Index cols,
                             double lo = 0.1, double hi = 2.0) {
  return random_plane(rng, rows, cols, lo, hi);
}

// Random parameters with descending beta; ranges keep J + A <= 1 when the
// clear image stays below 1 - ambient_hi, so synthesis never clamps.
inline WaterParams random_params(Rng& rng, double beta_hi = 1.2,
                                 double ambient_hi = 0.35,
                                 double alpha_hi = 1.5) {
  WaterParams p;
  double b[3] = {rng.uniform(0.05, beta_hi), rng.uniform(0.05, beta_hi),
                 rng.uniform(0.05, beta_hi)};
  std::sort(b, b + 3, std::greater<double>());
  p.beta << b[0], b[1], b[2];
  for (int c = 0; c < 3; ++c) p.ambient[c] = rng.uniform(0.0, ambient_hi);
  p.alpha = rng.uniform(0.1, alpha_hi);
  return p;
}

inline double max_abs_diff(const Image& a, const Image& b) {
  double m = 0.0;
  for (int c = 0; c < 3; ++c) m = std::max(m, (a[c] - b[c]).abs().maxCoeff());
  return m;
}

}  // namespace uwimg::testing
