#include "uwimg/filters.hpp"

#include <algorithm>
#include <cmath>

#include "uwimg/errors.hpp"

namespace uwimg {

Eigen::ArrayXd gaussian_kernel_1d(int radius, double sigma) {
  if (radius < 0 || !(sigma > 0))
    throw InvalidParameter("gaussian_kernel_1d: radius >= 0 and sigma > 0");
  Eigen::ArrayXd k(2 * radius + 1);
  for (int i = -radius; i <= radius; ++i)
    k(i + radius) = std::exp(-0.5 * (double(i) * i) / (sigma * sigma));
  return k / k.sum();
}

Plane correlate_valid(const Plane& img, const Eigen::ArrayXd& kernel) {
  const Eigen::Index klen = kernel.size();
  if (img.rows() < klen || img.cols() < klen)
    throw InvalidInput("correlate_valid: image smaller than kernel");

  // Horizontal pass.
  Plane h(img.rows(), img.cols() - klen + 1);
  for (Eigen::Index c = 0; c < h.cols(); ++c) {
    h.col(c) = kernel(0) * img.col(c);
    for (Eigen::Index k = 1; k < klen; ++k) h.col(c) += kernel(k) * img.col(c + k);
  }
  // Vertical pass.
  Plane out(img.rows() - klen + 1, h.cols());
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    out.row(r) = kernel(0) * h.row(r);
    for (Eigen::Index k = 1; k < klen; ++k) out.row(r) += kernel(k) * h.row(r + k);
  }
  return out;
}

Plane correlate_valid_adjoint(const Plane& cotangent,
                              const Eigen::ArrayXd& kernel, Eigen::Index rows,
                              Eigen::Index cols) {
  const Eigen::Index klen = kernel.size();
  if (cotangent.rows() != rows - klen + 1 || cotangent.cols() != cols - klen + 1)
    throw ShapeError("correlate_valid_adjoint: cotangent shape mismatch");

  // Vertical scatter.
  Plane v = Plane::Zero(rows, cotangent.cols());
  for (Eigen::Index r = 0; r < cotangent.rows(); ++r)
    for (Eigen::Index k = 0; k < klen; ++k)
      v.row(r + k) += kernel(k) * cotangent.row(r);
  // Horizontal scatter.
  Plane out = Plane::Zero(rows, cols);
  for (Eigen::Index c = 0; c < cotangent.cols(); ++c)
    for (Eigen::Index k = 0; k < klen; ++k)
      out.col(c + k) += kernel(k) * v.col(c);
  return out;
}

Plane mean_pool2(const Plane& p) {
  const Eigen::Index rows = p.rows() / 2, cols = p.cols() / 2;
  if (rows < 1 || cols < 1)
    throw InvalidInput("mean_pool2: image smaller than 2x2");
  Plane out(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      out(r, c) = 0.25 * (p(2 * r, 2 * c) + p(2 * r + 1, 2 * c) +
                          p(2 * r, 2 * c + 1) + p(2 * r + 1, 2 * c + 1));
  return out;
}

Plane mean_pool2_adjoint(const Plane& cotangent, Eigen::Index rows,
                         Eigen::Index cols) {
  if (cotangent.rows() != rows / 2 || cotangent.cols() != cols / 2)
    throw ShapeError("mean_pool2_adjoint: cotangent shape mismatch");
  Plane out = Plane::Zero(rows, cols);
  for (Eigen::Index r = 0; r < cotangent.rows(); ++r)
    for (Eigen::Index c = 0; c < cotangent.cols(); ++c) {
      const double v = 0.25 * cotangent(r, c);
      out(2 * r, 2 * c) += v;
      out(2 * r + 1, 2 * c) += v;
      out(2 * r, 2 * c + 1) += v;
      out(2 * r + 1, 2 * c + 1) += v;
    }
  return out;
}

namespace {

inline Eigen::Index clamp_index(Eigen::Index i, Eigen::Index n) {
  return std::max<Eigen::Index>(0, std::min(i, n - 1));
}

// 3x3 correlation with replicated borders.
Plane correlate3_replicate(const Plane& p, const double k[3][3]) {
  Plane out(p.rows(), p.cols());
  for (Eigen::Index r = 0; r < p.rows(); ++r)
    for (Eigen::Index c = 0; c < p.cols(); ++c) {
      double acc = 0.0;
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc)
          acc += k[dr + 1][dc + 1] *
                 p(clamp_index(r + dr, p.rows()), clamp_index(c + dc, p.cols()));
      out(r, c) = acc;
    }
  return out;
}

}  // namespace

Plane sobel_x(const Plane& p) {
  static const double k[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
  return correlate3_replicate(p, k);
}

Plane sobel_y(const Plane& p) {
  static const double k[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};
  return correlate3_replicate(p, k);
}

Plane min_filter(const Plane& p, int radius) {
  if (radius < 0) throw InvalidParameter("min_filter: radius must be >= 0");
  if (radius == 0) return p;
  // Horizontal then vertical pass; window truncated at the borders.
  Plane h(p.rows(), p.cols());
  for (Eigen::Index r = 0; r < p.rows(); ++r)
    for (Eigen::Index c = 0; c < p.cols(); ++c) {
      const Eigen::Index lo = std::max<Eigen::Index>(0, c - radius);
      const Eigen::Index hi = std::min(p.cols() - 1, c + radius);
      h(r, c) = p.row(r).segment(lo, hi - lo + 1).minCoeff();
    }
  Plane out(p.rows(), p.cols());
  for (Eigen::Index c = 0; c < p.cols(); ++c)
    for (Eigen::Index r = 0; r < p.rows(); ++r) {
      const Eigen::Index lo = std::max<Eigen::Index>(0, r - radius);
      const Eigen::Index hi = std::min(p.rows() - 1, r + radius);
      out(r, c) = h.col(c).segment(lo, hi - lo + 1).minCoeff();
    }
  return out;
}

Plane resize_bilinear(const Plane& p, Eigen::Index out_rows,
                      Eigen::Index out_cols) {
  if (out_rows < 1 || out_cols < 1)
    throw InvalidParameter("resize: output dimensions must be >= 1");
  Plane out(out_rows, out_cols);
  const double sr = double(p.rows()) / double(out_rows);
  const double sc = double(p.cols()) / double(out_cols);
  for (Eigen::Index r = 0; r < out_rows; ++r) {
    double fr = (double(r) + 0.5) * sr - 0.5;
    fr = std::clamp(fr, 0.0, double(p.rows() - 1));
    const Eigen::Index r0 = Eigen::Index(fr);
    const Eigen::Index r1 = std::min(r0 + 1, p.rows() - 1);
    const double wr = fr - double(r0);
    for (Eigen::Index c = 0; c < out_cols; ++c) {
      double fc = (double(c) + 0.5) * sc - 0.5;
      fc = std::clamp(fc, 0.0, double(p.cols() - 1));
      const Eigen::Index c0 = Eigen::Index(fc);
      const Eigen::Index c1 = std::min(c0 + 1, p.cols() - 1);
      const double wc = fc - double(c0);
      out(r, c) = (1 - wr) * ((1 - wc) * p(r0, c0) + wc * p(r0, c1)) +
                  wr * ((1 - wc) * p(r1, c0) + wc * p(r1, c1));
    }
  }
  return out;
}

Plane resize_nearest(const Plane& p, Eigen::Index out_rows,
                     Eigen::Index out_cols) {
  if (out_rows < 1 || out_cols < 1)
    throw InvalidParameter("resize: output dimensions must be >= 1");
  Plane out(out_rows, out_cols);
  const double sr = double(p.rows()) / double(out_rows);
  const double sc = double(p.cols()) / double(out_cols);
  for (Eigen::Index r = 0; r < out_rows; ++r) {
    const Eigen::Index pr = clamp_index(Eigen::Index((double(r) + 0.5) * sr), p.rows());
    for (Eigen::Index c = 0; c < out_cols; ++c) {
      const Eigen::Index pc = clamp_index(Eigen::Index((double(c) + 0.5) * sc), p.cols());
      out(r, c) = p(pr, pc);
    }
  }
  return out;
}

Image resize_bilinear(const Image& img, Eigen::Index out_rows,
                      Eigen::Index out_cols) {
  Image out;
  for (int c = 0; c < 3; ++c) out[c] = resize_bilinear(img[c], out_rows, out_cols);
  return out;
}

Plane center_crop_square(const Plane& p) {
  const Eigen::Index side = std::min(p.rows(), p.cols());
  const Eigen::Index r0 = (p.rows() - side) / 2;
  const Eigen::Index c0 = (p.cols() - side) / 2;
  return p.block(r0, c0, side, side);
}

Image center_crop_square(const Image& img) {
  Image out;
  for (int c = 0; c < 3; ++c) out[c] = center_crop_square(img[c]);
  return out;
}

}  // namespace uwimg
