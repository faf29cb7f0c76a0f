#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <string>

#include "uwimg/errors.hpp"

namespace uwimg {

template <typename Scalar>
using PlaneT = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Plane = PlaneT<double>;
using Vec3 = Eigen::Array3d;

// Three-channel raster of linear intensities, one dense plane per channel
// in (r, g, b) order. rows() is the height, cols() the width. Values are
// nominally in [0, 1]; every public operation keeps them finite.
template <typename Scalar>
struct ImageT {
  using PlaneType = PlaneT<Scalar>;

  std::array<PlaneType, 3> ch{};

  ImageT() = default;
  ImageT(Eigen::Index rows, Eigen::Index cols) {
    for (auto& p : ch) p = PlaneType::Zero(rows, cols);
  }

  static ImageT constant(Eigen::Index rows, Eigen::Index cols, Scalar r,
                         Scalar g, Scalar b) {
    ImageT img;
    img.ch[0] = PlaneType::Constant(rows, cols, r);
    img.ch[1] = PlaneType::Constant(rows, cols, g);
    img.ch[2] = PlaneType::Constant(rows, cols, b);
    return img;
  }

  static ImageT constant(Eigen::Index rows, Eigen::Index cols, Scalar v) {
    return constant(rows, cols, v, v, v);
  }

  Eigen::Index rows() const { return ch[0].rows(); }
  Eigen::Index cols() const { return ch[0].cols(); }
  // Total number of scalar entries across all three channels.
  Eigen::Index size() const { return 3 * ch[0].size(); }

  PlaneType& operator[](int c) { return ch[static_cast<size_t>(c)]; }
  const PlaneType& operator[](int c) const {
    return ch[static_cast<size_t>(c)];
  }
};

using Image = ImageT<double>;

// Per-pixel, per-channel transmission values in (0, 1].
using TransmissionMap = Image;

// Per-pixel scene range in meters, non-negative.
using DepthMap = Plane;

template <typename Scalar>
bool same_shape(const ImageT<Scalar>& a, const ImageT<Scalar>& b) {
  return a.rows() == b.rows() && a.cols() == b.cols();
}

template <typename Scalar>
bool same_shape(const ImageT<Scalar>& a, const PlaneT<Scalar>& b) {
  return a.rows() == b.rows() && a.cols() == b.cols();
}

template <typename Scalar>
bool all_finite(const PlaneT<Scalar>& p) {
  return p.isFinite().all();
}

template <typename Scalar>
bool all_finite(const ImageT<Scalar>& img) {
  return all_finite(img[0]) && all_finite(img[1]) && all_finite(img[2]);
}

template <typename Scalar>
void clamp01_in_place(ImageT<Scalar>& img) {
  for (auto& p : img.ch) p = p.max(Scalar(0)).min(Scalar(1));
}

template <typename Scalar>
ImageT<Scalar> clamped01(ImageT<Scalar> img) {
  clamp01_in_place(img);
  return img;
}

inline std::string shape_string(Eigen::Index rows, Eigen::Index cols) {
  return std::to_string(cols) + "x" + std::to_string(rows);
}

inline void require_image(const Image& img, const char* name = "image") {
  if (img.rows() < 1 || img.cols() < 1)
    throw InvalidInput(std::string(name) + ": empty raster");
  if (img[1].rows() != img.rows() || img[2].rows() != img.rows() ||
      img[1].cols() != img.cols() || img[2].cols() != img.cols())
    throw InvalidInput(std::string(name) + ": ragged channel planes");
  if (!all_finite(img))
    throw InvalidInput(std::string(name) + ": non-finite values");
}

inline void require_depth(const DepthMap& depth, const char* name = "depth") {
  if (depth.rows() < 1 || depth.cols() < 1)
    throw InvalidInput(std::string(name) + ": empty raster");
  if (!all_finite(depth))
    throw InvalidInput(std::string(name) + ": non-finite values");
  if ((depth < 0.0).any())
    throw InvalidInput(std::string(name) + ": negative range values");
}

inline void require_same_shape(const Image& a, const Image& b,
                               const char* what = "images") {
  if (!same_shape(a, b))
    throw ShapeError(std::string(what) + " differ in shape: " +
                     shape_string(a.rows(), a.cols()) + " vs " +
                     shape_string(b.rows(), b.cols()));
}

inline void require_same_shape(const Image& a, const DepthMap& b,
                               const char* what = "image/depth") {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError(std::string(what) + " differ in shape: " +
                     shape_string(a.rows(), a.cols()) + " vs " +
                     shape_string(b.rows(), b.cols()));
}

}  // namespace uwimg
