#pragma once

#include <Eigen/Dense>

#include "uwimg/image.hpp"

namespace uwimg {

// Normalized 1-D Gaussian of length 2*radius + 1.
Eigen::ArrayXd gaussian_kernel_1d(int radius, double sigma);

// Separable correlation keeping only fully covered ("valid") positions.
// Output is (rows - K + 1) x (cols - K + 1) for a length-K kernel.
Plane correlate_valid(const Plane& img, const Eigen::ArrayXd& kernel);

// Adjoint of correlate_valid: scatters a valid-grid cotangent back onto the
// full rows x cols grid. correlate_valid and its adjoint form an exact
// transpose pair, which the loss gradients rely on.
Plane correlate_valid_adjoint(const Plane& cotangent,
                              const Eigen::ArrayXd& kernel, Eigen::Index rows,
                              Eigen::Index cols);

// 2x2 mean pooling; odd trailing row/column is dropped.
Plane mean_pool2(const Plane& p);

// Adjoint of mean_pool2 onto a rows x cols grid.
Plane mean_pool2_adjoint(const Plane& cotangent, Eigen::Index rows,
                         Eigen::Index cols);

// Sobel derivatives with replicated borders.
Plane sobel_x(const Plane& p);
Plane sobel_y(const Plane& p);

// Sliding-window minimum over a (2*radius+1)^2 neighborhood, truncated at
// the borders.
Plane min_filter(const Plane& p, int radius);

Plane resize_bilinear(const Plane& p, Eigen::Index out_rows,
                      Eigen::Index out_cols);
Plane resize_nearest(const Plane& p, Eigen::Index out_rows,
                     Eigen::Index out_cols);

Image resize_bilinear(const Image& img, Eigen::Index out_rows,
                      Eigen::Index out_cols);

// Largest centered square crop.
Plane center_crop_square(const Plane& p);
Image center_crop_square(const Image& img);

}  // namespace uwimg
