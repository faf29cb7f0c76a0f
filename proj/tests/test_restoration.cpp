#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "uwimg/metrics.hpp"
#include "uwimg/restoration.hpp"

using namespace uwimg;
using namespace uwimg::testing;

TEST_CASE("analytic inversion round-trips the improved model") {
  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    Image j_true = random_image(rng, 16, 16, 0.05, 0.6);
    DepthMap depth = random_depth(rng, 16, 16, 0.1, 2.0);
    WaterParams p = random_params(rng, 1.2, 0.35);  // T >= e^-2.4 > floor
    Image observed = synthesize_improved(j_true, depth, p);
    AnalyticInversion inv = analytic_invert(observed, depth, p);
    CHECK(max_abs_diff(inv.image, j_true) < 1e-6);
    CHECK(inv.floored_fraction == 0.0);
    CHECK_FALSE(inv.floor_mask.any());
  }
}

TEST_CASE("analytic inversion identities and floor engagement") {
  Rng rng(42);
  Image observed = random_image(rng, 8, 8);
  WaterParams p = random_params(rng);

  SUBCASE("zero range returns the observation") {
    DepthMap zero = DepthMap::Zero(8, 8);
    AnalyticInversion inv = analytic_invert(observed, zero, p);
    CHECK(max_abs_diff(inv.image, observed) == 0.0);
  }
  SUBCASE("huge attenuation floors every pixel") {
    DepthMap depth = DepthMap::Constant(8, 8, 5.0);
    WaterParams strong = p;
    strong.beta = Vec3::Constant(50.0);
    AnalyticInversion inv = analytic_invert(observed, depth, strong);
    CHECK(inv.floored_fraction == 1.0);
    CHECK(inv.floor_mask.all());
    CHECK(all_finite(inv.image));
  }
  SUBCASE("shape mismatch") {
    DepthMap depth = DepthMap::Constant(4, 4, 1.0);
    CHECK_THROWS_AS(analytic_invert(observed, depth, p), ShapeError);
  }
}

TEST_CASE("gradient descent inverts noiseless synthetic pairs with L2") {
  Rng rng(43);
  for (int trial = 0; trial < 3; ++trial) {
    Image j_true = smooth_image(rng, 64, 64, 0.05, 0.65);
    DepthMap depth = random_depth(rng, 64, 64, 0.4, 2.0);
    WaterParams p;
    p.beta << rng.uniform(0.3, 0.5), rng.uniform(0.15, 0.3),
        rng.uniform(0.05, 0.15);
    p.ambient << rng.uniform(0.1, 0.3), rng.uniform(0.1, 0.3),
        rng.uniform(0.1, 0.3);
    p.alpha = rng.uniform(0.8, 1.2);
    Image observed = synthesize_improved(j_true, depth, p);

    InversionConfig cfg;
    cfg.loss.kind = LossKind::L2;
    DescentResult res = invert_by_gradient_descent(observed, depth, p, cfg);
    CHECK(res.trace.back() <= 1e-6);
    CHECK(psnr(res.image, j_true) >= 30.0);
    // Monotone accept-only contract.
    for (size_t i = 1; i < res.trace.size(); ++i)
      CHECK(res.trace[i] <= res.trace[i - 1]);
    CHECK(res.trace.back() <= res.trace.front());
  }
}

TEST_CASE("gradient descent returns immediately at a stationary point") {
  Rng rng(44);
  Image j_true = random_image(rng, 16, 16, 0.1, 0.9);
  DepthMap zero = DepthMap::Zero(16, 16);  // forward model is the identity
  WaterParams p = random_params(rng);
  InversionConfig cfg;
  cfg.loss.kind = LossKind::L2;
  DescentResult res = invert_by_gradient_descent(j_true, zero, p, cfg);
  CHECK(res.iterations == 0);
  CHECK(res.converged);
  CHECK(res.trace.size() == 1);
  CHECK(res.trace[0] == 0.0);
  CHECK(max_abs_diff(res.image, j_true) == 0.0);
}

TEST_CASE("gradient descent flags non-finite objectives") {
  Image observed = Image::constant(8, 8, 0.5);
  observed[0](0, 0) = 1e300;  // finite input, squares to inf in the loss
  DepthMap depth = DepthMap::Constant(8, 8, 1.0);
  WaterParams p;
  p.beta = Vec3::Constant(0.5);
  p.ambient = Vec3::Constant(0.2);
  InversionConfig cfg;
  cfg.loss.kind = LossKind::L2;
  CHECK_THROWS_AS(invert_by_gradient_descent(observed, depth, p, cfg),
                  DescentFailure);
}

TEST_CASE("descent works for every loss kind on a small pair") {
  Rng rng(45);
  Image j_true = smooth_image(rng, 32, 32, 0.1, 0.6);
  DepthMap depth = random_depth(rng, 32, 32, 0.4, 1.5);
  WaterParams p;
  p.beta << 0.4, 0.2, 0.1;
  p.ambient << 0.15, 0.2, 0.25;
  p.alpha = 1.0;
  Image observed = synthesize_improved(j_true, depth, p);
  for (LossKind kind : {LossKind::L1, LossKind::Gdl, LossKind::L1Ssim}) {
    InversionConfig cfg;
    cfg.loss.kind = kind;
    cfg.max_iters = 200;
    DescentResult res = invert_by_gradient_descent(observed, depth, p, cfg);
    CHECK(res.trace.back() <= res.trace.front());
    for (size_t i = 1; i < res.trace.size(); ++i)
      CHECK(res.trace[i] <= res.trace[i - 1]);
  }
}

TEST_CASE("UDCP transmission estimates") {
  SUBCASE("vivid image with zero G/B dark channel gives t = 1") {
    // Pure red patches: min(G, B) = 0 everywhere.
    Image vivid(32, 32);
    vivid[0].setConstant(0.9);
    vivid[1].setZero();
    vivid[2].setZero();
    vivid[1](3, 3) = 0.8;  // a bright spot for the ambient estimate
    vivid[2](3, 3) = 0.7;
    TransmissionMap t = estimate_transmission_udcp(vivid, 3);
    // Away from the bright spot the dark channel is 0 -> t = 1.
    CHECK(t[0](20, 20) == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("uniform image equal to the ambient estimate gives 1 - omega") {
    Image uniform = Image::constant(32, 32, 0.3, 0.5, 0.6);
    TransmissionMap t = estimate_transmission_udcp(uniform, 15, 0.01);
    CHECK(t[1](10, 10) == doctest::Approx(0.05).epsilon(1e-9));
  }
  SUBCASE("values always clipped to [floor, 1]") {
    Rng rng(46);
    for (int trial = 0; trial < 5; ++trial) {
      Image img = random_image(rng, 24, 24);
      TransmissionMap t = estimate_transmission_udcp(img, 5, 0.05);
      for (int c = 0; c < 3; ++c) {
        CHECK((t[c] >= 0.05 - 1e-15).all());
        CHECK((t[c] <= 1.0).all());
      }
    }
  }
  SUBCASE("even patch size rejected") {
    CHECK_THROWS_AS(estimate_transmission_udcp(Image::constant(8, 8, 0.5), 4),
                    InvalidParameter);
  }
}

TEST_CASE("UDCP restoration") {
  SUBCASE("t = 1 everywhere is the identity") {
    // Zero G/B dark channel forces t = 1; restoration must return the input.
    Image vivid(16, 16);
    vivid[0].setConstant(0.6);
    vivid[1].setZero();
    vivid[2].setZero();
    Image out = restore_udcp(vivid, 3);
    CHECK(max_abs_diff(out, vivid) < 1e-12);
  }
  SUBCASE("recovers a constant-transmission fog up to ambient error") {
    Rng rng(47);
    // Scene with dark G/B regions so the prior holds; brightest region
    // equals the true ambient.
    Image scene = random_image(rng, 32, 32, 0.0, 0.4);
    scene[1].topRows(8).setZero();
    scene[2].topRows(8).setZero();
    const double t_true = 0.7;
    Vec3 ambient(0.8, 0.85, 0.9);
    Image foggy;
    for (int c = 0; c < 3; ++c)
      foggy[c] = scene[c] * t_true + ambient[c] * (1.0 - t_true);
    Image out = restore_udcp(foggy, 5, 0.05);
    // Ambient and transmission estimates are approximate.
    CHECK(mse(out, scene) < mse(foggy, scene));
  }
  SUBCASE("output in range for random inputs") {
    Rng rng(48);
    Image img = random_image(rng, 24, 24);
    Image out = restore_udcp(img);
    for (int c = 0; c < 3; ++c) {
      CHECK(all_finite(out[c]));
      CHECK((out[c] >= 0.0).all());
      CHECK((out[c] <= 1.0).all());
    }
  }
}

TEST_CASE("histogram equalization") {
  SUBCASE("constant image stays constant") {
    Image flat = Image::constant(16, 16, 0.37);
    Image out = equalize_hist(flat);
    CHECK(max_abs_diff(out, flat) == 0.0);
  }
  SUBCASE("exactly uniform 256-level image is unchanged") {
    Image img(16, 16);  // 256 pixels, one per level
    for (int c = 0; c < 3; ++c)
      for (Eigen::Index i = 0; i < 256; ++i) img[c](i / 16, i % 16) = double(i) / 255.0;
    Image out = equalize_hist(img);
    CHECK(max_abs_diff(out, img) < 1e-12);
  }
  SUBCASE("histogram flattens: normalized histogram variance drops") {
    Rng rng(49);
    for (int trial = 0; trial < 5; ++trial) {
      // Peaked intensity distribution (squared uniforms pile up near 0).
      Image img(32, 32);
      for (int c = 0; c < 3; ++c)
        for (Eigen::Index i = 0; i < img[c].size(); ++i) {
          const double u = rng.uniform();
          img[c](i) = u * u;
        }
      Image out = equalize_hist(img);
      auto hist_variance = [](const Image& im) {
        double var = 0.0;
        for (int c = 0; c < 3; ++c) {
          int hist[256] = {0};
          for (Eigen::Index i = 0; i < im[c].size(); ++i)
            ++hist[int(std::lround(std::clamp(im[c](i), 0.0, 1.0) * 255))];
          const double n = double(im[c].size());
          for (int k = 0; k < 256; ++k) {
            const double d = hist[k] / n - 1.0 / 256.0;
            var += d * d;
          }
        }
        return var;
      };
      CHECK(hist_variance(out) <= hist_variance(img) + 1e-12);
    }
  }
}

TEST_CASE("gray-world balance") {
  SUBCASE("equal channel means leave the image unchanged") {
    Rng rng(50);
    Plane base = random_plane(rng, 16, 16, 0.1, 0.9);
    Image img;
    for (int c = 0; c < 3; ++c) img[c] = base;
    Image out = gray_world_balance(img);
    CHECK(max_abs_diff(out, img) < 1e-15);
  }
  SUBCASE("known means produce gains (2, 1, 2/3)") {
    Image img = Image::constant(8, 8, 0.2, 0.4, 0.6);
    Image out = gray_world_balance(img);
    CHECK(out[0](0, 0) == doctest::Approx(0.4).epsilon(1e-12));  // 0.2 * 2
    CHECK(out[1](0, 0) == doctest::Approx(0.4).epsilon(1e-12));  // 0.4 * 1
    CHECK(out[2](0, 0) == doctest::Approx(0.4).epsilon(1e-12));  // 0.6 * 2/3
  }
  SUBCASE("post-balance channel means agree before clamping") {
    Rng rng(51);
    Image img = random_image(rng, 16, 16, 0.05, 0.3);  // gains stay < 1/0.3
    Image out = gray_world_balance(img);
    const double m0 = out[0].mean();
    CHECK(out[1].mean() == doctest::Approx(m0).epsilon(1e-12));
    CHECK(out[2].mean() == doctest::Approx(m0).epsilon(1e-12));
  }
  SUBCASE("zero channel mean rejected") {
    Image img = Image::constant(8, 8, 0.5);
    img[2].setZero();
    CHECK_THROWS_AS(gray_world_balance(img), InvalidInput);
  }
}

TEST_CASE("restoration outputs stay in range and keep dimensions") {
  Rng rng(52);
  Image img = random_image(rng, 24, 20);
  for (const Image& out :
       {equalize_hist(img), restore_udcp(img), gray_world_balance(img)}) {
    CHECK(out.rows() == img.rows());
    CHECK(out.cols() == img.cols());
    for (int c = 0; c < 3; ++c) {
      CHECK((out[c] >= 0.0).all());
      CHECK((out[c] <= 1.0).all());
    }
  }
}
