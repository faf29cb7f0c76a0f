#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "uwimg/imaging.hpp"

using namespace uwimg;
using namespace uwimg::testing;

TEST_CASE("transmission matches the scalar exponential") {
  DepthMap d = DepthMap::Constant(4, 5, 2.0);
  TransmissionMap t = transmission_map(d, 0.5);
  const double expected = std::exp(-0.5 * 2.0);  // direct evaluation
  CHECK(t[0](0, 0) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(t[2](3, 4) == doctest::Approx(0.367879441).epsilon(1e-8));
}

TEST_CASE("transmission identities at zero coefficient and zero range") {
  Rng rng(11);
  DepthMap d = random_depth(rng, 6, 7, 0.0, 3.0);
  TransmissionMap t0 = transmission_map(d, 0.0);
  for (int c = 0; c < 3; ++c) CHECK((t0[c] == 1.0).all());

  DepthMap zero = DepthMap::Zero(6, 7);
  TransmissionMap tz = transmission_map(zero, Vec3(0.7, 0.3, 0.1));
  for (int c = 0; c < 3; ++c) CHECK((tz[c] == 1.0).all());
}

TEST_CASE("transmission stays in (0, 1] and decreases with range") {
  Rng rng(12);
  DepthMap d = random_depth(rng, 8, 8, 0.0, 5.0);
  TransmissionMap t = transmission_map(d, Vec3(1.2, 0.6, 0.2));
  for (int c = 0; c < 3; ++c) {
    CHECK((t[c] > 0.0).all());
    CHECK((t[c] <= 1.0).all());
  }
  // Strictly decreasing in d for a positive coefficient.
  DepthMap shallow = DepthMap::Constant(2, 2, 1.0);
  DepthMap deep = DepthMap::Constant(2, 2, 1.5);
  CHECK(transmission_map(shallow, 0.8)[0](0, 0) >
        transmission_map(deep, 0.8)[0](0, 0));
}

TEST_CASE("transmission input validation") {
  DepthMap d = DepthMap::Constant(3, 3, 1.0);
  CHECK_THROWS_AS(transmission_map(d, -0.1), InvalidParameter);
  DepthMap bad = d;
  bad(1, 1) = std::nan("");
  CHECK_THROWS_AS(transmission_map(bad, 0.5), InvalidInput);
  DepthMap neg = d;
  neg(0, 0) = -1.0;
  CHECK_THROWS_AS(transmission_map(neg, 0.5), InvalidInput);
}

TEST_CASE("legacy model reproduces the hand-evaluated example") {
  // J=0.8, A=0.9, beta=0.5, d=2 per channel.
  Image clear = Image::constant(3, 3, 0.8);
  DepthMap d = DepthMap::Constant(3, 3, 2.0);
  WaterParams p;
  p.beta = Vec3::Constant(0.5);
  p.ambient = Vec3::Constant(0.9);
  const double t = std::exp(-1.0);
  const double expected = 0.8 * t + 0.9 * (1.0 - t);
  Image out = synthesize_legacy(clear, d, p);
  CHECK(out[1](1, 1) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(out[0](0, 0) == doctest::Approx(0.86321).epsilon(1e-4));
}

TEST_CASE("legacy model identities") {
  Rng rng(13);
  Image clear = random_image(rng, 5, 6);
  DepthMap d = random_depth(rng, 5, 6, 0.0, 4.0);

  SUBCASE("beta = 0 returns the scene exactly") {
    WaterParams p;
    p.ambient = Vec3::Constant(0.7);
    Image out = synthesize_legacy(clear, d, p);
    CHECK(max_abs_diff(out, clear) == 0.0);
  }
  SUBCASE("scene equal to ambient is a fixed point at any depth") {
    WaterParams p;
    p.beta << 0.9, 0.5, 0.2;
    p.ambient << 0.3, 0.6, 0.8;
    Image scene = Image::constant(5, 6, 0.3, 0.6, 0.8);
    Image out = synthesize_legacy(scene, d, p);
    CHECK(max_abs_diff(out, scene) < 1e-15);
  }
}

TEST_CASE("improved model reproduces the hand-evaluated example") {
  // J=0.8, A=0.9, beta=0.5, alpha=1, d=2.
  Image clear = Image::constant(2, 2, 0.8);
  DepthMap d = DepthMap::Constant(2, 2, 2.0);
  WaterParams p;
  p.beta = Vec3::Constant(0.5);
  p.ambient = Vec3::Constant(0.9);
  p.alpha = 1.0;
  const double t = std::exp(-1.0), tp = std::exp(-2.0);
  const double expected = 0.8 * t + 0.9 * t * (1.0 - tp);
  Image out = synthesize_improved(clear, d, p);
  CHECK(out[0](0, 0) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(out[2](1, 1) == doctest::Approx(0.58058).epsilon(1e-4));
}

TEST_CASE("improved model reductions") {
  Rng rng(14);
  Image clear = random_image(rng, 6, 5);
  DepthMap d = random_depth(rng, 6, 5, 0.0, 3.0);
  WaterParams p = random_params(rng);

  SUBCASE("alpha = 0 removes the veil: I = J * T") {
    p.alpha = 0.0;
    Image out = synthesize_improved(clear, d, p);
    for (int c = 0; c < 3; ++c) {
      Plane expected = clear[c] * (-p.beta[c] * d).exp();
      CHECK((out[c] - expected).abs().maxCoeff() == 0.0);
    }
  }
  SUBCASE("zero range is the identity for both models") {
    DepthMap zero = DepthMap::Zero(6, 5);
    CHECK(max_abs_diff(synthesize_improved(clear, zero, p), clear) == 0.0);
    CHECK(max_abs_diff(synthesize_legacy(clear, zero, p), clear) == 0.0);
  }
}

TEST_CASE("outputs are clamped and match the raw formula inside [0,1]") {
  Rng rng(15);
  Image clear = random_image(rng, 8, 8);
  DepthMap d = random_depth(rng, 8, 8, 0.0, 3.0);
  WaterParams p = random_params(rng, 1.2, 1.0);  // ambient up to 1: may clamp
  Image raw = synthesize_improved_unclamped(clear, d, p);
  Image out = synthesize_improved(clear, d, p);
  for (int c = 0; c < 3; ++c)
    for (Eigen::Index i = 0; i < out[c].size(); ++i) {
      CHECK(out[c](i) >= 0.0);
      CHECK(out[c](i) <= 1.0);
      if (raw[c](i) >= 0.0 && raw[c](i) <= 1.0) CHECK(out[c](i) == raw[c](i));
    }
}

TEST_CASE("legacy output is non-decreasing in range when J < A") {
  WaterParams p;
  p.beta << 0.8, 0.5, 0.3;
  p.ambient = Vec3::Constant(0.9);
  Image clear = Image::constant(1, 1, 0.2);
  double prev[3] = {-1.0, -1.0, -1.0};
  for (double depth = 0.0; depth <= 5.0; depth += 0.25) {
    DepthMap d = DepthMap::Constant(1, 1, depth);
    Image out = synthesize_legacy(clear, d, p);
    for (int c = 0; c < 3; ++c) {
      CHECK(out[c](0, 0) >= prev[c]);
      prev[c] = out[c](0, 0);
    }
  }
}

TEST_CASE("oceanic channel ordering: red attenuates fastest") {
  Rng rng(16);
  for (const auto& name : water_preset_names()) {
    WaterParams p = water_preset(name);
    CHECK(p.beta[0] >= p.beta[1]);
    CHECK(p.beta[1] >= p.beta[2]);
    p.ambient = Vec3::Constant(0.3);  // uniform A for the ordering property
    Image clear = Image::constant(4, 4, 0.5);
    DepthMap d = random_depth(rng, 4, 4, 0.05, 3.0);
    Image out = synthesize_improved(clear, d, p);
    CHECK((out[0] <= out[1] + 1e-15).all());
    CHECK((out[1] <= out[2] + 1e-15).all());
  }
}

TEST_CASE("forward sensitivity equals the beta transmission map") {
  Rng rng(17);
  DepthMap d = random_depth(rng, 5, 5, 0.0, 3.0);
  WaterParams p = random_params(rng);
  TransmissionMap s = forward_sensitivity(d, p);
  TransmissionMap t = transmission_map(d, p.beta);
  for (int c = 0; c < 3; ++c) CHECK((s[c] == t[c]).all());

  WaterParams zero_beta;
  zero_beta.ambient = Vec3::Constant(0.2);
  TransmissionMap ones = forward_sensitivity(d, zero_beta);
  for (int c = 0; c < 3; ++c) CHECK((ones[c] == 1.0).all());

  DepthMap d2 = DepthMap::Constant(2, 2, 2.0);
  WaterParams half;
  half.beta = Vec3::Constant(0.5);
  CHECK(forward_sensitivity(d2, half)[0](0, 0) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("forward sensitivity matches central finite differences") {
  Rng rng(18);
  // Keep the raw model inside [0,1] so the clamp never bites.
  Image clear = random_image(rng, 6, 6, 0.05, 0.6);
  DepthMap d = random_depth(rng, 6, 6, 0.1, 2.0);
  WaterParams p = random_params(rng, 1.0, 0.3);
  TransmissionMap sens = forward_sensitivity(d, p);
  const double eps = 1e-6;
  for (int trial = 0; trial < 30; ++trial) {
    const int c = rng.uniform_int(3);
    const Eigen::Index i = rng.uniform_int(6), j = rng.uniform_int(6);
    Image up = clear, dn = clear;
    up[c](i, j) += eps;
    dn[c](i, j) -= eps;
    const double fd = (synthesize_improved(up, d, p)[c](i, j) -
                       synthesize_improved(dn, d, p)[c](i, j)) /
                      (2.0 * eps);
    CHECK(sens[c](i, j) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("shape and parameter validation") {
  Image clear = Image::constant(4, 4, 0.5);
  DepthMap d = DepthMap::Constant(4, 5, 1.0);
  WaterParams p;
  CHECK_THROWS_AS(synthesize_improved(clear, d, p), ShapeError);

  WaterParams bad = p;
  bad.ambient = Vec3::Constant(1.5);
  DepthMap ok = DepthMap::Constant(4, 4, 1.0);
  CHECK_THROWS_AS(synthesize_improved(clear, ok, bad), InvalidParameter);
  bad = p;
  bad.alpha = -1.0;
  CHECK_THROWS_AS(synthesize_improved(clear, ok, bad), InvalidParameter);
  CHECK_THROWS_AS(water_preset("tropical"), InvalidParameter);
}
