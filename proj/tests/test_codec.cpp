#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "quadwin/codec.hpp"
#include "quadwin/priors.hpp"
#include "test_support.hpp"

using namespace quadwin;
using quadwin::testing::random_canonical_quad;
using quadwin::testing::uniform;
using quadwin::testing::unit_square;

namespace {

ConvexQuad transformed(const ConvexQuad& q, double s, Point2 t) {
  std::array<Point2, 4> v;
  for (std::size_t i = 0; i < 4; ++i) v[i] = s * q[i] + t;
  return ConvexQuad(v);
}

double max_abs(const std::array<double, 10>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST(Encode, UnitSquare) {
  const EncodedQuad e = encode(unit_square());
  const std::array<double, 10> expected{0.5, 0.5, -0.5, -0.5, 0.5, -0.5, 0.5, 0.5, -0.5, 0.5};
  EXPECT_EQ(e.as_array(), expected);
  EXPECT_EQ(e.w_chr, 1.0);
  EXPECT_EQ(e.h_chr, 1.0);
  EXPECT_EQ(decode_encoded(e), unit_square());
}

TEST(Encode, TranslationMovesOnlyCenter) {
  const EncodedQuad a = encode(unit_square());
  const EncodedQuad b = encode(transformed(unit_square(), 1.0, {3, -7}));
  EXPECT_EQ(b.x, a.x + 3);
  EXPECT_EQ(b.y, a.y - 7);
  EXPECT_EQ(b.w, a.w);
  EXPECT_EQ(b.h, a.h);
}

TEST(Encode, ScalingAboutOrigin) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 500; ++t) {
    const ConvexQuad q = random_canonical_quad(rng, {uniform(rng, -50, 50), uniform(rng, -50, 50)});
    const auto a = encode(q).as_array();
    const auto b = encode(transformed(q, 2.0, {0, 0})).as_array();
    for (std::size_t i = 0; i < 10; ++i) ASSERT_EQ(b[i], 2.0 * a[i]);
  }
}

TEST(Decode, AllZeroOffsetsFail) {
  EncodedQuad e;
  e.x = 4;
  e.y = 5;
  EXPECT_THROW(decode_encoded(e), NonConvexDecode);
}

TEST(Decode, TinyPerturbationIsStable) {
  EncodedQuad e = encode(unit_square());
  e.w[2] += 1e-12;
  const ConvexQuad q = decode_encoded(e);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_LE(std::abs(q[i].x - unit_square()[i].x), 1e-9);
    EXPECT_LE(std::abs(q[i].y - unit_square()[i].y), 1e-9);
  }
}

TEST(Decode, RoundTripRandom) {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 5000; ++t) {
    const ConvexQuad q = random_canonical_quad(rng, {uniform(rng, 0, 800), uniform(rng, 0, 800)}, uniform(rng, 5, 200));
    const ConvexQuad back = decode_encoded(encode(q));
    for (std::size_t i = 0; i < 4; ++i) {
      ASSERT_LE(std::abs(back[i].x - q[i].x), 1e-9);
      ASSERT_LE(std::abs(back[i].y - q[i].y), 1e-9);
    }
  }
}

TEST(Deltas, ZeroLaw) {
  std::mt19937_64 rng(33);
  for (int t = 0; t < 500; ++t) {
    const EncodedQuad p = encode(random_canonical_quad(rng));
    const DeltaTarget d = compute_deltas(p, p);
    for (double v : d.d) ASSERT_EQ(v, 0.0);
    EXPECT_EQ(apply_deltas_encoded(p, d).as_array(), p.as_array());
  }
}

TEST(Deltas, TranslateByPriorWidth) {
  std::mt19937_64 rng(34);
  const ConvexQuad prior = random_canonical_quad(rng);
  const EncodedQuad p = encode(prior);
  const EncodedQuad g = encode(transformed(prior, 1.0, {p.w_chr, 0.0}));
  const DeltaTarget d = compute_deltas(p, g);
  EXPECT_NEAR(d.dx(), 1.0, 1e-15);
  EXPECT_EQ(d.dy(), 0.0);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(d.dw(i), 0.0, 1e-15);
    EXPECT_NEAR(d.dh(i), 0.0, 1e-15);
  }
}

TEST(Deltas, NormalizedByPriorRect) {
  const EncodedQuad p = encode(quadwin::testing::rect_quad(0, 0, 4, 2));
  const EncodedQuad g = encode(quadwin::testing::rect_quad(1, 1, 3, 2));
  const DeltaTarget d = compute_deltas(p, g);
  EXPECT_DOUBLE_EQ(d.dx(), 0.0);         // centers (2,1) vs (2,1.5)
  EXPECT_DOUBLE_EQ(d.dy(), 0.5 / 2.0);
  EXPECT_DOUBLE_EQ(d.dw(0), (-1.0 + 2.0) / 4.0);
  EXPECT_DOUBLE_EQ(d.dh(0), (-0.5 + 1.0) / 2.0);
}

TEST(Deltas, ApplyInvertsCompute) {
  std::mt19937_64 rng(35);
  for (int t = 0; t < 5000; ++t) {
    const ConvexQuad prior = random_canonical_quad(rng, {uniform(rng, 0, 800), uniform(rng, 0, 800)}, uniform(rng, 5, 200));
    const ConvexQuad gt = random_canonical_quad(rng, {uniform(rng, 0, 800), uniform(rng, 0, 800)}, uniform(rng, 5, 200));
    const ConvexQuad back = apply_deltas(encode(prior), compute_deltas(encode(prior), encode(gt)));
    for (std::size_t i = 0; i < 4; ++i) {
      ASSERT_LE(std::abs(back[i].x - gt[i].x), 1e-9);
      ASSERT_LE(std::abs(back[i].y - gt[i].y), 1e-9);
    }
  }
}

TEST(Deltas, InvariantUnderSharedTranslationAndScale) {
  std::mt19937_64 rng(36);
  for (int t = 0; t < 2000; ++t) {
    const ConvexQuad prior = random_canonical_quad(rng, {uniform(rng, 0, 800), uniform(rng, 0, 800)}, uniform(rng, 5, 200));
    const ConvexQuad gt = random_canonical_quad(rng, {uniform(rng, 0, 800), uniform(rng, 0, 800)}, uniform(rng, 5, 200));
    const double s = uniform(rng, 0.25, 4.0);
    const Point2 shift{uniform(rng, -300, 300), uniform(rng, -300, 300)};
    const auto base = compute_deltas(encode(prior), encode(gt)).d;
    const auto moved = compute_deltas(encode(transformed(prior, s, shift)), encode(transformed(gt, s, shift))).d;
    const double tol = 1e-12 * std::max(1.0, max_abs(base));
    for (std::size_t i = 0; i < 10; ++i) ASSERT_LE(std::abs(moved[i] - base[i]), tol) << "component " << i;
  }
}

TEST(Deltas, NonFiniteDeltaFails) {
  DeltaTarget d;
  d.d[4] = std::nan("");
  EXPECT_THROW(apply_deltas(encode(unit_square()), d), NonConvexDecode);
}

TEST(Deltas, LargeDeltasCanFold) {
  // Pushing vertex 0 far past the opposite side folds the quad.
  DeltaTarget d;
  d.d[2] = 3.0;
  d.d[3] = 3.0;
  EXPECT_THROW(apply_deltas(encode(unit_square()), d), NonConvexDecode);
}

TEST(Deltas, SmallRandomDeltasOnDefaultPriorsStayConvex) {
  const auto priors = generate_all_priors(default_grids()).priors;
  std::mt19937_64 rng(37);
  std::uniform_int_distribution<std::size_t> pick(0, priors.size() - 1);
  int convex = 0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    DeltaTarget d;
    for (double& v : d.d) v = uniform(rng, -0.05, 0.05);
    try {
      apply_deltas(encode(priors[pick(rng)].quad), d);
      ++convex;
    } catch (const NonConvexDecode&) {
    }
  }
  EXPECT_GE(convex, trials * 99 / 100);
}

TEST(Encode, CollapsedRectThrows) {
  const ConvexQuad thin({{{0, 0}, {1000, 0}, {1000, 1e-10}, {0, 1e-10}}}, 0.0);
  EXPECT_THROW(encode(thin), DegenerateInput);
}
