#include <gtest/gtest.h>

#include <random>

#include "compmap/errors.hpp"
#include "compmap/geometry.hpp"

using namespace compmap;

TEST(Orders, SouthEastExamples) {
  EXPECT_TRUE(le_se({0, 1}, {1, 0}));
  EXPECT_TRUE(le_se({0.3, 0.7}, {0.3, 0.7}));
  EXPECT_FALSE(le_se({1, 0}, {0, 1}));
  EXPECT_TRUE(le_ne({0, 0}, {1, 2}));
  EXPECT_FALSE(le_ne({0, 3}, {1, 2}));
}

TEST(Orders, PartialOrderLawsOnRandomTriples) {
  std::mt19937_64 rng(11);
  // Coarse lattice values make comparable and equal pairs common.
  std::uniform_int_distribution<int> d(-2, 2);
  auto draw = [&] { return Point2{static_cast<double>(d(rng)), static_cast<double>(d(rng))}; };
  for (int i = 0; i < 5000; ++i) {
    const Point2 p = draw(), q = draw(), r = draw();
    for (auto le : {le_se, le_ne}) {
      EXPECT_TRUE(le(p, p));
      if (le(p, q) && le(q, p)) EXPECT_EQ(p, q);
      if (le(p, q) && le(q, r)) EXPECT_TRUE(le(p, r));
    }
  }
}

TEST(Quadrants, CornerBelongsToAllClosedQuadrants) {
  const auto m = quadrant_membership({0, 0}, {0, 0});
  for (int q = 1; q <= 4; ++q) {
    EXPECT_TRUE(m.in(q));
    EXPECT_FALSE(m.in_interior(q));
  }
}

TEST(Quadrants, InteriorFlags) {
  const auto a = quadrant_membership({2, 1}, {1, 2});
  EXPECT_TRUE(a.in(2));
  EXPECT_TRUE(a.in_interior(2));
  EXPECT_FALSE(a.in(1) || a.in(3) || a.in(4));
  const auto b = quadrant_membership({0, 0}, {1, -1});
  EXPECT_TRUE(b.in_interior(4));
  EXPECT_FALSE(b.in(1) || b.in(2) || b.in(3));
}

TEST(Quadrants, SelfMembershipProperty) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-100, 100);
  for (int i = 0; i < 1000; ++i) {
    const Point2 p{u(rng), u(rng)};
    const auto m = quadrant_membership(p, p);
    for (int q = 1; q <= 4; ++q) {
      EXPECT_TRUE(m.in(q));
      EXPECT_FALSE(m.in_interior(q));
    }
  }
}

TEST(Quadrants, MarginIsStrict) {
  EXPECT_TRUE(in_open_quadrant({0, 0}, {-0.5, 0.5}, 2, 0.5));
  EXPECT_FALSE(in_open_quadrant({0, 0}, {-0.49, 0.5}, 2, 0.5));
  EXPECT_FALSE(in_open_quadrant({0, 0}, {0, 1}, 2));
  EXPECT_THROW(in_open_quadrant({0, 0}, {1, 1}, 5), PreconditionError);
}

TEST(Rects, ClampIntersectAndValidate) {
  const Rect q = Rect::first_quadrant();
  EXPECT_FALSE(q.bounded());
  const Rect c = q.clamped(kDefaultSamplingWindow);
  EXPECT_TRUE(c.bounded());
  EXPECT_EQ(c.x_hi, 50.0);
  const Rect i = intersect(q, Rect{-1, 5, -1, 6});
  EXPECT_EQ(i, (Rect{0, 5, 0, 6}));
  EXPECT_THROW(intersect(Rect{0, 1, 0, 1}, Rect{2, 3, 0, 1}), PreconditionError);
  EXPECT_THROW((Rect{1, 0, 0, 1}).validate(), PreconditionError);
}

TEST(Formatting, SeventeenDigitsRoundTrip) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) / 7.0;
    EXPECT_EQ(std::stod(format_real(v)), v);
  }
}

TEST(Directions, CanonicalSign) {
  const Point2 a = canonical_direction({-3, 4});
  EXPECT_NEAR(a.x, 0.6, 1e-15);
  EXPECT_NEAR(a.y, -0.8, 1e-15);
  const Point2 b = canonical_direction({0, -2});
  EXPECT_EQ(b.y, 1.0);
}
