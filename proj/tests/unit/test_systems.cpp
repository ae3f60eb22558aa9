#include <gtest/gtest.h>

#include <cmath>

#include "compmap/errors.hpp"
#include "compmap/systems.hpp"
#include "oracles.hpp"

using namespace compmap;

TEST(Examples, NamesRoundTrip) {
  for (ExampleId id : all_examples()) {
    const auto back = parse_example_id(to_string(id));
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(*back, id);
  }
  EXPECT_FALSE(parse_example_id("ex9").has_value());
}

TEST(Examples, ConstraintsAreEnforced) {
  EXPECT_THROW(make_example(ExampleId::ex1, {{"a", 1.0}}), ConstraintError);
  EXPECT_THROW(make_example(ExampleId::ex1, {{"q", 1.0}}), ConstraintError);
  EXPECT_THROW(make_example(ExampleId::ex2, {{"b1", 2}, {"b2", 3}, {"c1", 1}, {"c2", 1}}), ConstraintError);
  EXPECT_THROW(make_example(ExampleId::ex4, {{"beta1", 5.0}}), ConstraintError);
  EXPECT_THROW(make_example(ExampleId::ex5, {{"h1", -0.1}}), ConstraintError);
  try {
    make_example(ExampleId::ex1, {{"a", 0.5}});
  } catch (const ConstraintError& e) {
    EXPECT_NE(std::string(e.what()).find("a > 1"), std::string::npos);
  }
}

TEST(Examples, DerivedParameters) {
  const ExampleSystem s = make_example(ExampleId::ex2, {{"b1", 2.5}, {"b2", 1.5}});
  EXPECT_NEAR(s.params.at("c1") * (1.5 - 1), 2.5 - 1, 1e-12);
  EXPECT_NEAR(s.params.at("c2") * (2.5 - 1), 1.5 - 1, 1e-12);
  const ExampleSystem f = make_example(ExampleId::ex4, {{"B1", 2}, {"alpha2", 0.5}});
  EXPECT_NEAR(f.params.at("beta1") - 2 * f.params.at("gamma2"), 2 * std::sqrt(2 * 0.5), 1e-12);
}

TEST(Examples, FixturesAreFixedPoints) {
  for (ExampleId id : all_examples()) {
    if (id == ExampleId::ex5) continue;
    const ExampleSystem s = make_example(id);
    for (const Fixture& fx : s.fixtures) {
      const Point2 img = evaluate(s.map, fx.point);
      const Point2 target = fx.kind == PointKind::fixed ? fx.point : evaluate(s.map, img);
      EXPECT_LT(distance(fx.kind == PointKind::fixed ? img : target, fx.point), 1e-12) << to_string(id);
      const FixedPointRecord r = describe_point(s.map, fx.point, fx.kind);
      const auto [l1, l2] = oracle::eigenvalues(r.jacobian.a11, r.jacobian.a12, r.jacobian.a21, r.jacobian.a22);
      EXPECT_NEAR(fx.lambda, l1.real(), 1e-9) << to_string(id);
      EXPECT_NEAR(fx.mu, l2.real(), 1e-9) << to_string(id);
      if (fx.v_lambda) {
        EXPECT_LT(oracle::sin_angle(fx.v_lambda->x, fx.v_lambda->y, r.eigen.v_lambda.x, r.eigen.v_lambda.y), 1e-9);
      }
    }
  }
}

TEST(Examples, ContinuumSweeps) {
  for (ExampleId id : {ExampleId::ex1, ExampleId::ex2, ExampleId::ex3_T2}) {
    const ExampleSystem s = make_example(id);
    ASSERT_TRUE(s.continuum.has_value()) << to_string(id);
    for (const SweepRecord& r : sweep_continuum(s, 9)) {
      EXPECT_TRUE(r.verified) << to_string(id) << " s=" << r.s << " eig=" << r.eigen_error
                              << " vec=" << r.vector_error;
    }
  }
}

TEST(Example5, TangencyMakesCriticalCurvesTouch) {
  const ExampleSystem s = make_example(ExampleId::ex5);
  const std::vector<Point2> eq = ex5_equilibria(s.params);
  ASSERT_EQ(eq.size(), 2u);
  const FixedPointRecord nh = describe_point(s.map, s.default_fp);
  EXPECT_EQ(nh.classification, Stability::nonhyperbolic);
  EXPECT_NEAR(nh.eigen.mu, 1.0, 1e-6);
  const auto [s1, s2] = ex5_critical_slopes(s.params, s.default_fp);
  EXPECT_NEAR(s1, s2, 1e-3 * std::abs(s1));
  const CriticalCurves cc = ex5_critical_curves(s.params);
  EXPECT_NEAR(cc.c1_residual(s.default_fp), 0.0, 1e-9);
  EXPECT_NEAR(cc.c2_residual(s.default_fp), 0.0, 1e-9);
  EXPECT_FALSE(cc.graph1.empty());
  EXPECT_FALSE(cc.graph2.empty());
}

TEST(Example5, EquilibriaAreFixedPointsOfOracle) {
  const Params p = ex5_saddle_params();
  const oracle::Map f = oracle::leslie_gower(p.at("b1"), p.at("b2"), p.at("c1"), p.at("c2"), p.at("h1"), p.at("h2"));
  for (Point2 q : ex5_equilibria(p)) {
    const oracle::P img = f({q.x, q.y});
    EXPECT_LT(std::hypot(img.x - q.x, img.y - q.y), 1e-10);
  }
}
