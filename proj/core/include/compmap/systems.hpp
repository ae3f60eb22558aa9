#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "compmap/curves.hpp"
#include "compmap/fixed_points.hpp"
#include "compmap/planar_map.hpp"

namespace compmap {

enum class ExampleId { ex1, ex2, ex3_T, ex3_T2, ex4, ex5 };

std::string to_string(ExampleId id);
std::optional<ExampleId> parse_example_id(const std::string& s);
std::vector<ExampleId> all_examples();

/// Closed-form (or, for ex5, numerically located) reference data at a point.
struct Fixture {
  Point2 point;
  PointKind kind = PointKind::fixed;
  double lambda = 0.0;  // smaller |.|
  double mu = 0.0;      // larger |.|
  std::optional<Point2> v_lambda;  // unnormalized closed form
  std::optional<Point2> v_mu;
  /// (c_2, d_2) along the unit eigenvector of the unit eigenvalue.
  std::optional<Point2> taylor2;
  std::string note;
};

/// One-parameter family of fixed points.
struct Continuum {
  std::string description;
  double s_lo = 0.0, s_hi = 1.0;  // sweep range
  std::function<Point2(double)> point;
  std::function<double(Point2)> residual;  // zero on the family
  std::function<Fixture(double)> fixture;
};

struct ExampleSystem {
  ExampleId id = ExampleId::ex1;
  Params params;
  PlanarMap map{"identity", [](Point2 q) { return q; }, Rect::whole_plane()};
  std::vector<Fixture> fixtures;
  std::optional<Continuum> continuum;
  Rect window;             // default analysis window
  Point2 default_fp;       // fixed point used by curve/basin commands
  SideMode mode = SideMode::quadrant_escape;
  std::string description;
};

/// Default parameters. ex5 defaults to the two-equilibria instance located by
/// bisection on h1.
Params default_params(ExampleId id);

/// Builds an example. Missing parameters take their defaults; for ex2 a
/// missing c1 or c2 and for ex4 a missing beta1 are solved from the required
/// relation. Throws ConstraintError naming the violated relation.
ExampleSystem make_example(ExampleId id, const Params& overrides = {});

struct SweepRecord {
  double s = 0.0;
  FixedPointRecord record;
  Fixture expected;
  double residual = 0.0;
  double eigen_error = 0.0;   // max relative eigenvalue mismatch
  double vector_error = 0.0;  // max |sin| of the angle between eigenvectors
  bool verified = false;      // residual < 1e-10, both errors < 1e-8
};

/// n equally spaced members of the declared continuum, endpoints included.
std::vector<SweepRecord> sweep_continuum(const ExampleSystem& sys, std::size_t n);
std::vector<SweepRecord> sweep_continuum(const ExampleSystem& sys, std::size_t n, double s_lo, double s_hi);

// ---------------------------------------------------------------- example 5

struct CriticalCurves {
  std::function<double(Point2)> c1_residual;
  std::function<double(Point2)> c2_residual;
  /// y1(x) from C1 (for x > h1) and the positive root y2(x) of C2.
  std::function<double(double)> y1;
  std::function<double(double)> y2;
  std::vector<Point2> graph1;
  std::vector<Point2> graph2;
};

/// Residuals and root-traced graphs over [x_lo, x_hi] (n samples). Columns
/// without a nonnegative root are skipped.
CriticalCurves ex5_critical_curves(const Params& p, double x_lo = 0.0, double x_hi = 3.0, std::size_t n = 301);

/// Implicit slopes of C1 and C2 at p.
std::pair<double, double> ex5_critical_slopes(const Params& p, Point2 q);

/// Equilibria of example 5 in [0, inf)^2: transversal crossings of the
/// critical curves plus tangential touches, polished by Newton and sorted by x.
std::vector<Point2> ex5_equilibria(const Params& p);

struct Ex5Tangency {
  double h1 = 0.0;
  Point2 nonhyperbolic;
  Point2 stable;
};

/// Bisection on h1 in [h1_lo, h1_hi] (three equilibria at h1_lo, one at
/// h1_hi) for the tangential touch of the critical curves.
Ex5Tangency locate_ex5_tangency(const Params& base, double h1_lo = 0.1, double h1_hi = 0.15);

/// Parameters of the documented search line (b1 = b2 = 3, c1 = c2 = 2, h2 = 0.1) without h1.
Params ex5_search_line();
/// Three-equilibria instance on the search line (h1 = 0.1) with a saddle.
Params ex5_saddle_params();

}  // namespace compmap
