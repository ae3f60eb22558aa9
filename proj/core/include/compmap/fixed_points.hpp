#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "compmap/geometry.hpp"
#include "compmap/planar_map.hpp"

namespace compmap {

/// Eigen-structure of a 2x2 matrix with eigenvalues ordered by magnitude.
struct EigenData {
  double lambda = 0.0;  // smaller |.|
  double mu = 0.0;      // larger |.|
  Point2 v_lambda;      // unit, first significant component positive
  Point2 v_mu;
  bool real_distinct = false;
  /// Complex-conjugate pair; lambda = mu = real part, imag = |imaginary part|.
  bool complex_pair = false;
  double imag = 0.0;
  /// Real distinct eigenvalues of equal magnitude (r and -r).
  bool tied_magnitude = false;
};

/// Closed-form eigen-decomposition. Discriminants below 1e-12 * ||M||_F^2 in
/// magnitude count as repeated roots (real_distinct = false, eigenvectors
/// left zero).
EigenData eigen2x2(const Matrix2& m);

enum class PointKind { fixed, period_two };
enum class Stability { attractor, repeller, saddle, nonhyperbolic, complex };

std::string to_string(PointKind k);
std::string to_string(Stability s);

/// Eigenvalues within this distance of modulus 1 are non-hyperbolic.
inline constexpr double kNonhyperbolicTol = 1e-7;

Stability classify_eigen(const EigenData& e);

struct FixedPointRecord {
  Point2 location;
  PointKind kind = PointKind::fixed;
  std::optional<Point2> partner;
  Matrix2 jacobian;  // J_T, or J_{T^2} for period-two points
  EigenData eigen;
  Stability classification = Stability::attractor;
  double residual = 0.0;
  std::size_t iterations = 0;
};

struct NewtonOptions {
  double tol = 1e-10;
  std::size_t max_iter = 100;
  std::size_t max_halvings = 20;
  std::size_t fallback_iterations = 50;
  double fd_step = kDefaultFdStep;
};

/// Damped Newton on T(p) - p. Trial points are projected onto the domain;
/// near-singular Newton matrices use the minimum-norm step, which converges
/// onto continua of fixed points. Throws ConvergenceError.
FixedPointRecord find_fixed_point(const PlanarMap& map, Point2 guess, const NewtonOptions& opts = {});

/// Newton on T^2(p) - p. Throws DegenerateRootError when the root is a fixed
/// point (|T(p) - p| < 10 * tol).
FixedPointRecord find_period_two(const PlanarMap& map, Point2 guess, const NewtonOptions& opts = {});

/// Damped Newton on T(p) - target.
Point2 solve_preimage(const PlanarMap& map, Point2 target, Point2 guess, const NewtonOptions& opts = {});

/// Builds a record at a known fixed (or period-two) point without solving.
FixedPointRecord describe_point(const PlanarMap& map, Point2 p, PointKind kind = PointKind::fixed);

/// Rectangular pieces of Delta = region ∩ int(Q1(fp) ∪ Q3(fp)); empty pieces
/// are omitted.
std::vector<Rect> delta_pieces(const Rect& region, Point2 fp);

/// Hypotheses for an invariant curve through a fixed point.
struct CurveHypothesesReport {
  bool delta_nonempty = false;        // (a)
  bool eigenvalues_ok = false;        // (b) real, 0 < |lambda| < mu, |lambda| < 1
  bool eigenspace_not_axis = false;   // (c) v_lambda has no zero component
  bool strongly_competitive = false;  // (d) sampled on Delta
  CompetitivenessReport competitiveness;

  bool all() const { return delta_nonempty && eigenvalues_ok && eigenspace_not_axis && strongly_competitive; }
  /// Name of the first failing verdict, empty when all hold.
  std::string first_failure() const;
};

CurveHypothesesReport check_theorem1_hypotheses(const PlanarMap& map, const FixedPointRecord& fp, const Rect& region,
                                         std::size_t samples = 400, const Rect& window = kDefaultSamplingWindow);

}  // namespace compmap
