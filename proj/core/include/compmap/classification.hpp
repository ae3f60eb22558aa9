#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "compmap/fixed_points.hpp"
#include "compmap/geometry.hpp"
#include "compmap/planar_map.hpp"

namespace compmap {

/// T(p) <=_se p, compared exactly on computed values.
bool is_subsolution(const PlanarMap& map, Point2 p);
/// p <=_se T(p).
bool is_supersolution(const PlanarMap& map, Point2 p);

/// Taylor coefficients of T(center + t v) - center - t v.
struct TaylorRay {
  Point2 center;
  /// Unit vector, oriented so that direction <=_se (0,0) whenever its
  /// components have opposite signs.
  Point2 direction;
  /// coeffs[k] = (c_{k+2}, d_{k+2}).
  std::vector<Point2> coeffs;
  std::size_t degree = 0;
  /// (J v) . v at the centre, and |J v - v|.
  double eigenvalue = 0.0;
  double eigen_residual = 0.0;
  /// |J v - v| > 1e-7: the direction is not a unit-eigenvalue eigenvector.
  bool eigen_warning = false;
  /// Largest |Richardson estimate - step-h/2 estimate| over all coefficients.
  double max_disagreement = 0.0;
  bool ill_conditioned = false;

  Point2 coefficient(std::size_t j) const { return coeffs.at(j - 2); }
};

inline constexpr double kDefaultTaylorStep = 1e-2;
inline constexpr double kDefaultCoefficientTol = 1e-8;

/// Richardson-extrapolated central differences of order 2..degree (degree <= 4).
/// Order j uses base step h * 2^(j-2) to keep roundoff below the coefficient
/// tolerance.
TaylorRay taylor_along_eigenvector(const PlanarMap& map, Point2 fp, Point2 v, std::size_t degree = 4,
                                   double h = kDefaultTaylorStep);

/// Smallest j with max(|c_j|, |d_j|) > tol.
std::optional<std::size_t> first_nonzero_index(const TaylorRay& ray, double tol = kDefaultCoefficientTol);

enum class LocalCase {
  hyperbolic_expanding,
  hyperbolic_contracting,
  odd_se_negative,   // escape from I ∩ int(Q2 ∪ Q4)
  odd_se_positive,   // convergence on I
  even_se_negative,  // convergence on I ∩ Q4, escape from I ∩ int Q2
  even_se_positive,  // convergence on I ∩ Q2, escape from I ∩ int Q4
  unclassified
};

std::string to_string(LocalCase c);

struct LocalVerdict {
  std::optional<std::size_t> ell;
  LocalCase case_id = LocalCase::unclassified;
  /// Which of the non-hyperbolic conditions held: (a) c*d < 0, (b) c != 0 with
  /// affine second component, (c) d != 0 with affine first component.
  bool condition_a = false;
  bool condition_b = false;
  bool condition_c = false;
  std::string detail;
};

/// Hyperbolic eigenvalue mu with eigenvector v (components of opposite sign).
LocalVerdict classify_hyperbolic_ray(double mu, Point2 v);

LocalVerdict classify_nonhyperbolic(const TaylorRay& ray, double tol = kDefaultCoefficientTol);

/// Which side of the fixed point must hold a subsolution (true) or a
/// supersolution (false) for a verdict, as (Q2 side, Q4 side).
std::optional<std::pair<bool, bool>> expected_solution_types(LocalCase c);

/// The order interval [[fp + t0 v, fp + t1 v]] with t0 > 0 and t1 < 0 taken
/// as the largest magnitudes in {1e-1, 1e-2, 1e-3} at which the expected
/// sub/supersolution inequality holds up to a roundoff slack. v must satisfy
/// v <=_se (0,0).
std::optional<Rect> order_interval(const PlanarMap& map, Point2 fp, Point2 v, LocalCase c);

/// Local analysis at a fixed point: picks an eigenvector with components of
/// opposite sign and applies the hyperbolic or non-hyperbolic classification.
struct LocalAnalysis {
  double eigenvalue = 0.0;
  Point2 direction;
  std::optional<TaylorRay> ray;
  LocalVerdict verdict;
};

std::optional<LocalAnalysis> analyze_local(const PlanarMap& map, const FixedPointRecord& fp,
                                           double tol = kDefaultCoefficientTol);

}  // namespace compmap
