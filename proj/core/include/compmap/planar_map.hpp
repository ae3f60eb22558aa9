#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "compmap/expr.hpp"
#include "compmap/geometry.hpp"

namespace compmap {

using Params = expr::Params;

/// Divisors with magnitude below this raise SingularityError.
inline constexpr double kSingularTol = 1e-12;
/// Default central-difference step, scaled by max(1, |coordinate|).
inline constexpr double kDefaultFdStep = 1e-6;

/// n / d, raising SingularityError when |d| < kSingularTol.
double checked_div(double n, double d);

/// An immutable planar map T(x, y) = (f(x, y), g(x, y)) on a rectangle.
///
/// The evaluator may be called slightly outside the domain (finite-difference
/// stencils rely on a C^1 extension); `evaluate` is the domain-checked entry
/// point.
class PlanarMap {
 public:
  using Function = std::function<Point2(Point2)>;
  using JacobianFunction = std::function<Matrix2(Point2)>;

  PlanarMap(std::string name, Function fn, Rect domain, Params params = {},
            JacobianFunction exact_jacobian = nullptr);

  const std::string& name() const { return impl_->name; }
  const Rect& domain() const { return impl_->domain; }
  const Params& params() const { return impl_->params; }
  bool has_exact_jacobian() const { return static_cast<bool>(impl_->jacobian); }

  /// Image without the domain check. Raises SingularityError for poles and
  /// non-finite results.
  Point2 raw(Point2 p) const;
  /// Exact Jacobian; requires has_exact_jacobian().
  Matrix2 exact_jacobian(Point2 p) const;

 private:
  struct Impl {
    std::string name;
    Function fn;
    Rect domain;
    Params params;
    JacobianFunction jacobian;
  };
  std::shared_ptr<const Impl> impl_;
};

/// T(p). Throws DomainError outside the domain and SingularityError at poles.
Point2 evaluate(const PlanarMap& map, Point2 p);

/// Exact Jacobian when available, else central differences with step
/// h * max(1, |coordinate|).
Matrix2 jacobian(const PlanarMap& map, Point2 p, double h = kDefaultFdStep);

/// Always the central-difference Jacobian.
Matrix2 fd_jacobian(const PlanarMap& map, Point2 p, double h = kDefaultFdStep);

/// outer ∘ inner on inner's domain; chain-rule Jacobian when both are exact.
PlanarMap compose(const PlanarMap& outer, const PlanarMap& inner, std::string name);

/// Builds a map from two DSL expressions. Parameters are bound and the exact
/// Jacobian is obtained by symbolic differentiation.
PlanarMap map_from_expressions(const std::string& f_text, const std::string& g_text, const Params& params,
                               Rect domain, std::string name = "dsl");

/// `samples` cell-centre points of a quasi-uniform grid over a bounded rectangle.
std::vector<Point2> sample_grid(const Rect& region, std::size_t samples);

// ---------------------------------------------------------------- orbits

enum class Termination { max_iter, escape, convergence, singularity, quadrant_entry };

std::string to_string(Termination t);

struct QuadrantTarget {
  Point2 origin;
  int quadrant = 2;
  double margin = 0.0;
};

struct StopRule {
  std::size_t max_iter = 10000;
  /// Stop when |p_{k+1} - p_k| < convergence_tol; 0 disables.
  double convergence_tol = 1e-12;
  /// Escape when a coordinate exceeds this in magnitude or the orbit leaves
  /// the map's domain.
  double escape_bound = 1e6;
  std::optional<QuadrantTarget> quadrant;
};

struct Orbit {
  std::vector<Point2> points;
  Termination terminated_by = Termination::max_iter;
};

/// Forward orbit starting at (and including) p.
Orbit orbit(const PlanarMap& map, Point2 p, const StopRule& stop = {});

// ---------------------------------------------------------------- checks

struct SignWitness {
  Point2 point;
  Matrix2 jacobian;
};

/// Sampling certificate for the competitive sign pattern (+,-;-,+).
struct CompetitivenessReport {
  bool competitive = false;
  bool strongly = false;
  std::size_t samples = 0;
  std::size_t evaluation_failures = 0;
  /// First sample violating the non-strict pattern.
  std::optional<SignWitness> witness;
  /// First sample violating the strict pattern.
  std::optional<SignWitness> strict_witness;
};

CompetitivenessReport check_competitive(const PlanarMap& map, const Rect& region, std::size_t samples,
                                        const Rect& window = kDefaultSamplingWindow);

enum class OCondition { o_plus, o_minus, inconclusive };

std::string to_string(OCondition c);

struct OConditionReport {
  OCondition verdict = OCondition::inconclusive;
  double min_det = 0.0;
  double max_det = 0.0;
  std::size_t samples = 0;
  std::size_t probe_pairs = 0;
  std::optional<std::pair<Point2, Point2>> collision;
};

struct OConditionOptions {
  double det_tol = 1e-12;
  std::size_t probe_pairs = 10000;
  double collision_tol = 1e-9;
  std::uint64_t seed = 0x5eed;
  Rect window = kDefaultSamplingWindow;
};

/// Sign of det J over a sample grid plus a random-pair injectivity probe.
OConditionReport check_o_condition(const PlanarMap& map, const Rect& region, std::size_t samples,
                                   const OConditionOptions& opts = {});

struct JacobianAgreement {
  std::size_t samples = 0;
  double worst_relative_error = 0.0;
  Point2 worst_point;
};

/// Compares the exact Jacobian with central differences at random interior
/// points; relative error is max-entry difference over max(1, max |J|).
JacobianAgreement verify_jacobian(const PlanarMap& map, const Rect& region, std::size_t samples,
                                  std::uint64_t seed = 7, const Rect& window = kDefaultSamplingWindow);

}  // namespace compmap
