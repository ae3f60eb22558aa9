#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "compmap/fixed_points.hpp"
#include "compmap/geometry.hpp"
#include "compmap/planar_map.hpp"

namespace compmap {

// ---------------------------------------------------------------- side classification

enum class SideLabel { minus, plus, band, undecided };
enum class SideMode { quadrant_escape, limit_equilibrium };

std::string to_string(SideLabel l);
std::string to_string(SideMode m);

struct SideOptions {
  SideMode mode = SideMode::quadrant_escape;
  /// Absolute margin for quadrant entry and for limit comparison.
  double epsilon_margin = 0.0;
  /// Orbits ending within max(epsilon_margin, band_tol) of fp are band.
  double band_tol = 1e-9;
  std::size_t max_iter = 10000;
  double convergence_tol = 1e-12;
  double escape_bound = 1e6;
};

/// 1e-4 times the diagonal of the window.
double default_epsilon_margin(const Rect& window);

struct SideVerdict {
  SideLabel label = SideLabel::undecided;
  std::size_t iterations_used = 0;
  bool singular = false;
  Point2 last;  // last orbit point examined
};

/// Which side of the invariant curve through fp the orbit of p falls on.
SideVerdict classify_side(const PlanarMap& map, Point2 p, Point2 fp, const SideOptions& opts);

// ---------------------------------------------------------------- curves

enum class Monotonicity { increasing, decreasing };
enum class EndpointKind { domain_boundary, fixed_point, period_two_pair, truncated };

std::string to_string(Monotonicity m);
std::string to_string(EndpointKind k);

struct Endpoint {
  EndpointKind kind = EndpointKind::truncated;
  Point2 point;                  // the curve vertex
  std::optional<Point2> fixed;   // refined fixed point
  std::optional<std::pair<Point2, Point2>> pair;
};

struct MonotoneCurve {
  std::vector<Point2> vertices;
  Monotonicity monotonicity = Monotonicity::increasing;
  Endpoint endpoint_left;
  Endpoint endpoint_right;
};

/// Strict monotonicity of consecutive vertices per the curve's declared kind.
bool satisfies_monotonicity(const MonotoneCurve& c);

/// Vertical distance from p to the piecewise-linear interpolant; nullopt when
/// p.x is outside the curve's abscissa range.
std::optional<double> vertical_distance(const MonotoneCurve& c, Point2 p);

/// Least-squares slope of the k vertices nearest to p.
double fitted_slope_near(const MonotoneCurve& c, Point2 p, std::size_t k = 5);

struct EndpointOptions {
  double boundary_tol = 1e-6;
  double residual_tol = 1e-6;
};

/// Labels the first and last vertex of a nonempty curve.
std::pair<Endpoint, Endpoint> endpoint_analysis(const PlanarMap& map, const MonotoneCurve& curve, const Rect& region,
                                                const EndpointOptions& opts = {});

struct StableCurveOptions {
  std::size_t columns = 256;
  /// Explicit abscissae replacing the default column grid (the fp column and
  /// window edges are still added).
  std::vector<double> column_x;
  /// Number of geometric refinement columns on each side of fp.
  std::size_t refine_levels = 10;
  std::size_t probes = 17;
  double curve_tol = 1e-8;
  /// Automatically set to limit_equilibrium for continua by callers.
  SideMode mode = SideMode::quadrant_escape;
  std::size_t max_iter = 10000;
  unsigned workers = 0;
  /// Verify the invariant-curve hypotheses on the map's domain first.
  bool check_hypotheses = true;
};

struct ColumnBracket {
  double x = 0.0;
  double y_plus = 0.0;   // lower end, labelled plus
  double y_minus = 0.0;  // upper end, labelled minus
  bool on_curve = false; // bisection hit a band point
  double vertex_y() const { return on_curve ? y_plus : 0.5 * (y_plus + y_minus); }
};

enum class ColumnStatus { bracketed, no_bracket, failed };

struct ColumnResult {
  ColumnStatus status = ColumnStatus::no_bracket;
  ColumnBracket bracket;
};

struct StableCurveReport {
  MonotoneCurve curve;
  std::vector<ColumnBracket> brackets;
  /// Columns whose probes never bracketed the curve (curve outside the window
  /// there, or undecided probes).
  std::vector<double> skipped_columns;
  std::vector<double> failed_columns;  // bisection hit an undecided point
  std::size_t dropped_vertices = 0;    // removed to keep strict monotonicity
};

/// Side options used by the bisection: zero margin, tight band.
SideOptions bisection_side_options(const StableCurveOptions& opts);

/// Bisects the ordinate of the curve in one column. Ordinates above fp.y are
/// probed right of fp and below fp.y left of it.
ColumnResult bisect_column(const PlanarMap& map, Point2 fp, double x, const Rect& window,
                                           const StableCurveOptions& opts);

/// Traces the invariant curve through fp as the minus/plus decision boundary.
StableCurveReport trace_stable_curve(const PlanarMap& map, const FixedPointRecord& fp, const Rect& window,
                                     const StableCurveOptions& opts = {});

struct UnstableCurveOptions {
  std::size_t steps = 200;
  double seed_radius = 1e-4;
  std::size_t seeds_per_side = 32;
  double dedupe_spacing = 1e-6;
  double escape_bound = 1e6;
  /// Used instead of seed_radius and steps when mu = 1 within
  /// kNonhyperbolicTol; the centre direction drifts only quadratically.
  double center_seed_radius = 1e-2;
  std::size_t center_steps = 200000;
};

struct UnstableCurveReport {
  MonotoneCurve curve;
  std::size_t dropped_vertices = 0;
  bool escaped = false;
};

/// Forward images of a fundamental domain on each expanding side of fp along
/// v_mu. Orbits stop early once they settle on a fixed point.
UnstableCurveReport trace_unstable_curve(const PlanarMap& map, const FixedPointRecord& fp,
                                         const UnstableCurveOptions& opts = {});

// ---------------------------------------------------------------- boundary endpoints

struct EndpointConditionsOptions {
  std::size_t grid = 8;  // grid x grid Newton starts per piece of Delta
  Rect window = kDefaultSamplingWindow;
  double distinct_tol = 1e-6;
};

struct EndpointConditionsReport {
  bool condition_i = false;
  bool condition_ii = false;
  bool condition_iii = false;
  double det_at_fp = 0.0;
  std::size_t starts = 0;
  std::optional<Point2> fixed_point_witness;
  std::optional<Point2> period_two_witness;
  std::optional<Point2> preimage_witness;
  /// Sampling-based: "no counterexample found among N starts".
  std::string note;
};

EndpointConditionsReport check_theorem2_conditions(const PlanarMap& map, const FixedPointRecord& fp, const Rect& region,
                                         const EndpointConditionsOptions& opts = {});

}  // namespace compmap
