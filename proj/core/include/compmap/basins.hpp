#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "compmap/curves.hpp"
#include "compmap/geometry.hpp"
#include "compmap/planar_map.hpp"

namespace compmap {

enum class CellLabel { minus, plus, band, undecided, singular };

std::string to_string(CellLabel l);
/// PGM grey level: minus 0, singular 32, undecided 64, band 128, plus 255.
int grey_level(CellLabel l);

struct RasterOptions {
  SideOptions side;
  /// When true, side.epsilon_margin is replaced by default_epsilon_margin(window).
  bool default_margin = true;
  unsigned workers = 0;
};

struct BasinRaster {
  Rect window;
  std::size_t nx = 0, ny = 0;
  /// Row-major, j = 0 is the bottom row (y_lo).
  std::vector<CellLabel> labels;
  std::string map_id;
  Point2 fp;
  SideOptions side;

  CellLabel at(std::size_t i, std::size_t j) const { return labels.at(j * nx + i); }
  Point2 center(std::size_t i, std::size_t j) const;
  /// Cell containing p, nullopt outside the window.
  std::optional<std::pair<std::size_t, std::size_t>> cell_of(Point2 p) const;
};

/// Classifies every cell centre. Deterministic for any worker count.
BasinRaster raster(const PlanarMap& map, Point2 fp, const Rect& window, std::size_t nx, std::size_t ny,
                   const RasterOptions& opts = {});

using Census = std::array<std::size_t, 5>;  // indexed by CellLabel
Census census(const BasinRaster& r);

/// PGM P2 text; row 0 of the image is the top of the window. Each comment
/// line is written as "# <line>".
std::string to_pgm(const BasinRaster& r, const std::vector<std::string>& comments = {});
/// CSV long form "i,j,x,y,label" preceded by "# <line>" comments.
std::string to_csv(const BasinRaster& r, const std::vector<std::string>& comments = {});

// ---------------------------------------------------------------- limits

struct LimitRecord {
  Point2 start;
  std::optional<Point2> limit;  // empty: divergence or no convergence
  std::size_t iterations = 0;
  bool diverged = false;
  bool singular = false;
};

/// Iterates until |p_{k+1} - p_k| < tol and |T(p) - p| < 1e-6 at the limit,
/// or until a coordinate exceeds escape_bound, or max_iter.
LimitRecord limit_equilibrium(const PlanarMap& map, Point2 p, double tol = 1e-12, std::size_t max_iter = 100000,
                              double escape_bound = 1e6);

struct ContinuityReport {
  double max_gap = 0.0;
  std::size_t argmax = 0;  // gap between samples argmax and argmax + 1
  std::size_t divergent = 0;
  std::vector<LimitRecord> limits;
};

/// Limits at n equally spaced points of the segment [a, b]; max_gap is the
/// largest distance between limits of adjacent convergent samples.
ContinuityReport continuity_probe(const PlanarMap& map, Point2 a, Point2 b, std::size_t n, double tol = 1e-12,
                                  std::size_t max_iter = 100000);

}  // namespace compmap
