#include "compmap/basins.hpp"

#include <cmath>
#include <sstream>

#include "compmap/errors.hpp"
#include "compmap/parallel.hpp"

namespace compmap {

std::string to_string(CellLabel l) {
  switch (l) {
    case CellLabel::minus: return "minus";
    case CellLabel::plus: return "plus";
    case CellLabel::band: return "band";
    case CellLabel::undecided: return "undecided";
    case CellLabel::singular: return "singular";
  }
  return "?";
}

int grey_level(CellLabel l) {
  switch (l) {
    case CellLabel::minus: return 0;
    case CellLabel::plus: return 255;
    case CellLabel::band: return 128;
    case CellLabel::undecided: return 64;
    case CellLabel::singular: return 32;
  }
  return 64;
}

Point2 BasinRaster::center(std::size_t i, std::size_t j) const {
  return {window.x_lo + (static_cast<double>(i) + 0.5) * window.width() / static_cast<double>(nx),
          window.y_lo + (static_cast<double>(j) + 0.5) * window.height() / static_cast<double>(ny)};
}

std::optional<std::pair<std::size_t, std::size_t>> BasinRaster::cell_of(Point2 p) const {
  if (!window.contains(p)) return std::nullopt;
  const auto i = static_cast<std::size_t>(
      std::min<double>(static_cast<double>(nx - 1), std::floor((p.x - window.x_lo) / window.width() * nx)));
  const auto j = static_cast<std::size_t>(
      std::min<double>(static_cast<double>(ny - 1), std::floor((p.y - window.y_lo) / window.height() * ny)));
  return std::make_pair(i, j);
}

BasinRaster raster(const PlanarMap& map, Point2 fp, const Rect& window, std::size_t nx, std::size_t ny,
                   const RasterOptions& opts) {
  if (!window.bounded() || !(window.width() > 0) || !(window.height() > 0)) {
    throw PreconditionError("raster window must be bounded with positive extent");
  }
  if (nx < 2 || ny < 2) throw PreconditionError("raster needs at least 2x2 cells");
  BasinRaster r;
  r.window = window;
  r.nx = nx;
  r.ny = ny;
  r.map_id = map.name();
  r.fp = fp;
  r.side = opts.side;
  if (opts.default_margin) r.side.epsilon_margin = default_epsilon_margin(window);
  r.labels.assign(nx * ny, CellLabel::undecided);
  parallel_for(nx * ny, opts.workers, [&](std::size_t k) {
    const Point2 p = r.center(k % nx, k / nx);
    if (!map.domain().contains(p)) {
      r.labels[k] = CellLabel::singular;
      return;
    }
    const SideVerdict v = classify_side(map, p, fp, r.side);
    if (v.singular) {
      r.labels[k] = CellLabel::singular;
      return;
    }
    switch (v.label) {
      case SideLabel::minus: r.labels[k] = CellLabel::minus; break;
      case SideLabel::plus: r.labels[k] = CellLabel::plus; break;
      case SideLabel::band: r.labels[k] = CellLabel::band; break;
      case SideLabel::undecided: r.labels[k] = CellLabel::undecided; break;
    }
  });
  return r;
}

Census census(const BasinRaster& r) {
  Census c{};
  for (CellLabel l : r.labels) ++c[static_cast<std::size_t>(l)];
  return c;
}

std::string to_pgm(const BasinRaster& r, const std::vector<std::string>& comments) {
  std::ostringstream out;
  out << "P2\n";
  for (const auto& line : comments) out << "# " << line << "\n";
  out << r.nx << " " << r.ny << "\n255\n";
  for (std::size_t row = 0; row < r.ny; ++row) {
    const std::size_t j = r.ny - 1 - row;
    for (std::size_t i = 0; i < r.nx; ++i) {
      if (i) out << ' ';
      out << grey_level(r.at(i, j));
    }
    out << '\n';
  }
  return out.str();
}

std::string to_csv(const BasinRaster& r, const std::vector<std::string>& comments) {
  std::ostringstream out;
  for (const auto& line : comments) out << "# " << line << "\n";
  out << "i,j,x,y,label\n";
  for (std::size_t j = 0; j < r.ny; ++j) {
    for (std::size_t i = 0; i < r.nx; ++i) {
      const Point2 c = r.center(i, j);
      out << i << ',' << j << ',' << format_real(c.x) << ',' << format_real(c.y) << ',' << to_string(r.at(i, j))
          << '\n';
    }
  }
  return out.str();
}

LimitRecord limit_equilibrium(const PlanarMap& map, Point2 p, double tol, std::size_t max_iter,
                              double escape_bound) {
  if (!map.domain().contains(p)) throw DomainError("limit requested for a point outside the domain");
  LimitRecord rec;
  rec.start = p;
  Point2 q = p;
  for (std::size_t n = 0; n <= max_iter; ++n) {
    Point2 next;
    try {
      next = map.raw(q);
    } catch (const SingularityError&) {
      rec.singular = true;
      rec.diverged = true;
      rec.iterations = n;
      return rec;
    }
    if (distance(next, q) < tol) {
      rec.iterations = n;
      // Residual check on the limit; a stall short of a fixed point does not count.
      if (distance(next, q) < 1e-6) rec.limit = q;
      return rec;
    }
    if (!next.finite() || std::abs(next.x) > escape_bound || std::abs(next.y) > escape_bound) {
      rec.diverged = true;
      rec.iterations = n + 1;
      return rec;
    }
    q = next;
    rec.iterations = n + 1;
  }
  return rec;
}

ContinuityReport continuity_probe(const PlanarMap& map, Point2 a, Point2 b, std::size_t n, double tol,
                                  std::size_t max_iter) {
  if (n < 2) throw PreconditionError("continuity probe needs at least two samples");
  ContinuityReport rep;
  rep.limits.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double s = static_cast<double>(k) / static_cast<double>(n - 1);
    rep.limits[k] = limit_equilibrium(map, a + s * (b - a), tol, max_iter);
    if (!rep.limits[k].limit) ++rep.divergent;
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const auto& l0 = rep.limits[k].limit;
    const auto& l1 = rep.limits[k + 1].limit;
    if (!l0 || !l1) continue;
    const double gap = distance(*l0, *l1);
    if (gap > rep.max_gap) {
      rep.max_gap = gap;
      rep.argmax = k;
    }
  }
  return rep;
}

}  // namespace compmap
