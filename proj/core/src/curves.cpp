#include "compmap/curves.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "compmap/errors.hpp"
#include "compmap/parallel.hpp"

namespace compmap {

std::string to_string(SideLabel l) {
  switch (l) {
    case SideLabel::minus: return "minus";
    case SideLabel::plus: return "plus";
    case SideLabel::band: return "band";
    case SideLabel::undecided: return "undecided";
  }
  return "?";
}

std::string to_string(SideMode m) {
  return m == SideMode::quadrant_escape ? "quadrant_escape" : "limit_equilibrium";
}

double default_epsilon_margin(const Rect& window) { return 1e-4 * window.diagonal(); }

namespace {

SideLabel compare_limit(Point2 limit, Point2 fp, const SideOptions& o) {
  const Point2 d = limit - fp;
  const double r = norm(d);
  if (r <= std::max(o.epsilon_margin, o.band_tol)) return SideLabel::band;
  const double slack = 1e-9 + 1e-6 * r;
  if (d.x <= slack && d.y >= -slack) return SideLabel::minus;
  if (d.x >= -slack && d.y <= slack) return SideLabel::plus;
  return SideLabel::undecided;
}

}  // namespace

SideVerdict classify_side(const PlanarMap& map, Point2 p, Point2 fp, const SideOptions& o) {
  SideVerdict out;
  out.last = p;
  const Rect& dom = map.domain();
  const double band = std::max(o.epsilon_margin, o.band_tol);
  auto escaped = [&](Point2 q) {
    return !dom.contains(q) || std::abs(q.x) > o.escape_bound || std::abs(q.y) > o.escape_bound;
  };
  Point2 q = p;
  for (std::size_t n = 0;; ++n) {
    out.iterations_used = n;
    out.last = q;
    if (o.mode == SideMode::quadrant_escape) {
      if (in_open_quadrant(fp, q, 2, o.epsilon_margin)) {
        out.label = SideLabel::minus;
        return out;
      }
      if (in_open_quadrant(fp, q, 4, o.epsilon_margin)) {
        out.label = SideLabel::plus;
        return out;
      }
    }
    if (n == o.max_iter) break;
    Point2 next;
    try {
      next = map.raw(q);
    } catch (const SingularityError&) {
      out.singular = true;
      out.label = SideLabel::undecided;
      return out;
    }
    if (escaped(next)) {
      out.last = next;
      out.iterations_used = n + 1;
      out.label = SideLabel::undecided;
      return out;
    }
    if (distance(next, q) < o.convergence_tol) {
      out.iterations_used = n + 1;
      out.last = next;
      if (o.mode == SideMode::limit_equilibrium) {
        out.label = compare_limit(next, fp, o);
      } else {
        out.label = distance(next, fp) <= band ? SideLabel::band : SideLabel::undecided;
      }
      return out;
    }
    q = next;
  }
  out.label = distance(q, fp) <= band ? SideLabel::band : SideLabel::undecided;
  return out;
}

// ---------------------------------------------------------------- curve utilities

std::string to_string(Monotonicity m) { return m == Monotonicity::increasing ? "increasing" : "decreasing"; }

std::string to_string(EndpointKind k) {
  switch (k) {
    case EndpointKind::domain_boundary: return "domain_boundary";
    case EndpointKind::fixed_point: return "fixed_point";
    case EndpointKind::period_two_pair: return "period_two_pair";
    case EndpointKind::truncated: return "truncated";
  }
  return "?";
}

bool satisfies_monotonicity(const MonotoneCurve& c) {
  for (std::size_t i = 1; i < c.vertices.size(); ++i) {
    const Point2 a = c.vertices[i - 1], b = c.vertices[i];
    if (!(b.x > a.x)) return false;
    if (c.monotonicity == Monotonicity::increasing ? !(b.y > a.y) : !(b.y < a.y)) return false;
  }
  return true;
}

std::optional<double> vertical_distance(const MonotoneCurve& c, Point2 p) {
  const auto& v = c.vertices;
  if (v.empty() || p.x < v.front().x || p.x > v.back().x) return std::nullopt;
  if (v.size() == 1) return std::abs(p.y - v.front().y);
  auto it = std::lower_bound(v.begin(), v.end(), p.x, [](Point2 a, double x) { return a.x < x; });
  if (it == v.begin()) return std::abs(p.y - it->y);
  const Point2 b = *it, a = *(it - 1);
  const double s = (p.x - a.x) / (b.x - a.x);
  return std::abs(p.y - (a.y + s * (b.y - a.y)));
}

double fitted_slope_near(const MonotoneCurve& c, Point2 p, std::size_t k) {
  std::vector<Point2> v = c.vertices;
  if (v.size() < 2) throw PreconditionError("slope fit needs at least two vertices");
  k = std::min(k, v.size());
  std::partial_sort(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end(),
                    [&](Point2 a, Point2 b) { return distance(a, p) < distance(b, p); });
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < k; ++i) {
    mx += v[i].x;
    my += v[i].y;
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (v[i].x - mx) * (v[i].x - mx);
    sxy += (v[i].x - mx) * (v[i].y - my);
  }
  if (sxx == 0) throw PreconditionError("slope fit on a vertical set of vertices");
  return sxy / sxx;
}

namespace {

Endpoint label_endpoint(const PlanarMap& map, Point2 p, const Rect& region, const EndpointOptions& o) {
  Endpoint e;
  e.point = p;
  if (region.distance_to_boundary(p) <= o.boundary_tol) {
    e.kind = EndpointKind::domain_boundary;
    return e;
  }
  try {
    const Point2 tp = map.raw(p);
    if (distance(tp, p) < o.residual_tol) {
      e.kind = EndpointKind::fixed_point;
      try {
        const FixedPointRecord r = find_fixed_point(map, p);
        e.fixed = distance(r.location, p) < 1e3 * o.residual_tol ? r.location : p;
      } catch (const Error&) {
        e.fixed = p;
      }
      return e;
    }
    const Point2 t2p = map.raw(tp);
    if (distance(t2p, p) < o.residual_tol) {
      e.kind = EndpointKind::period_two_pair;
      e.pair = std::make_pair(p, tp);
      return e;
    }
  } catch (const Error&) {
  }
  e.kind = EndpointKind::truncated;
  return e;
}

}  // namespace

std::pair<Endpoint, Endpoint> endpoint_analysis(const PlanarMap& map, const MonotoneCurve& curve, const Rect& region,
                                                const EndpointOptions& opts) {
  if (curve.vertices.empty()) throw PreconditionError("endpoint analysis of an empty curve");
  return {label_endpoint(map, curve.vertices.front(), region, opts),
          label_endpoint(map, curve.vertices.back(), region, opts)};
}

// ---------------------------------------------------------------- stable curve

SideOptions bisection_side_options(const StableCurveOptions& opts) {
  SideOptions s;
  s.mode = opts.mode;
  s.epsilon_margin = 0.0;
  s.band_tol = 1e-9;
  s.max_iter = opts.max_iter;
  return s;
}

ColumnResult bisect_column(const PlanarMap& map, Point2 fp, double x, const Rect& window,
                           const StableCurveOptions& opts) {
  ColumnResult out;
  out.bracket.x = x;
  double lo = window.y_lo, hi = window.y_hi;
  if (x > fp.x) lo = std::max(lo, fp.y);
  if (x < fp.x) hi = std::min(hi, fp.y);
  if (!(lo < hi) || opts.probes < 2) return out;

  const SideOptions side = bisection_side_options(opts);
  auto label = [&](double y) { return classify_side(map, {x, y}, fp, side).label; };

  std::vector<double> ys(opts.probes);
  std::vector<SideLabel> labels(opts.probes);
  for (std::size_t k = 0; k < opts.probes; ++k) {
    ys[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(opts.probes - 1);
    labels[k] = label(ys[k]);
  }
  // Lowest minus probe and the highest plus probe beneath it.
  std::optional<std::size_t> km;
  for (std::size_t k = 0; k < opts.probes; ++k) {
    if (labels[k] == SideLabel::minus) {
      km = k;
      break;
    }
  }
  std::optional<std::size_t> kp;
  for (std::size_t k = 0; k < (km ? *km : opts.probes); ++k) {
    if (labels[k] == SideLabel::plus) kp = k;
  }
  const std::size_t from = kp ? *kp + 1 : 0;
  const std::size_t to = km ? *km : opts.probes;
  for (std::size_t k = from; k < to; ++k) {
    if (labels[k] == SideLabel::band) {
      out.status = ColumnStatus::bracketed;
      out.bracket.y_plus = out.bracket.y_minus = ys[k];
      out.bracket.on_curve = true;
      return out;
    }
  }
  if (!kp || !km) return out;

  double a = ys[*kp], b = ys[*km];
  while (b - a > opts.curve_tol) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    switch (label(mid)) {
      case SideLabel::minus: b = mid; break;
      case SideLabel::plus: a = mid; break;
      case SideLabel::band:
        out.status = ColumnStatus::bracketed;
        out.bracket.y_plus = out.bracket.y_minus = mid;
        out.bracket.on_curve = true;
        return out;
      case SideLabel::undecided:
        out.status = ColumnStatus::failed;
        out.bracket.y_plus = a;
        out.bracket.y_minus = b;
        return out;
    }
  }
  out.status = ColumnStatus::bracketed;
  out.bracket.y_plus = a;
  out.bracket.y_minus = b;
  return out;
}

namespace {

// Locates where the curve crosses a horizontal window edge between two
// abscissae whose edge points carry labels `at_a` and its opposite.
std::optional<Point2> edge_crossing(const PlanarMap& map, Point2 fp, double y, double xa, double xb,
                                    const StableCurveOptions& opts) {
  const SideOptions side = bisection_side_options(opts);
  auto label = [&](double x) { return classify_side(map, {x, y}, fp, side).label; };
  const SideLabel la = label(xa), lb = label(xb);
  if (la == lb || la == SideLabel::undecided || lb == SideLabel::undecided || la == SideLabel::band ||
      lb == SideLabel::band) {
    return std::nullopt;
  }
  double a = xa, b = xb;
  while (b - a > opts.curve_tol) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const SideLabel lm = label(mid);
    if (lm == la) {
      a = mid;
    } else if (lm == lb) {
      b = mid;
    } else if (lm == SideLabel::band) {
      return Point2{mid, y};
    } else {
      return std::nullopt;
    }
  }
  return Point2{0.5 * (a + b), y};
}

}  // namespace

StableCurveReport trace_stable_curve(const PlanarMap& map, const FixedPointRecord& fp, const Rect& window_in,
                                     const StableCurveOptions& opts) {
  if (!window_in.bounded()) throw PreconditionError("curve tracing requires a bounded window");
  if (!(opts.curve_tol > 0)) throw PreconditionError("curve tolerance must be positive");
  const Rect window = intersect(window_in, map.domain());
  if (opts.check_hypotheses) {
    const CurveHypothesesReport h = check_theorem1_hypotheses(map, fp, map.domain());
    if (!h.all()) {
      throw HypothesisError(h.first_failure(), "invariant-curve hypothesis failed: " + h.first_failure());
    }
  }
  const Point2 c = fp.location;

  std::vector<double> xs;
  if (opts.column_x.empty()) {
    const double dx = window.width() / static_cast<double>(opts.columns);
    for (std::size_t i = 0; i < opts.columns; ++i) xs.push_back(window.x_lo + (static_cast<double>(i) + 0.5) * dx);
    double step = dx;
    for (std::size_t k = 0; k < opts.refine_levels; ++k) {
      step *= 0.5;
      xs.push_back(c.x - step);
      xs.push_back(c.x + step);
    }
  } else {
    xs = opts.column_x;
  }
  xs.push_back(window.x_lo);
  xs.push_back(window.x_hi);
  if (c.x >= window.x_lo && c.x <= window.x_hi) xs.push_back(c.x);
  xs.erase(std::remove_if(xs.begin(), xs.end(), [&](double x) { return !(x >= window.x_lo && x <= window.x_hi); }),
           xs.end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  const bool fp_inside = window.contains(c);
  std::vector<ColumnResult> results(xs.size());
  parallel_for(xs.size(), opts.workers, [&](std::size_t i) {
    if (xs[i] == c.x && fp_inside) {
      results[i].status = ColumnStatus::bracketed;
      results[i].bracket = {c.x, c.y, c.y, true};
      return;
    }
    results[i] = bisect_column(map, c, xs[i], window, opts);
  });

  StableCurveReport rep;
  std::vector<Point2> verts;
  std::optional<std::size_t> first, last;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    switch (results[i].status) {
      case ColumnStatus::bracketed:
        rep.brackets.push_back(results[i].bracket);
        verts.push_back({xs[i], results[i].bracket.vertex_y()});
        if (!first) first = i;
        last = i;
        break;
      case ColumnStatus::no_bracket: rep.skipped_columns.push_back(xs[i]); break;
      case ColumnStatus::failed: rep.failed_columns.push_back(xs[i]); break;
    }
  }
  // Exits through the bottom (left end) and top (right end) edges.
  if (first && *first > 0) {
    if (auto p = edge_crossing(map, c, window.y_lo, xs[*first - 1], xs[*first], opts)) verts.push_back(*p);
  }
  if (last && *last + 1 < xs.size()) {
    if (auto p = edge_crossing(map, c, window.y_hi, xs[*last], xs[*last + 1], opts)) verts.push_back(*p);
  }
  std::sort(verts.begin(), verts.end(), [](Point2 a, Point2 b) { return a.x < b.x; });

  MonotoneCurve& curve = rep.curve;
  curve.monotonicity = Monotonicity::increasing;
  for (const Point2 v : verts) {
    if (!curve.vertices.empty() && !(v.x > curve.vertices.back().x && v.y > curve.vertices.back().y)) {
      ++rep.dropped_vertices;
      continue;
    }
    curve.vertices.push_back(v);
  }
  if (!curve.vertices.empty()) {
    std::tie(curve.endpoint_left, curve.endpoint_right) = endpoint_analysis(map, curve, window);
  }
  return rep;
}

// ---------------------------------------------------------------- unstable curve

UnstableCurveReport trace_unstable_curve(const PlanarMap& map, const FixedPointRecord& fp,
                                         const UnstableCurveOptions& opts) {
  const EigenData& e = fp.eigen;
  if (!e.real_distinct || !(e.mu > 1.0 - kNonhyperbolicTol)) {
    throw PreconditionError("unstable curve requires a real eigenvalue mu >= 1");
  }
  const Point2 v = e.v_mu;
  if (!(v.x * v.y < 0) || std::abs(v.x) < 1e-12 || std::abs(v.y) < 1e-12) {
    throw PreconditionError("eigenspace of mu is a coordinate axis or not decreasing");
  }
  if (opts.seeds_per_side == 0 || !(opts.seed_radius > 0)) throw PreconditionError("invalid seeding options");
  const bool center = std::abs(e.mu - 1.0) <= kNonhyperbolicTol;
  const double r = center ? opts.center_seed_radius : opts.seed_radius;
  const std::size_t steps = center ? opts.center_steps : opts.steps;

  UnstableCurveReport rep;
  std::vector<Point2> pts{fp.location};
  const Rect& dom = map.domain();
  for (double side : {1.0, -1.0}) {
    // Seeds fill the fundamental domain between fp + r v and its image.
    const Point2 q0 = fp.location + (side * r) * v;
    if (!dom.contains(q0)) continue;
    double rho = 0.0;
    try {
      rho = side * dot(map.raw(q0) - fp.location, v);
    } catch (const SingularityError&) {
      continue;
    }
    if (!(rho > r)) continue;  // the side does not expand
    for (std::size_t k = 0; k < opts.seeds_per_side; ++k) {
      const double rk = r * std::pow(rho / r, static_cast<double>(k) / static_cast<double>(opts.seeds_per_side));
      Point2 q = fp.location + (side * rk) * v;
      if (!dom.contains(q)) continue;
      pts.push_back(q);
      Point2 kept = q;
      for (std::size_t n = 0; n < steps; ++n) {
        Point2 next;
        try {
          next = map.raw(q);
        } catch (const SingularityError&) {
          rep.escaped = true;
          break;
        }
        if (!dom.contains(next) || std::abs(next.x) > opts.escape_bound || std::abs(next.y) > opts.escape_bound) {
          rep.escaped = true;
          break;
        }
        const bool settled = distance(next, q) < 1e-13 * std::max(1.0, norm(q));
        q = next;
        if (distance(q, kept) >= opts.dedupe_spacing) {
          pts.push_back(q);
          kept = q;
        }
        if (settled) {
          pts.push_back(q);
          break;
        }
      }
    }
  }
  std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y > b.y); });
  MonotoneCurve& curve = rep.curve;
  curve.monotonicity = Monotonicity::decreasing;
  for (const Point2 p : pts) {
    if (!curve.vertices.empty()) {
      const Point2 b = curve.vertices.back();
      if (distance(p, b) < opts.dedupe_spacing) continue;
      if (!(p.x > b.x && p.y < b.y)) {
        ++rep.dropped_vertices;
        continue;
      }
    }
    curve.vertices.push_back(p);
  }
  std::tie(curve.endpoint_left, curve.endpoint_right) = endpoint_analysis(map, curve, dom);
  if (rep.escaped) {
    // Orbits that left the domain cut the curve short at the last kept vertex.
    for (Endpoint* ep : {&curve.endpoint_left, &curve.endpoint_right}) {
      if (ep->kind != EndpointKind::fixed_point && ep->kind != EndpointKind::domain_boundary) {
        ep->kind = EndpointKind::truncated;
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------- boundary endpoints

EndpointConditionsReport check_theorem2_conditions(const PlanarMap& map, const FixedPointRecord& fp, const Rect& region,
                                         const EndpointConditionsOptions& opts) {
  if (fp.kind != PointKind::fixed) throw PreconditionError("endpoint conditions apply to fixed points");
  EndpointConditionsReport rep;
  const Point2 c = fp.location;
  rep.det_at_fp = jacobian(map, c).det();
  auto in_delta = [&](Point2 p) {
    if (!region.contains(p)) return false;
    const double m = 1e-9 * std::max(1.0, norm(c));
    return in_open_quadrant(c, p, 1, m) || in_open_quadrant(c, p, 3, m);
  };
  for (const Rect& piece : delta_pieces(region, c)) {
    const Rect box = piece.clamped(opts.window);
    if (!(box.width() > 0 && box.height() > 0)) continue;
    for (const Point2 start : sample_grid(box, opts.grid * opts.grid)) {
      ++rep.starts;
      if (!rep.fixed_point_witness) {
        try {
          const Point2 r = find_fixed_point(map, start).location;
          if (in_delta(r) && distance(r, c) > opts.distinct_tol) rep.fixed_point_witness = r;
        } catch (const Error&) {
        }
      }
      if (!rep.period_two_witness) {
        try {
          const Point2 r = find_period_two(map, start).location;
          if (in_delta(r)) rep.period_two_witness = r;
        } catch (const Error&) {
        }
      }
      if (!rep.preimage_witness) {
        try {
          const Point2 r = solve_preimage(map, c, start);
          if (in_delta(r) && distance(r, c) > opts.distinct_tol) rep.preimage_witness = r;
        } catch (const Error&) {
        }
      }
    }
  }
  const bool no_fixed = !rep.fixed_point_witness;
  const bool no_p2 = !rep.period_two_witness;
  const bool no_pre = !rep.preimage_witness;
  rep.condition_i = no_fixed && no_p2;
  rep.condition_ii = no_fixed && rep.det_at_fp > 0 && no_pre;
  rep.condition_iii = no_p2 && rep.det_at_fp < 0 && no_pre;
  rep.note = "sampling-based: no counterexample found among " + std::to_string(rep.starts) + " starts";
  return rep;
}

}  // namespace compmap
