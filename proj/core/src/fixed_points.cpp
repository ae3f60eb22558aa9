#include "compmap/fixed_points.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "compmap/errors.hpp"

namespace compmap {

namespace {

Point2 eigenvector_for(const Matrix2& m, double r) {
  const Point2 row1{m.a11 - r, m.a12};
  const Point2 row2{m.a21, m.a22 - r};
  Point2 v = norm(row1) >= norm(row2) ? Point2{row1.y, -row1.x} : Point2{row2.y, -row2.x};
  if (norm(v) == 0.0) {
    // M - rI vanishes: every direction is an eigenvector.
    v = {1.0, 0.0};
  }
  return canonical_direction(v);
}

struct Residual {
  std::function<Point2(Point2)> f;
  std::function<Matrix2(Point2)> jac;  // Jacobian of f
};

// Minimum-norm least-squares solution of A d = b through the dominant
// singular pair of A.
Point2 pinv_solve(const Matrix2& a, Point2 b) {
  const double s11 = a.a11 * a.a11 + a.a21 * a.a21;
  const double s12 = a.a11 * a.a12 + a.a21 * a.a22;
  const double s22 = a.a12 * a.a12 + a.a22 * a.a22;
  const double tr = s11 + s22;
  const double disc = std::sqrt(std::max(0.0, (s11 - s22) * (s11 - s22) + 4 * s12 * s12));
  const double sigma2 = 0.5 * (tr + disc);
  if (sigma2 <= 0.0) return {0.0, 0.0};
  Point2 v = std::abs(s12) > 0 || s11 != s22 ? eigenvector_for({s11, s12, s12, s22}, sigma2) : Point2{1.0, 0.0};
  const Point2 av = a * v;
  return (dot(av, b) / sigma2) * v;
}

Point2 project(const Rect& r, Point2 p) {
  return {std::clamp(p.x, r.x_lo, r.x_hi), std::clamp(p.y, r.y_lo, r.y_hi)};
}

struct NewtonResult {
  Point2 root;
  double residual;
  std::size_t iterations;
};

NewtonResult newton(const PlanarMap& map, const Residual& res, Point2 p, const NewtonOptions& o) {
  const Rect& dom = map.domain();
  if (!p.finite() || !dom.contains(p)) throw DomainError("Newton guess outside the domain");
  auto safe_norm = [&](Point2 q) {
    try {
      return norm(res.f(q));
    } catch (const SingularityError&) {
      return kInf;
    }
  };
  double r = safe_norm(p);
  if (!std::isfinite(r)) throw ConvergenceError("residual undefined at the Newton guess");
  // Once below tol, keep stepping while the residual still drops: at a
  // tangential root Newton converges only linearly and the residual is
  // quadratic in the position error.
  std::size_t it = 0, polished = 0;
  for (; it < o.max_iter; ++it) {
    if (r < o.tol && (r == 0.0 || ++polished > 60)) break;
    const Matrix2 a = res.jac(p);
    const Point2 b = -res.f(p);
    const double scale = a.frobenius();
    Point2 step;
    if (std::abs(a.det()) > 1e-12 * scale * scale) {
      const double d = a.det();
      step = {(a.a22 * b.x - a.a12 * b.y) / d, (a.a11 * b.y - a.a21 * b.x) / d};
    } else if (scale > 0) {
      step = pinv_solve(a, b);
    } else {
      break;
    }
    double s = 1.0;
    bool accepted = false;
    for (std::size_t k = 0; k <= o.max_halvings; ++k, s *= 0.5) {
      const Point2 trial = project(dom, p + s * step);
      const double rt = safe_norm(trial);
      if (rt < r) {
        p = trial;
        r = rt;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  if (r < o.tol) return {p, r, it};
  throw ConvergenceError("Newton did not converge (residual " + format_real(r) + " after " + std::to_string(it) +
                         " iterations)");
}

// Fallback for a vanishing Newton matrix: plain iteration of T.
NewtonResult iterate_fallback(const PlanarMap& map, const Residual& res, Point2 p, const NewtonOptions& o,
                              const std::function<Point2(Point2)>& step) {
  for (std::size_t k = 0; k < o.fallback_iterations; ++k) {
    p = step(p);
    if (!map.domain().contains(p)) break;
    const double r = norm(res.f(p));
    if (r < o.tol) return {p, r, k + 1};
  }
  throw ConvergenceError("Newton matrix singular and fixed-point iteration did not converge");
}

NewtonResult solve(const PlanarMap& map, const Residual& res, Point2 guess, const NewtonOptions& o,
                   const std::function<Point2(Point2)>& step) {
  try {
    return newton(map, res, guess, o);
  } catch (const ConvergenceError&) {
    return iterate_fallback(map, res, guess, o, step);
  }
}

}  // namespace

EigenData eigen2x2(const Matrix2& m) {
  EigenData e;
  const double tr = m.trace();
  const double det = m.det();
  const double disc = tr * tr - 4 * det;
  const double scale = m.frobenius();
  if (std::abs(disc) <= 1e-12 * scale * scale) {
    e.lambda = e.mu = 0.5 * tr;
    return e;
  }
  if (disc < 0) {
    e.complex_pair = true;
    e.lambda = e.mu = 0.5 * tr;
    e.imag = 0.5 * std::sqrt(-disc);
    return e;
  }
  const double sq = std::sqrt(disc);
  // Avoid cancellation: r1 has the sign of tr, r2 = det / r1.
  const double r1 = tr >= 0 ? 0.5 * (tr + sq) : 0.5 * (tr - sq);
  const double r2 = r1 != 0.0 ? det / r1 : 0.5 * (tr >= 0 ? tr - sq : tr + sq);
  double small = r2, big = r1;
  if (std::abs(small) > std::abs(big)) std::swap(small, big);
  e.lambda = small;
  e.mu = big;
  e.real_distinct = true;
  e.tied_magnitude = std::abs(std::abs(small) - std::abs(big)) <= 1e-12 * std::max(1.0, std::abs(big));
  e.v_lambda = eigenvector_for(m, e.lambda);
  e.v_mu = eigenvector_for(m, e.mu);
  return e;
}

std::string to_string(PointKind k) { return k == PointKind::fixed ? "fixed" : "period_two"; }

std::string to_string(Stability s) {
  switch (s) {
    case Stability::attractor: return "attractor";
    case Stability::repeller: return "repeller";
    case Stability::saddle: return "saddle";
    case Stability::nonhyperbolic: return "nonhyperbolic";
    case Stability::complex: return "complex";
  }
  return "?";
}

Stability classify_eigen(const EigenData& e) {
  if (e.complex_pair) return Stability::complex;
  const double a = std::abs(e.lambda), b = std::abs(e.mu);
  if (std::abs(a - 1) <= kNonhyperbolicTol || std::abs(b - 1) <= kNonhyperbolicTol) return Stability::nonhyperbolic;
  if (b < 1) return Stability::attractor;
  if (a > 1) return Stability::repeller;
  return Stability::saddle;
}

FixedPointRecord describe_point(const PlanarMap& map, Point2 p, PointKind kind) {
  FixedPointRecord rec;
  rec.location = p;
  rec.kind = kind;
  if (kind == PointKind::fixed) {
    rec.jacobian = jacobian(map, p);
    rec.residual = distance(map.raw(p), p);
  } else {
    const Point2 q = map.raw(p);
    rec.partner = q;
    rec.jacobian = jacobian(map, q) * jacobian(map, p);
    rec.residual = distance(map.raw(q), p);
  }
  rec.eigen = eigen2x2(rec.jacobian);
  rec.classification = classify_eigen(rec.eigen);
  return rec;
}

FixedPointRecord find_fixed_point(const PlanarMap& map, Point2 guess, const NewtonOptions& opts) {
  Residual res{[&](Point2 p) { return map.raw(p) - p; },
               [&](Point2 p) { return jacobian(map, p, opts.fd_step) - Matrix2::identity(); }};
  const NewtonResult r = solve(map, res, guess, opts, [&](Point2 p) { return map.raw(p); });
  FixedPointRecord rec = describe_point(map, r.root, PointKind::fixed);
  rec.iterations = r.iterations;
  return rec;
}

FixedPointRecord find_period_two(const PlanarMap& map, Point2 guess, const NewtonOptions& opts) {
  auto j2 = [&](Point2 p) {
    const Point2 q = map.raw(p);
    const Point2 qc = project(map.domain(), q);
    return jacobian(map, qc, opts.fd_step) * jacobian(map, p, opts.fd_step);
  };
  Residual res{[&](Point2 p) { return map.raw(map.raw(p)) - p; },
               [&](Point2 p) { return j2(p) - Matrix2::identity(); }};
  const NewtonResult r = solve(map, res, guess, opts, [&](Point2 p) { return map.raw(map.raw(p)); });
  if (distance(map.raw(r.root), r.root) < 10 * opts.tol) {
    throw DegenerateRootError("degenerate: Newton on T^2 converged to a fixed point at (" + format_real(r.root.x) +
                              ", " + format_real(r.root.y) + ")");
  }
  FixedPointRecord rec = describe_point(map, r.root, PointKind::period_two);
  rec.iterations = r.iterations;
  return rec;
}

Point2 solve_preimage(const PlanarMap& map, Point2 target, Point2 guess, const NewtonOptions& opts) {
  Residual res{[&](Point2 p) { return map.raw(p) - target; },
               [&](Point2 p) { return jacobian(map, p, opts.fd_step); }};
  return newton(map, res, guess, opts).root;
}

std::vector<Rect> delta_pieces(const Rect& region, Point2 fp) {
  std::vector<Rect> out;
  if (fp.x < region.x_hi && fp.y < region.y_hi) {
    out.push_back({std::max(fp.x, region.x_lo), region.x_hi, std::max(fp.y, region.y_lo), region.y_hi});
  }
  if (fp.x > region.x_lo && fp.y > region.y_lo) {
    out.push_back({region.x_lo, std::min(fp.x, region.x_hi), region.y_lo, std::min(fp.y, region.y_hi)});
  }
  return out;
}

std::string CurveHypothesesReport::first_failure() const {
  if (!delta_nonempty) return "delta_nonempty";
  if (!eigenvalues_ok) return "eigenvalues";
  if (!eigenspace_not_axis) return "eigenspace_not_axis";
  if (!strongly_competitive) return "strongly_competitive";
  return "";
}

CurveHypothesesReport check_theorem1_hypotheses(const PlanarMap& map, const FixedPointRecord& fp, const Rect& region,
                                         std::size_t samples, const Rect& window) {
  if (fp.kind != PointKind::fixed) throw PreconditionError("invariant-curve hypotheses apply to fixed points");
  CurveHypothesesReport rep;
  const auto pieces = delta_pieces(region, fp.location);
  rep.delta_nonempty = !pieces.empty();

  const EigenData& e = fp.eigen;
  rep.eigenvalues_ok = e.real_distinct && !e.tied_magnitude && e.lambda != 0.0 && e.mu > 0 &&
                       std::abs(e.lambda) < e.mu && std::abs(e.lambda) < 1;
  rep.eigenspace_not_axis = e.real_distinct && std::abs(e.v_lambda.x) > 1e-8 && std::abs(e.v_lambda.y) > 1e-8;

  bool strongly = !pieces.empty();
  for (const Rect& piece : pieces) {
    const Rect box = piece.clamped(window);
    if (!(box.width() > 0 && box.height() > 0)) continue;
    const CompetitivenessReport c = check_competitive(map, box, samples, window);
    rep.competitiveness.samples += c.samples;
    rep.competitiveness.evaluation_failures += c.evaluation_failures;
    if (!rep.competitiveness.witness) rep.competitiveness.witness = c.witness;
    if (!rep.competitiveness.strict_witness) rep.competitiveness.strict_witness = c.strict_witness;
    strongly = strongly && c.strongly;
  }
  rep.competitiveness.strongly = strongly;
  rep.competitiveness.competitive = strongly || !rep.competitiveness.witness;
  rep.strongly_competitive = strongly && rep.competitiveness.samples > 0;
  return rep;
}

}  // namespace compmap
