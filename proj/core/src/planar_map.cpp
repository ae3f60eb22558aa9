#include "compmap/planar_map.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "compmap/errors.hpp"

namespace compmap {

double checked_div(double n, double d) {
  if (std::abs(d) < kSingularTol) throw SingularityError("denominator below 1e-12 in magnitude");
  return n / d;
}

PlanarMap::PlanarMap(std::string name, Function fn, Rect domain, Params params, JacobianFunction exact_jacobian) {
  domain.validate();
  if (!fn) throw PreconditionError("planar map requires an evaluator");
  impl_ = std::make_shared<const Impl>(
      Impl{std::move(name), std::move(fn), domain, std::move(params), std::move(exact_jacobian)});
}

Point2 PlanarMap::raw(Point2 p) const {
  const Point2 q = impl_->fn(p);
  if (!q.finite()) throw SingularityError("non-finite image at (" + format_real(p.x) + ", " + format_real(p.y) + ")");
  return q;
}

Matrix2 PlanarMap::exact_jacobian(Point2 p) const {
  if (!impl_->jacobian) throw PreconditionError("map '" + impl_->name + "' has no exact Jacobian");
  const Matrix2 j = impl_->jacobian(p);
  if (!j.finite()) throw SingularityError("non-finite Jacobian");
  return j;
}

Point2 evaluate(const PlanarMap& map, Point2 p) {
  if (!p.finite() || !map.domain().contains(p)) {
    throw DomainError("point (" + format_real(p.x) + ", " + format_real(p.y) + ") outside the domain of '" +
                      map.name() + "'");
  }
  return map.raw(p);
}

Matrix2 fd_jacobian(const PlanarMap& map, Point2 p, double h) {
  if (!(h > 0)) throw PreconditionError("finite-difference step must be positive");
  const double hx = h * std::max(1.0, std::abs(p.x));
  const double hy = h * std::max(1.0, std::abs(p.y));
  const Point2 fxp = map.raw({p.x + hx, p.y});
  const Point2 fxm = map.raw({p.x - hx, p.y});
  const Point2 fyp = map.raw({p.x, p.y + hy});
  const Point2 fym = map.raw({p.x, p.y - hy});
  return {(fxp.x - fxm.x) / (2 * hx), (fyp.x - fym.x) / (2 * hy), (fxp.y - fxm.y) / (2 * hx),
          (fyp.y - fym.y) / (2 * hy)};
}

Matrix2 jacobian(const PlanarMap& map, Point2 p, double h) {
  if (!p.finite() || !map.domain().contains(p)) throw DomainError("Jacobian requested outside the domain");
  if (map.has_exact_jacobian()) return map.exact_jacobian(p);
  return fd_jacobian(map, p, h);
}

PlanarMap compose(const PlanarMap& outer, const PlanarMap& inner, std::string name) {
  PlanarMap::Function fn = [outer, inner](Point2 p) { return outer.raw(inner.raw(p)); };
  PlanarMap::JacobianFunction jac;
  if (outer.has_exact_jacobian() && inner.has_exact_jacobian()) {
    jac = [outer, inner](Point2 p) { return outer.exact_jacobian(inner.raw(p)) * inner.exact_jacobian(p); };
  }
  Params params = inner.params();
  for (const auto& [k, v] : outer.params()) params.emplace(k, v);
  return PlanarMap(std::move(name), std::move(fn), inner.domain(), std::move(params), std::move(jac));
}

PlanarMap map_from_expressions(const std::string& f_text, const std::string& g_text, const Params& params,
                               Rect domain, std::string name) {
  const expr::Expr f = expr::bind(expr::parse(f_text), params);
  const expr::Expr g = expr::bind(expr::parse(g_text), params);
  for (const expr::Expr* e : {&f, &g}) {
    const auto unbound = expr::parameters(*e);
    if (!unbound.empty()) throw UnboundParameterError(*unbound.begin());
  }
  struct Compiled {
    expr::Compiled f, g, fx, fy, gx, gy;
  };
  auto c = std::make_shared<const Compiled>(Compiled{
      expr::Compiled(f), expr::Compiled(g), expr::Compiled(expr::differentiate(f, expr::Var::x)),
      expr::Compiled(expr::differentiate(f, expr::Var::y)), expr::Compiled(expr::differentiate(g, expr::Var::x)),
      expr::Compiled(expr::differentiate(g, expr::Var::y))});
  PlanarMap::Function fn = [c](Point2 p) { return Point2{c->f(p.x, p.y), c->g(p.x, p.y)}; };
  PlanarMap::JacobianFunction jac = [c](Point2 p) {
    return Matrix2{c->fx(p.x, p.y), c->fy(p.x, p.y), c->gx(p.x, p.y), c->gy(p.x, p.y)};
  };
  return PlanarMap(std::move(name), std::move(fn), domain, params, std::move(jac));
}

std::vector<Point2> sample_grid(const Rect& region, std::size_t samples) {
  if (samples == 0) throw PreconditionError("sample count must be at least 1");
  if (!region.bounded()) throw PreconditionError("sample_grid requires a bounded rectangle");
  const auto k = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(samples))));
  std::vector<Point2> pts;
  pts.reserve(k * k);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < k; ++i) {
      pts.push_back({region.x_lo + (static_cast<double>(i) + 0.5) * region.width() / static_cast<double>(k),
                     region.y_lo + (static_cast<double>(j) + 0.5) * region.height() / static_cast<double>(k)});
    }
  }
  return pts;
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::max_iter: return "max_iter";
    case Termination::escape: return "escape";
    case Termination::convergence: return "convergence";
    case Termination::singularity: return "singularity";
    case Termination::quadrant_entry: return "quadrant_entry";
  }
  return "?";
}

Orbit orbit(const PlanarMap& map, Point2 p, const StopRule& stop) {
  Orbit out;
  out.points.push_back(p);
  auto escaped = [&](Point2 q) {
    return !map.domain().contains(q) || std::abs(q.x) > stop.escape_bound || std::abs(q.y) > stop.escape_bound;
  };
  auto entered = [&](Point2 q) {
    return stop.quadrant && in_open_quadrant(stop.quadrant->origin, q, stop.quadrant->quadrant, stop.quadrant->margin);
  };
  if (escaped(p)) {
    out.terminated_by = Termination::escape;
    return out;
  }
  if (entered(p)) {
    out.terminated_by = Termination::quadrant_entry;
    return out;
  }
  for (std::size_t k = 0; k < stop.max_iter; ++k) {
    Point2 next;
    try {
      next = map.raw(p);
    } catch (const SingularityError&) {
      out.terminated_by = Termination::singularity;
      return out;
    }
    out.points.push_back(next);
    if (escaped(next)) {
      out.terminated_by = Termination::escape;
      return out;
    }
    if (entered(next)) {
      out.terminated_by = Termination::quadrant_entry;
      return out;
    }
    if (stop.convergence_tol > 0 && distance(next, p) < stop.convergence_tol) {
      out.terminated_by = Termination::convergence;
      return out;
    }
    p = next;
  }
  out.terminated_by = Termination::max_iter;
  return out;
}

CompetitivenessReport check_competitive(const PlanarMap& map, const Rect& region, std::size_t samples,
                                        const Rect& window) {
  CompetitivenessReport rep;
  rep.competitive = true;
  rep.strongly = true;
  for (const Point2 p : sample_grid(region.clamped(window), samples)) {
    ++rep.samples;
    Matrix2 j;
    try {
      j = jacobian(map, p);
    } catch (const Error&) {
      ++rep.evaluation_failures;
      continue;
    }
    const bool weak = j.a11 >= 0 && j.a12 <= 0 && j.a21 <= 0 && j.a22 >= 0;
    const bool strict = j.a11 > 0 && j.a12 < 0 && j.a21 < 0 && j.a22 > 0;
    if (!weak && !rep.witness) rep.witness = SignWitness{p, j};
    if (!strict && !rep.strict_witness) rep.strict_witness = SignWitness{p, j};
    rep.competitive = rep.competitive && weak;
    rep.strongly = rep.strongly && strict;
  }
  if (rep.evaluation_failures == rep.samples) rep.competitive = rep.strongly = false;
  return rep;
}

std::string to_string(OCondition c) {
  switch (c) {
    case OCondition::o_plus: return "O+";
    case OCondition::o_minus: return "O-";
    case OCondition::inconclusive: return "inconclusive";
  }
  return "?";
}

OConditionReport check_o_condition(const PlanarMap& map, const Rect& region, std::size_t samples,
                                   const OConditionOptions& opts) {
  OConditionReport rep;
  const Rect box = region.clamped(opts.window);
  bool all_pos = true;
  bool all_neg = true;
  rep.min_det = kInf;
  rep.max_det = -kInf;
  for (const Point2 p : sample_grid(box, samples)) {
    ++rep.samples;
    double d = 0.0;
    try {
      d = jacobian(map, p).det();
    } catch (const Error&) {
      all_pos = all_neg = false;
      continue;
    }
    rep.min_det = std::min(rep.min_det, d);
    rep.max_det = std::max(rep.max_det, d);
    all_pos = all_pos && d > opts.det_tol;
    all_neg = all_neg && d < -opts.det_tol;
  }
  if (!all_pos && !all_neg) return rep;

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> ux(box.x_lo, box.x_hi);
  std::uniform_real_distribution<double> uy(box.y_lo, box.y_hi);
  for (std::size_t k = 0; k < opts.probe_pairs; ++k) {
    const Point2 p{ux(rng), uy(rng)};
    const Point2 q{ux(rng), uy(rng)};
    if (distance(p, q) <= opts.collision_tol) continue;
    ++rep.probe_pairs;
    try {
      if (distance(map.raw(p), map.raw(q)) < opts.collision_tol) {
        rep.collision = std::make_pair(p, q);
        return rep;
      }
    } catch (const Error&) {
      continue;
    }
  }
  rep.verdict = all_pos ? OCondition::o_plus : OCondition::o_minus;
  return rep;
}

JacobianAgreement verify_jacobian(const PlanarMap& map, const Rect& region, std::size_t samples,
                                  std::uint64_t seed, const Rect& window) {
  if (!map.has_exact_jacobian()) throw PreconditionError("map has no exact Jacobian to verify");
  const Rect box = region.clamped(window);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(box.x_lo, box.x_hi);
  std::uniform_real_distribution<double> uy(box.y_lo, box.y_hi);
  JacobianAgreement out;
  for (std::size_t attempts = 0; out.samples < samples && attempts < 100 * samples + 100; ++attempts) {
    const Point2 p{ux(rng), uy(rng)};
    if (!box.contains_interior(p)) continue;
    Matrix2 exact, fd;
    try {
      exact = map.exact_jacobian(p);
      fd = fd_jacobian(map, p);
    } catch (const SingularityError&) {
      continue;
    }
    ++out.samples;
    const double err = (exact - fd).max_abs() / std::max(1.0, exact.max_abs());
    if (err > out.worst_relative_error) {
      out.worst_relative_error = err;
      out.worst_point = p;
    }
  }
  return out;
}

}  // namespace compmap
