#include "compmap/classification.hpp"

#include <algorithm>
#include <cmath>

#include "compmap/errors.hpp"

namespace compmap {

bool is_subsolution(const PlanarMap& map, Point2 p) { return le_se(evaluate(map, p), p); }

bool is_supersolution(const PlanarMap& map, Point2 p) { return le_se(p, evaluate(map, p)); }

namespace {

Point2 orient(Point2 v) {
  const double n = norm(v);
  if (!(n > 0) || !v.finite()) throw PreconditionError("Taylor direction must be a nonzero finite vector");
  v = (1.0 / n) * v;
  if (v.x * v.y < 0) return v.x > 0 ? -v : v;
  return canonical_direction(v);
}

double max_component(Point2 p) { return std::max(std::abs(p.x), std::abs(p.y)); }

}  // namespace

TaylorRay taylor_along_eigenvector(const PlanarMap& map, Point2 fp, Point2 v, std::size_t degree, double h) {
  if (degree < 2 || degree > 4) throw PreconditionError("Taylor degree must be between 2 and 4");
  if (!(h > 0)) throw PreconditionError("Taylor step must be positive");
  TaylorRay ray;
  ray.center = fp;
  ray.direction = orient(v);
  ray.degree = degree;
  const Point2 u = ray.direction;

  const Point2 ju = jacobian(map, fp) * u;
  ray.eigenvalue = dot(ju, u);
  ray.eigen_residual = distance(ju, u);
  ray.eigen_warning = ray.eigen_residual > kNonhyperbolicTol;

  auto phi = [&](double t) { return map.raw(fp + t * u) - fp - t * u; };
  auto stencil = [&](std::size_t j, double s) -> Point2 {
    switch (j) {
      case 2: return (1.0 / (s * s)) * (phi(s) - 2.0 * phi(0) + phi(-s));
      case 3: return (1.0 / (2 * s * s * s)) * (phi(2 * s) - 2.0 * phi(s) + 2.0 * phi(-s) - phi(-2 * s));
      default:
        return (1.0 / (s * s * s * s)) * (phi(2 * s) - 4.0 * phi(s) + 6.0 * phi(0) - 4.0 * phi(-s) + phi(-2 * s));
    }
  };
  double factorial = 1.0;
  for (std::size_t j = 2; j <= degree; ++j) {
    factorial *= static_cast<double>(j);
    const double s = h * static_cast<double>(1u << (j - 2));
    const Point2 coarse = stencil(j, s);
    const Point2 fine = stencil(j, s / 2);
    const Point2 extrapolated = (1.0 / 3.0) * (4.0 * fine - coarse);
    const Point2 coef = (1.0 / factorial) * extrapolated;
    const double disagreement = max_component(extrapolated - fine) / factorial;
    if (!coef.finite()) throw SingularityError("non-finite Taylor coefficient");
    ray.coeffs.push_back(coef);
    ray.max_disagreement = std::max(ray.max_disagreement, disagreement);
    if (disagreement > 1e-4 * std::max(1.0, max_component(coef))) ray.ill_conditioned = true;
  }
  return ray;
}

std::optional<std::size_t> first_nonzero_index(const TaylorRay& ray, double tol) {
  for (std::size_t k = 0; k < ray.coeffs.size(); ++k) {
    if (max_component(ray.coeffs[k]) > tol) return k + 2;
  }
  return std::nullopt;
}

std::string to_string(LocalCase c) {
  switch (c) {
    case LocalCase::hyperbolic_expanding: return "hyperbolic_expanding";
    case LocalCase::hyperbolic_contracting: return "hyperbolic_contracting";
    case LocalCase::odd_se_negative: return "odd_se_negative";
    case LocalCase::odd_se_positive: return "odd_se_positive";
    case LocalCase::even_se_negative: return "even_se_negative";
    case LocalCase::even_se_positive: return "even_se_positive";
    case LocalCase::unclassified: return "unclassified";
  }
  return "?";
}

LocalVerdict classify_hyperbolic_ray(double mu, Point2 v) {
  if (!(v.x * v.y < 0)) throw PreconditionError("eigenvector components must have opposite signs");
  if (!std::isfinite(mu) || std::abs(mu - 1) <= kNonhyperbolicTol) {
    throw PreconditionError("eigenvalue within 1e-7 of 1: use the non-hyperbolic classification");
  }
  LocalVerdict out;
  if (mu > 1) {
    out.case_id = LocalCase::hyperbolic_expanding;
    out.detail = "mu > 1: subsolutions in int Q2, supersolutions in int Q4; orbits leave I";
  } else {
    out.case_id = LocalCase::hyperbolic_contracting;
    out.detail = "mu < 1: supersolutions in int Q2, subsolutions in int Q4; orbits in I converge";
  }
  return out;
}

LocalVerdict classify_nonhyperbolic(const TaylorRay& ray, double tol) {
  LocalVerdict out;
  const Point2 v = ray.direction;
  if (!(v.x * v.y < 0)) {
    out.detail = "eigenvector components do not have opposite signs";
    return out;
  }
  // Coefficients are defined for v <=_se 0; flipping v negates odd orders.
  const double flip = v.x > 0 ? -1.0 : 1.0;
  auto coef = [&](std::size_t j) {
    const Point2 c = ray.coefficient(j);
    return (j % 2 == 1) ? flip * c : c;
  };
  out.ell = first_nonzero_index(ray, tol);
  if (!out.ell) {
    out.detail = "all coefficients up to degree " + std::to_string(ray.degree) + " vanish";
    return out;
  }
  const std::size_t ell = *out.ell;
  auto snap = [&](double a) { return std::abs(a) <= tol ? 0.0 : a; };
  const double c = snap(coef(ell).x);
  const double d = snap(coef(ell).y);
  bool first_affine = true, second_affine = true;
  for (std::size_t j = 2; j <= ray.degree; ++j) {
    first_affine = first_affine && std::abs(coef(j).x) <= tol;
    second_affine = second_affine && std::abs(coef(j).y) <= tol;
  }
  out.condition_a = c * d < 0;
  out.condition_b = c != 0 && second_affine;
  out.condition_c = d != 0 && first_affine;
  if (!(out.condition_a || out.condition_b || out.condition_c)) {
    out.detail = "none of conditions (a), (b), (c) holds";
    return out;
  }
  const bool se_negative = c <= 0 && d >= 0;
  const bool odd = ell % 2 == 1;
  if (odd) {
    out.case_id = se_negative ? LocalCase::odd_se_negative : LocalCase::odd_se_positive;
  } else {
    out.case_id = se_negative ? LocalCase::even_se_negative : LocalCase::even_se_positive;
  }
  std::string held;
  for (auto [flag, name] : {std::pair{out.condition_a, "a"}, {out.condition_b, "b"}, {out.condition_c, "c"}}) {
    if (flag) held += held.empty() ? name : std::string(",") + name;
  }
  out.detail = "l=" + std::to_string(ell) + " (c,d)=(" + format_real(c) + ", " + format_real(d) + ") conditions " + held;
  return out;
}

std::optional<std::pair<bool, bool>> expected_solution_types(LocalCase c) {
  switch (c) {
    case LocalCase::hyperbolic_expanding:
    case LocalCase::odd_se_negative: return std::pair{true, false};
    case LocalCase::hyperbolic_contracting:
    case LocalCase::odd_se_positive: return std::pair{false, true};
    case LocalCase::even_se_negative: return std::pair{true, true};
    case LocalCase::even_se_positive: return std::pair{false, false};
    case LocalCase::unclassified: return std::nullopt;
  }
  return std::nullopt;
}

std::optional<Rect> order_interval(const PlanarMap& map, Point2 fp, Point2 v, LocalCase c) {
  const auto types = expected_solution_types(c);
  if (!types) return std::nullopt;
  if (!(v.x < 0 && v.y > 0)) throw PreconditionError("order interval requires v <=_se (0,0)");
  v = (1.0 / norm(v)) * v;
  auto holds = [&](double t, bool sub) {
    const Point2 p = fp + t * v;
    if (!map.domain().contains(p)) return false;
    Point2 q;
    try {
      q = map.raw(p);
    } catch (const Error&) {
      return false;
    }
    const double slack = 1e-12 * std::max(1.0, norm(p));
    return sub ? (q.x <= p.x + slack && q.y >= p.y - slack) : (p.x <= q.x + slack && p.y >= q.y - slack);
  };
  auto pick = [&](double sign, bool sub) {
    double best = 0.0;
    for (double t : {1e-3, 1e-2, 1e-1}) {
      if (!holds(sign * t, sub)) break;
      best = t;
    }
    return sign * best;
  };
  const double t0 = pick(1.0, types->first);
  const double t1 = pick(-1.0, types->second);
  if (t0 == 0.0 && t1 == 0.0) return std::nullopt;
  const Point2 a = fp + t0 * v;
  const Point2 b = fp + t1 * v;
  return Rect{a.x, b.x, b.y, a.y};
}

std::optional<LocalAnalysis> analyze_local(const PlanarMap& map, const FixedPointRecord& fp, double tol) {
  const EigenData& e = fp.eigen;
  if (!e.real_distinct) return std::nullopt;
  for (auto [ev, vec] : {std::pair{e.mu, e.v_mu}, std::pair{e.lambda, e.v_lambda}}) {
    if (!(vec.x * vec.y < 0) || std::abs(vec.x) < 1e-12 || std::abs(vec.y) < 1e-12) continue;
    LocalAnalysis out;
    out.eigenvalue = ev;
    out.direction = orient(vec);
    if (std::abs(ev - 1) <= kNonhyperbolicTol) {
      out.ray = taylor_along_eigenvector(map, fp.location, out.direction);
      out.verdict = classify_nonhyperbolic(*out.ray, tol);
    } else if (std::abs(ev + 1) <= kNonhyperbolicTol) {
      out.verdict.detail = "eigenvalue -1 along the opposite-sign eigenvector";
    } else {
      out.verdict = classify_hyperbolic_ray(ev, out.direction);
    }
    return out;
  }
  return std::nullopt;
}

}  // namespace compmap
