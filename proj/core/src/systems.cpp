#include "compmap/systems.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "compmap/errors.hpp"

namespace compmap {

namespace {

const Rect kQuadrant = Rect::first_quadrant();

double param(const Params& p, const char* name) {
  auto it = p.find(name);
  if (it == p.end()) throw ConstraintError(std::string("missing parameter '") + name + "'");
  return it->second;
}

void reject_unknown(ExampleId id, const Params& p, std::initializer_list<const char*> names) {
  for (const auto& [k, v] : p) {
    bool known = false;
    for (const char* n : names) known = known || k == n;
    if (!known) throw ConstraintError("unknown parameter '" + k + "' for " + to_string(id));
    if (!std::isfinite(v)) throw ConstraintError("parameter '" + k + "' must be finite");
  }
}

void require_positive(const Params& p, std::initializer_list<const char*> names) {
  for (const char* n : names) {
    if (!(param(p, n) > 0.0)) throw ConstraintError(std::string("requires ") + n + " > 0");
  }
}

bool close_rel(double a, double b, double tol = 1e-12) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

double rel_err(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

double sin_angle(Point2 a, Point2 b) {
  const double na = norm(a), nb = norm(b);
  if (na == 0.0 || nb == 0.0) return 1.0;
  return std::abs(cross(a, b)) / (na * nb);
}

// Leslie–Gower with constant set-off terms; h = 0 gives example 2.
PlanarMap leslie_gower(const std::string& name, const Params& p, double h1, double h2) {
  const double b1 = param(p, "b1"), b2 = param(p, "b2"), c1 = param(p, "c1"), c2 = param(p, "c2");
  auto fn = [=](Point2 q) {
    return Point2{checked_div(b1 * q.x, 1.0 + q.x + c1 * q.y) + h1, checked_div(b2 * q.y, 1.0 + q.y + c2 * q.x) + h2};
  };
  auto jac = [=](Point2 q) {
    const double d1 = 1.0 + q.x + c1 * q.y, d2 = 1.0 + q.y + c2 * q.x;
    const double s1 = checked_div(1.0, d1 * d1), s2 = checked_div(1.0, d2 * d2);
    return Matrix2{b1 * (1.0 + c1 * q.y) * s1, -b1 * c1 * q.x * s1, -b2 * c2 * q.y * s2, b2 * (1.0 + c2 * q.x) * s2};
  };
  return PlanarMap(name, fn, kQuadrant, p, jac);
}

// ------------------------------------------------------------ example 1

Fixture ex1_fixture(double a, double ybar) {
  Fixture f;
  f.point = {0.0, ybar};
  f.lambda = 1.0 / (a + ybar);
  f.mu = 1.0;
  f.v_lambda = Point2{a - 1.0 + ybar, ybar * (a + ybar)};
  f.v_mu = Point2{0.0, 1.0};
  f.note = "equilibrium on the y-axis";
  return f;
}

ExampleSystem build_ex1(Params p) {
  reject_unknown(ExampleId::ex1, p, {"a"});
  if (!p.count("a")) p["a"] = 2.0;
  const double a = param(p, "a");
  if (!(a > 1.0)) throw ConstraintError("ex1 requires a > 1");
  ExampleSystem s;
  s.id = ExampleId::ex1;
  s.params = p;
  s.map = PlanarMap(
      "ex1", [a](Point2 q) { return Point2{checked_div(q.x, a + q.y), checked_div(q.y, 1.0 + q.x)}; }, kQuadrant, p,
      [a](Point2 q) {
        const double u = checked_div(1.0, a + q.y), w = checked_div(1.0, 1.0 + q.x);
        return Matrix2{u, -q.x * u * u, -q.y * w * w, w};
      });
  for (double y : {0.0, 1.0, 2.0}) s.fixtures.push_back(ex1_fixture(a, y));
  Continuum c;
  c.description = "(0, ybar), ybar >= 0";
  c.s_lo = 0.0;
  c.s_hi = 2.0;
  c.point = [](double y) { return Point2{0.0, y}; };
  c.residual = [](Point2 q) { return std::abs(q.x); };
  c.fixture = [a](double y) { return ex1_fixture(a, y); };
  s.continuum = c;
  s.window = {0.0, 5.0, 0.0, 6.0};
  s.default_fp = {0.0, 1.0};
  s.mode = SideMode::limit_equilibrium;
  s.description = "x' = x/(a+y), y' = y/(1+x)";
  return s;
}

// ------------------------------------------------------------ example 2

Fixture ex2_fixture(double b1, double b2, double t) {
  Fixture f;
  f.point = {(b1 - 1.0) * (1.0 - t), (b2 - 1.0) * t};
  f.lambda = (1.0 - t) / b1 + t / b2;
  f.mu = 1.0;
  f.v_mu = Point2{-(1.0 - b1) / (1.0 - b2), 1.0};
  f.v_lambda = Point2{b2 * (1.0 - b1) * (1.0 - b1) * (1.0 - t), b1 * (1.0 - b2) * (1.0 - b2) * t};
  f.note = "member E_t of the equilibrium segment";
  return f;
}

ExampleSystem build_ex2(Params p) {
  reject_unknown(ExampleId::ex2, p, {"b1", "b2", "c1", "c2"});
  if (!p.count("b1")) p["b1"] = 2.0;
  if (!p.count("b2")) p["b2"] = 3.0;
  const double b1 = param(p, "b1"), b2 = param(p, "b2");
  if (!(b1 > 1.0) || !(b2 > 1.0)) throw ConstraintError("ex2 requires b1 > 1 and b2 > 1");
  if (!p.count("c1")) p["c1"] = (b1 - 1.0) / (b2 - 1.0);
  if (!p.count("c2")) p["c2"] = (b2 - 1.0) / (b1 - 1.0);
  require_positive(p, {"c1", "c2"});
  const double c1 = param(p, "c1"), c2 = param(p, "c2");
  if (!close_rel(c1 * (b2 - 1.0), b1 - 1.0)) throw ConstraintError("ex2 requires c1*(b2-1) = b1-1");
  if (!close_rel(c2 * (b1 - 1.0), b2 - 1.0)) throw ConstraintError("ex2 requires c2*(b1-1) = b2-1");
  ExampleSystem s;
  s.id = ExampleId::ex2;
  s.params = p;
  s.map = leslie_gower("ex2", p, 0.0, 0.0);
  for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) s.fixtures.push_back(ex2_fixture(b1, b2, t));
  Continuum c;
  c.description = "E_t = ((b1-1)(1-t), (b2-1)t), t in [0,1]";
  c.point = [b1, b2](double t) { return Point2{(b1 - 1.0) * (1.0 - t), (b2 - 1.0) * t}; };
  c.residual = [b1, b2](Point2 q) { return std::abs(q.x / (b1 - 1.0) + q.y / (b2 - 1.0) - 1.0); };
  c.fixture = [b1, b2](double t) { return ex2_fixture(b1, b2, t); };
  s.continuum = c;
  s.window = {0.0, 2.0, 0.0, 3.0};
  s.default_fp = c.point(0.5);
  s.mode = SideMode::limit_equilibrium;
  s.description = "x' = b1 x/(1+x+c1 y), y' = b2 y/(1+y+c2 x)";
  return s;
}

// ------------------------------------------------------------ example 3

Fixture ex3_fixture(double xbar, PointKind kind) {
  const double ybar = xbar / (xbar - 1.0);
  Fixture f;
  f.point = {xbar, ybar};
  f.kind = kind;
  f.lambda = 1.0 / (xbar * ybar);
  f.mu = 1.0;
  f.v_lambda = Point2{xbar, 1.0};
  f.note = kind == PointKind::fixed ? "fixed point of T^2 on x + y = xy" : "period-two point of T on x + y = xy";
  return f;
}

Continuum ex3_continuum(PointKind kind) {
  Continuum c;
  c.description = "hyperbola x + y = xy, parametrized by xbar";
  c.s_lo = 3.0;
  c.s_hi = 5.0;
  c.point = [](double x) { return Point2{x, x / (x - 1.0)}; };
  c.residual = [](Point2 q) { return std::abs(q.x + q.y - q.x * q.y); };
  c.fixture = [kind](double x) { return ex3_fixture(x, kind); };
  return c;
}

ExampleSystem build_ex3(ExampleId id, const Params& p) {
  reject_unknown(id, p, {});
  ExampleSystem s;
  s.id = id;
  s.params = p;
  if (id == ExampleId::ex3_T) {
    s.map = PlanarMap(
        "ex3_T", [](Point2 q) { return Point2{q.y, 1.0 + checked_div(q.x, q.y)}; }, kQuadrant, p,
        [](Point2 q) {
          const double u = checked_div(1.0, q.y);
          return Matrix2{0.0, 1.0, u, -q.x * u * u};
        });
    s.description = "x_{n+1} = 1 + x_{n-1}/x_n as T(x, y) = (y, 1 + x/y)";
  } else {
    s.map = PlanarMap(
        "ex3_T2",
        [](Point2 q) { return Point2{1.0 + checked_div(q.x, q.y), 1.0 + checked_div(q.y * q.y, q.x + q.y)}; },
        kQuadrant, p,
        [](Point2 q) {
          const double u = checked_div(1.0, q.y), s2 = q.x + q.y;
          const double w = checked_div(1.0, s2 * s2);
          return Matrix2{u, -q.x * u * u, -q.y * q.y * w, (q.y * q.y + 2.0 * q.x * q.y) * w};
        });
    s.description = "T^2(x, y) = (1 + x/y, 1 + y^2/(x+y))";
  }
  const PointKind kind = id == ExampleId::ex3_T ? PointKind::period_two : PointKind::fixed;
  for (double x : {3.0, 4.0, 5.0}) s.fixtures.push_back(ex3_fixture(x, kind));
  s.continuum = ex3_continuum(kind);
  s.window = {0.5, 8.0, 0.5, 8.0};
  s.default_fp = {4.0, 4.0 / 3.0};
  s.mode = SideMode::limit_equilibrium;
  return s;
}

// ------------------------------------------------------------ example 4

ExampleSystem build_ex4(Params p) {
  reject_unknown(ExampleId::ex4, p, {"B1", "gamma2", "alpha2", "beta1"});
  if (!p.count("B1")) p["B1"] = 1.0;
  if (!p.count("gamma2")) p["gamma2"] = 1.0;
  if (!p.count("alpha2")) p["alpha2"] = 1.0;
  require_positive(p, {"B1", "gamma2", "alpha2"});
  const double B1 = param(p, "B1"), g2 = param(p, "gamma2"), a2 = param(p, "alpha2");
  if (!p.count("beta1")) p["beta1"] = B1 * g2 + 2.0 * std::sqrt(B1 * a2);
  require_positive(p, {"beta1"});
  const double b1 = param(p, "beta1");
  if (!close_rel(b1 - B1 * g2, 2.0 * std::sqrt(B1 * a2))) {
    throw ConstraintError("ex4 requires beta1 - B1*gamma2 = 2*sqrt(B1*alpha2)");
  }
  ExampleSystem s;
  s.id = ExampleId::ex4;
  s.params = p;
  s.map = PlanarMap(
      "ex4",
      [=](Point2 q) { return Point2{checked_div(b1 * q.x, B1 * q.x + q.y), checked_div(a2 + g2 * q.y, q.x)}; },
      kQuadrant, p,
      [=](Point2 q) {
        const double d = B1 * q.x + q.y;
        const double s1 = checked_div(b1, d * d), u = checked_div(1.0, q.x);
        return Matrix2{q.y * s1, -q.x * s1, -(a2 + g2 * q.y) * u * u, g2 * u};
      });
  Fixture f;
  const double sum = b1 + B1 * g2, diff = b1 - B1 * g2;
  f.point = {sum / (2.0 * B1), diff / 2.0};
  f.lambda = -diff * diff / (2.0 * b1 * sum);
  f.mu = 1.0;
  f.v_mu = Point2{-1.0, B1};
  f.v_lambda = Point2{sum * sum, 2.0 * b1 * B1 * diff};
  f.taylor2 = Point2{0.0, 2.0 * B1 * B1 / ((1.0 + B1 * B1) * sum)};
  f.note = "non-hyperbolic equilibrium E";
  s.fixtures.push_back(f);
  s.window = {0.0, 6.0, 0.0, 4.0};
  s.default_fp = f.point;
  s.mode = SideMode::quadrant_escape;
  s.description = "x' = beta1 x/(B1 x + y), y' = (alpha2 + gamma2 y)/x";
  return s;
}

// ------------------------------------------------------------ example 5

struct Ex5Coeffs {
  double b1, b2, c1, c2, h1, h2;
};

Ex5Coeffs ex5_coeffs(const Params& p) {
  return {param(p, "b1"), param(p, "b2"), param(p, "c1"), param(p, "c2"), param(p, "h1"), param(p, "h2")};
}

double ex5_y1(const Ex5Coeffs& k, double x) {
  return -(x * x + (1.0 - k.b1 - k.h1) * x - k.h1) / (k.c1 * (x - k.h1));
}

double ex5_y2(const Ex5Coeffs& k, double x) {
  const double bb = k.c2 * x + 1.0 - k.b2 - k.h2;
  const double cc = -(k.c2 * k.h2 * x + k.h2);
  const double disc = bb * bb - 4.0 * cc;
  if (disc < 0.0) return std::nan("");
  const double sq = std::sqrt(disc);
  // larger root without cancellation
  return bb <= 0.0 ? (-bb + sq) / 2.0 : (2.0 * cc) / (-bb - sq);
}

double ex5_gap(const Ex5Coeffs& k, double x) { return ex5_y1(k, x) - ex5_y2(k, x); }

double ex5_x_lo(const Ex5Coeffs& k) { return k.h1 + 1e-9 * std::max(1.0, k.h1); }
double ex5_x_hi(const Ex5Coeffs& k) { return k.b1 + k.h1 + 1.0; }

template <class F>
double bisect_root(F f, double a, double b) {
  double fa = f(a);
  for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

template <class F>
double golden_min(F f, double a, double b, int iters = 120) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < iters; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

struct RootScan {
  std::vector<double> transversal;
  std::vector<double> touching;
};

RootScan scan_ex5(const Ex5Coeffs& k, std::size_t n = 4000) {
  RootScan out;
  const double lo = ex5_x_lo(k), hi = ex5_x_hi(k);
  std::vector<double> xs(n + 1), gs(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
    gs[i] = ex5_gap(k, xs[i]);
  }
  auto g = [&](double x) { return ex5_gap(k, x); };
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(gs[i]) || !std::isfinite(gs[i + 1])) continue;
    if (gs[i] == 0.0) out.transversal.push_back(xs[i]);
    else if ((gs[i] < 0.0) != (gs[i + 1] < 0.0)) out.transversal.push_back(bisect_root(g, xs[i], xs[i + 1]));
  }
  for (std::size_t i = 1; i < n; ++i) {
    const double a = std::abs(gs[i - 1]), b = std::abs(gs[i]), c = std::abs(gs[i + 1]);
    if (!(b <= a && b <= c)) continue;
    if ((gs[i - 1] < 0.0) != (gs[i] < 0.0) || (gs[i] < 0.0) != (gs[i + 1] < 0.0)) continue;
    const double x = golden_min([&](double t) { return std::abs(g(t)); }, xs[i - 1], xs[i + 1]);
    if (std::abs(g(x)) < 1e-8) out.touching.push_back(x);
  }
  return out;
}

Point2 ex5_point(const Ex5Coeffs& k, double x) { return {x, ex5_y2(k, x)}; }

double gap_slope(const Ex5Coeffs& k, double x) {
  const double d = 1e-5 * std::max(1.0, std::abs(x));
  return (ex5_gap(k, x + d) - ex5_gap(k, x - d)) / (2.0 * d);
}

ExampleSystem build_ex5(Params p) {
  reject_unknown(ExampleId::ex5, p, {"b1", "b2", "c1", "c2", "h1", "h2"});
  const Params line = ex5_search_line();
  for (const auto& [k, v] : line) {
    if (!p.count(k)) p[k] = v;
  }
  require_positive(p, {"b1", "b2", "c1", "c2"});
  if (!(param(p, "h2") >= 0.0)) throw ConstraintError("ex5 requires h2 >= 0");
  if (!p.count("h1")) {
    const bool on_line = std::all_of(line.begin(), line.end(), [&](const auto& kv) { return p.at(kv.first) == kv.second; });
    p["h1"] = on_line ? default_params(ExampleId::ex5).at("h1") : locate_ex5_tangency(p).h1;
  }
  if (!(param(p, "h1") >= 0.0)) throw ConstraintError("ex5 requires h1 >= 0");
  const Ex5Coeffs k = ex5_coeffs(p);
  ExampleSystem s;
  s.id = ExampleId::ex5;
  s.params = p;
  s.map = leslie_gower("ex5", p, k.h1, k.h2);
  std::optional<Point2> nonhyperbolic, saddle;
  for (Point2 q : ex5_equilibria(p)) {
    const FixedPointRecord r = describe_point(s.map, q);
    Fixture f;
    f.point = q;
    f.lambda = r.eigen.lambda;
    f.mu = r.eigen.mu;
    if (r.eigen.real_distinct) {
      f.v_lambda = r.eigen.v_lambda;
      f.v_mu = r.eigen.v_mu;
    }
    f.note = "numerically located equilibrium (" + to_string(r.classification) + ")";
    s.fixtures.push_back(f);
    if (r.classification == Stability::nonhyperbolic && !nonhyperbolic) nonhyperbolic = q;
    if (r.classification == Stability::saddle && !saddle) saddle = q;
  }
  if (s.fixtures.empty()) throw ConstraintError("ex5 parameters admit no equilibrium in the first quadrant");
  s.default_fp = nonhyperbolic ? *nonhyperbolic : saddle ? *saddle : s.fixtures.front().point;
  s.window = {0.0, 3.0, 0.0, 3.0};
  s.mode = SideMode::quadrant_escape;
  s.description = "x' = b1 x/(1+x+c1 y) + h1, y' = b2 y/(1+y+c2 x) + h2";
  return s;
}

}  // namespace

std::string to_string(ExampleId id) {
  switch (id) {
    case ExampleId::ex1: return "ex1";
    case ExampleId::ex2: return "ex2";
    case ExampleId::ex3_T: return "ex3_T";
    case ExampleId::ex3_T2: return "ex3_T2";
    case ExampleId::ex4: return "ex4";
    case ExampleId::ex5: return "ex5";
  }
  return "?";
}

std::optional<ExampleId> parse_example_id(const std::string& s) {
  for (ExampleId id : all_examples()) {
    if (to_string(id) == s) return id;
  }
  return std::nullopt;
}

std::vector<ExampleId> all_examples() {
  return {ExampleId::ex1, ExampleId::ex2, ExampleId::ex3_T, ExampleId::ex3_T2, ExampleId::ex4, ExampleId::ex5};
}

Params default_params(ExampleId id) {
  switch (id) {
    case ExampleId::ex1: return {{"a", 2.0}};
    case ExampleId::ex2: return {{"b1", 2.0}, {"b2", 3.0}, {"c1", 0.5}, {"c2", 2.0}};
    case ExampleId::ex3_T:
    case ExampleId::ex3_T2: return {};
    case ExampleId::ex4: return {{"B1", 1.0}, {"gamma2", 1.0}, {"alpha2", 1.0}, {"beta1", 3.0}};
    case ExampleId::ex5: {
      static const double h1 = locate_ex5_tangency(ex5_search_line()).h1;
      Params p = ex5_search_line();
      p["h1"] = h1;
      return p;
    }
  }
  return {};
}

ExampleSystem make_example(ExampleId id, const Params& overrides) {
  switch (id) {
    case ExampleId::ex1: return build_ex1(overrides);
    case ExampleId::ex2: return build_ex2(overrides);
    case ExampleId::ex3_T:
    case ExampleId::ex3_T2: return build_ex3(id, overrides);
    case ExampleId::ex4: return build_ex4(overrides);
    case ExampleId::ex5: return build_ex5(overrides);
  }
  throw PreconditionError("unknown example id");
}

std::vector<SweepRecord> sweep_continuum(const ExampleSystem& sys, std::size_t n) {
  if (!sys.continuum) throw PreconditionError(to_string(sys.id) + " declares no continuum");
  return sweep_continuum(sys, n, sys.continuum->s_lo, sys.continuum->s_hi);
}

std::vector<SweepRecord> sweep_continuum(const ExampleSystem& sys, std::size_t n, double s_lo, double s_hi) {
  if (!sys.continuum) throw PreconditionError(to_string(sys.id) + " declares no continuum");
  if (n == 0) return {};
  const Continuum& c = *sys.continuum;
  std::vector<SweepRecord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    SweepRecord r;
    r.s = n == 1 ? s_lo : s_lo + (s_hi - s_lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    r.expected = c.fixture(r.s);
    r.record = describe_point(sys.map, r.expected.point, r.expected.kind);
    r.residual = r.record.residual;
    const EigenData& e = r.record.eigen;
    r.eigen_error = std::max(rel_err(e.lambda, r.expected.lambda), rel_err(e.mu, r.expected.mu));
    if (!e.real_distinct) r.eigen_error = std::max(r.eigen_error, e.complex_pair ? 1.0 : 0.0);
    if (e.real_distinct) {
      if (r.expected.v_lambda) r.vector_error = std::max(r.vector_error, sin_angle(e.v_lambda, *r.expected.v_lambda));
      if (r.expected.v_mu) r.vector_error = std::max(r.vector_error, sin_angle(e.v_mu, *r.expected.v_mu));
    }
    r.verified = r.residual < 1e-10 && r.eigen_error < 1e-8 && r.vector_error < 1e-8;
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------- example 5

Params ex5_search_line() { return {{"b1", 3.0}, {"b2", 3.0}, {"c1", 2.0}, {"c2", 2.0}, {"h2", 0.1}}; }

Params ex5_saddle_params() {
  Params p = ex5_search_line();
  p["h1"] = 0.1;
  return p;
}

CriticalCurves ex5_critical_curves(const Params& p, double x_lo, double x_hi, std::size_t n) {
  const Ex5Coeffs k = ex5_coeffs(p);
  CriticalCurves cc;
  cc.c1_residual = [k](Point2 q) {
    return q.x * q.x + k.c1 * q.x * q.y + (1.0 - k.b1 - k.h1) * q.x - k.c1 * k.h1 * q.y - k.h1;
  };
  cc.c2_residual = [k](Point2 q) {
    return q.y * q.y + k.c2 * q.x * q.y + (1.0 - k.b2 - k.h2) * q.y - k.c2 * k.h2 * q.x - k.h2;
  };
  cc.y1 = [k](double x) { return x > k.h1 ? ex5_y1(k, x) : std::nan(""); };
  cc.y2 = [k](double x) { return ex5_y2(k, x); };
  for (std::size_t i = 0; i < n; ++i) {
    const double x = n == 1 ? x_lo : x_lo + (x_hi - x_lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    const double y1 = cc.y1(x), y2 = cc.y2(x);
    if (std::isfinite(y1) && y1 >= 0.0) cc.graph1.push_back({x, y1});
    if (std::isfinite(y2) && y2 >= 0.0) cc.graph2.push_back({x, y2});
  }
  return cc;
}

std::pair<double, double> ex5_critical_slopes(const Params& p, Point2 q) {
  const Ex5Coeffs k = ex5_coeffs(p);
  const double f1x = 2.0 * q.x + k.c1 * q.y + 1.0 - k.b1 - k.h1;
  const double f1y = k.c1 * q.x - k.c1 * k.h1;
  const double f2x = k.c2 * q.y - k.c2 * k.h2;
  const double f2y = 2.0 * q.y + k.c2 * q.x + 1.0 - k.b2 - k.h2;
  return {-checked_div(f1x, f1y), -checked_div(f2x, f2y)};
}

std::vector<Point2> ex5_equilibria(const Params& p) {
  const Ex5Coeffs k = ex5_coeffs(p);
  const RootScan scan = scan_ex5(k);
  std::vector<double> xs = scan.transversal;
  for (double x : scan.touching) {
    const bool dup = std::any_of(xs.begin(), xs.end(), [&](double t) { return std::abs(t - x) < 1e-6; });
    if (!dup) xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end());
  std::vector<Point2> out;
  for (double x : xs) {
    const Point2 q = ex5_point(k, x);
    if (q.finite() && q.y >= 0.0) out.push_back(q);
  }
  return out;
}

Ex5Tangency locate_ex5_tangency(const Params& base, double h1_lo, double h1_hi) {
  if (!(h1_lo < h1_hi)) throw PreconditionError("tangency search needs h1_lo < h1_hi");
  auto with_h1 = [&](double h1) {
    Params q = base;
    q["h1"] = h1;
    return ex5_coeffs(q);
  };
  const RootScan lo = scan_ex5(with_h1(h1_lo));
  const RootScan hi = scan_ex5(with_h1(h1_hi));
  if (lo.transversal.size() != 3 || hi.transversal.size() != 1 || !lo.touching.empty() || !hi.touching.empty()) {
    throw ConstraintError("ex5 tangency search requires three equilibria at h1_lo and one at h1_hi");
  }
  const auto& r = lo.transversal;
  const double survivor = hi.transversal.front();
  const bool left_pair = std::abs(survivor - r[2]) < std::abs(survivor - r[0]);
  const double xa = left_pair ? r[0] : r[1];
  const double xb = left_pair ? r[1] : r[2];
  const double sign = ex5_gap(with_h1(h1_lo), 0.5 * (xa + xb)) < 0.0 ? -1.0 : 1.0;

  // Peak of sign*gap over [xa, xb]: positive while the pair exists.
  auto peak = [&](double h1, double* arg) {
    const Ex5Coeffs k = with_h1(h1);
    const double a = std::max(xa, ex5_x_lo(k));
    const std::size_t n = 400;
    double best = -kInf, bx = a;
    for (std::size_t i = 0; i <= n; ++i) {
      const double x = a + (xb - a) * static_cast<double>(i) / static_cast<double>(n);
      const double v = sign * ex5_gap(k, x);
      if (v > best) {
        best = v;
        bx = x;
      }
    }
    const double step = (xb - a) / static_cast<double>(n);
    const double x = golden_min([&](double t) { return -sign * ex5_gap(k, t); }, std::max(a, bx - step),
                                std::min(xb, bx + step));
    if (arg) *arg = x;
    return std::max(best, sign * ex5_gap(k, x));
  };

  double a = h1_lo, b = h1_hi;
  for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, b); ++it) {
    const double m = 0.5 * (a + b);
    if (peak(m, nullptr) > 0.0) a = m;
    else b = m;
  }
  Ex5Tangency t;
  t.h1 = 0.5 * (a + b);
  const Ex5Coeffs k = with_h1(t.h1);
  double x0 = 0.0;
  peak(t.h1, &x0);
  // the touching point is the critical point of the gap
  const double w = 1e-3 * std::max(1.0, std::abs(x0));
  double xl = x0 - w, xr = x0 + w;
  if ((gap_slope(k, xl) < 0.0) != (gap_slope(k, xr) < 0.0)) x0 = bisect_root([&](double x) { return gap_slope(k, x); }, xl, xr);
  t.nonhyperbolic = ex5_point(k, x0);
  const RootScan at = scan_ex5(k);
  double far = survivor, best = -1.0;
  for (double x : at.transversal) {
    if (std::abs(x - x0) > best) {
      best = std::abs(x - x0);
      far = x;
    }
  }
  t.stable = ex5_point(k, far);
  return t;
}

}  // namespace compmap
