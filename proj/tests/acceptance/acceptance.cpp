// Acceptance checks. One PASS/FAIL line per criterion; exit status is the
// number of failures.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "compmap/basins.hpp"
#include "compmap/classification.hpp"
#include "compmap/curves.hpp"
#include "compmap/errors.hpp"
#include "compmap/expr.hpp"
#include "compmap/systems.hpp"
#include "oracles.hpp"

using namespace compmap;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail = what;
      pass = false;
    }
  }
};

std::string fmt(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

double rel_err(double got, double want) { return std::abs(got - want) / std::max(1e-300, std::abs(want)); }

// Eigenvalue mismatch relative to the closed form, with an absolute floor
// for closed forms equal to zero.
double eig_err(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

oracle::P as_oracle(Point2 p) { return {p.x, p.y}; }

// ---------------------------------------------------------------- 1
struct Closed {
  Point2 point;
  PointKind kind;
  double lambda, mu;
  Point2 v_lambda, v_mu;
};

Outcome eigen_fixtures() {
  Outcome out;
  std::vector<std::pair<ExampleId, Closed>> cases;
  const double a = 2.0;
  for (double yb : {0.0, 1.0, 2.0}) {
    cases.push_back({ExampleId::ex1, {{0, yb}, PointKind::fixed, 1 / (a + yb), 1.0, {a - 1 + yb, yb * (a + yb)}, {0, 1}}});
  }
  const double b1 = 2, b2 = 3;
  for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    cases.push_back({ExampleId::ex2,
                     {{(1 - t) * (b1 - 1), t * (b2 - 1)},
                      PointKind::fixed,
                      (1 - t) / b1 + t / b2,
                      1.0,
                      {b2 * (1 - b1) * (1 - b1) * (1 - t), b1 * (1 - b2) * (1 - b2) * t},
                      {-(1 - b1) / (1 - b2), 1}}});
  }
  for (double xb : {3.0, 4.0, 5.0}) {
    const double yb = xb / (xb - 1);
    cases.push_back({ExampleId::ex3_T2,
                     {{xb, yb}, PointKind::fixed, 1 / (xb * yb), 1.0, {xb, 1}, {(xb - 1) * (xb - 1), -1}}});
  }
  {
    const double B1 = 1, g2 = 1, beta1 = 3;
    const double sum = beta1 + B1 * g2, diff = beta1 - B1 * g2;
    cases.push_back({ExampleId::ex4,
                     {{sum / (2 * B1), diff / 2},
                      PointKind::fixed,
                      -diff * diff / (2 * beta1 * sum),
                      1.0,
                      {sum * sum, 2 * beta1 * B1 * diff},
                      {-1, B1}}});
  }
  double worst_eig = 0, worst_vec = 0;
  for (const auto& [id, c] : cases) {
    const ExampleSystem sys = make_example(id);
    const FixedPointRecord r = describe_point(sys.map, c.point, c.kind);
    out.require(r.residual < 1e-12, to_string(id) + " closed-form point is not fixed");
    const EigenData& e = r.eigen;
    out.require(e.real_distinct, to_string(id) + " eigenvalues not real distinct");
    const double de = std::max(eig_err(e.lambda, c.lambda), eig_err(e.mu, c.mu));
    const double dv = std::max(oracle::sin_angle(e.v_lambda.x, e.v_lambda.y, c.v_lambda.x, c.v_lambda.y),
                               oracle::sin_angle(e.v_mu.x, e.v_mu.y, c.v_mu.x, c.v_mu.y));
    worst_eig = std::max(worst_eig, de);
    worst_vec = std::max(worst_vec, dv);
    out.require(de < 1e-8, to_string(id) + " eigenvalue mismatch " + fmt(de));
    out.require(dv < 1e-8, to_string(id) + " eigenvector mismatch " + fmt(dv));
  }
  if (out.pass) {
    out.detail = std::to_string(cases.size()) + " points, max eigenvalue err " + fmt(worst_eig) +
                 ", max eigenvector sin " + fmt(worst_vec);
  }
  return out;
}

// ---------------------------------------------------------------- 2
Outcome local_classification() {
  Outcome out;
  const ExampleSystem sys = make_example(ExampleId::ex4);
  const Point2 E{2, 1};
  const FixedPointRecord rec = describe_point(sys.map, sys.fixtures.front().point);
  out.require(distance(rec.location, E) < 1e-12 && rec.residual < 1e-12, "fixture is not the fixed point (2, 1)");
  const auto la = analyze_local(sys.map, rec);
  if (!la || !la->ray) {
    out.require(false, "no opposite-sign unit eigenvector found");
    return out;
  }
  const Point2 cd = la->ray->coefficient(2);
  out.require(la->verdict.ell && *la->verdict.ell == 2, "l != 2");
  out.require(std::abs(cd.x) < 1e-6 && std::abs(cd.y - 0.25) < 1e-6, "(c2, d2) = (" + fmt(cd.x) + ", " + fmt(cd.y) + ")");
  out.require(la->verdict.case_id == LocalCase::even_se_negative, "verdict " + to_string(la->verdict.case_id));

  const auto box = order_interval(sys.map, rec.location, la->direction, la->verdict.case_id);
  if (!box) {
    out.require(false, "no order interval");
    return out;
  }
  const oracle::Map f = oracle::ex4(1, 1, 1, 3);
  std::mt19937_64 rng(2);
  std::size_t converged = 0, exited = 0;
  for (int i = 0; i < 50; ++i) {
    // Q4(E) part of the interval: x >= E.x, y <= E.y.
    oracle::P p{oracle::uniform(rng, E.x, box->x_hi), oracle::uniform(rng, box->y_lo, E.y)};
    for (std::size_t n = 0; n < 10000000; ++n) {
      p = f(p);
      if (std::hypot(p.x - E.x, p.y - E.y) < 1e-5) {
        ++converged;
        break;
      }
    }
  }
  for (int i = 0; i < 50; ++i) {
    oracle::P p{oracle::uniform(rng, box->x_lo, E.x), oracle::uniform(rng, E.y, box->y_hi)};
    if (!(p.x < E.x && p.y > E.y)) continue;
    for (std::size_t n = 0; n < 10000000; ++n) {
      p = f(p);
      if (!box->contains({p.x, p.y})) {
        ++exited;
        break;
      }
    }
  }
  out.require(converged == 50, std::to_string(converged) + "/50 Q4 starts converged");
  out.require(exited == 50, std::to_string(exited) + "/50 Q2 starts left the interval");
  if (out.pass) {
    out.detail = "l=2, (c2,d2)=(" + fmt(cd.x, 2) + ", " + fmt(cd.y, 10) + "), " + to_string(la->verdict.case_id) +
                 ", interval [" + fmt(box->x_lo) + "," + fmt(box->x_hi) + "]x[" + fmt(box->y_lo) + "," +
                 fmt(box->y_hi) + "], 50/50 converged, 50/50 exited";
  }
  return out;
}

// ---------------------------------------------------------------- 3
Outcome separatrix_oracle() {
  Outcome out;
  const ExampleSystem sys = make_example(ExampleId::ex1);
  const Rect window{0, 5, 0, 6};
  StableCurveOptions o;
  o.mode = SideMode::limit_equilibrium;
  std::vector<double> columns;
  for (int k = 0; k < 64; ++k) columns.push_back(5.0 * (k + 0.5) / 64.0);
  o.column_x = columns;
  const StableCurveReport rep = trace_stable_curve(sys.map, describe_point(sys.map, {0, 1}), window, o);
  const double step = 6.0 / 512.0;
  const double tol = 2 * o.curve_tol + step;
  double worst = 0;
  std::size_t with_boundary = 0;
  for (double x : columns) {
    const auto bracket = oracle::ex1_boundary(2.0, 1.0, x, 0.0, 6.0, 513);
    const auto vertex = std::find_if(rep.curve.vertices.begin(), rep.curve.vertices.end(),
                                     [&](Point2 v) { return v.x == x; });
    const bool traced = vertex != rep.curve.vertices.end();
    if (!bracket) {
      out.require(!traced || vertex->y > 6.0 - step, "column " + fmt(x) + " traced but no oracle boundary");
      continue;
    }
    ++with_boundary;
    if (!traced) {
      out.require(false, "column " + fmt(x) + " has an oracle boundary but no vertex");
      continue;
    }
    const double mid = 0.5 * (bracket->first + bracket->second);
    worst = std::max(worst, std::abs(vertex->y - mid));
    out.require(std::abs(vertex->y - mid) <= tol, "column " + fmt(x) + " differs by " + fmt(std::abs(vertex->y - mid)));
  }
  out.require(with_boundary >= 20, "only " + std::to_string(with_boundary) + " columns cross the window");
  if (out.pass) {
    out.detail = std::to_string(with_boundary) + " columns with a boundary, max |dy| " + fmt(worst) + " <= " + fmt(tol);
  }
  return out;
}

// ---------------------------------------------------------------- 4
struct CurveCase {
  ExampleId id;
  Point2 fp;
};

Outcome curve_properties() {
  Outcome out;
  std::vector<std::string> summary;
  const std::vector<CurveCase> cases = {
      {ExampleId::ex1, {0, 1}},      {ExampleId::ex2, {0.5, 1}},  {ExampleId::ex3_T2, {3, 1.5}},
      {ExampleId::ex3_T2, {4, 4.0 / 3}}, {ExampleId::ex4, {2, 1}}, {ExampleId::ex5, {}},
  };
  std::mt19937_64 rng(4);
  for (const CurveCase& c : cases) {
    const ExampleSystem sys = make_example(c.id);
    const Point2 p0 = c.id == ExampleId::ex5 ? sys.default_fp : c.fp;
    const FixedPointRecord fp = describe_point(sys.map, p0);
    StableCurveOptions o;
    o.mode = sys.mode;
    o.columns = 128;
    const StableCurveReport rep = trace_stable_curve(sys.map, fp, sys.window, o);
    const MonotoneCurve& curve = rep.curve;
    const std::string name = to_string(c.id) + "@(" + fmt(p0.x) + "," + fmt(p0.y) + ")";
    if (curve.vertices.size() < 10) {
      out.require(false, name + ": only " + std::to_string(curve.vertices.size()) + " vertices");
      continue;
    }
    out.require(curve.monotonicity == Monotonicity::increasing && satisfies_monotonicity(curve),
                name + ": not strictly increasing");

    const double want = fp.eigen.v_lambda.y / fp.eigen.v_lambda.x;
    const double got = fitted_slope_near(curve, fp.location, 5);
    out.require(rel_err(got, want) < 0.05, name + ": slope " + fmt(got) + " vs " + fmt(want));

    // Invariance: T(v) against a fresh bisection in the column of T(v).
    std::vector<std::size_t> idx(curve.vertices.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    std::size_t checked = 0;
    double worst_inv = 0;
    for (std::size_t i : idx) {
      if (checked == 20) break;
      const Point2 v = curve.vertices[i];
      Point2 img;
      try {
        img = evaluate(sys.map, v);
      } catch (const Error&) {
        continue;
      }
      if (!(img.x > sys.window.x_lo && img.x < sys.window.x_hi && img.y > sys.window.y_lo && img.y < sys.window.y_hi)) {
        continue;
      }
      if (distance(img, fp.location) < 1e-6) continue;
      const ColumnResult col = bisect_column(sys.map, fp.location, img.x, sys.window, o);
      if (col.status != ColumnStatus::bracketed) continue;
      const double d = std::abs(col.bracket.vertex_y() - img.y);
      worst_inv = std::max(worst_inv, d);
      out.require(d <= 10 * o.curve_tol, name + ": image off the curve by " + fmt(d));
      ++checked;
    }
    out.require(checked == 20, name + ": only " + std::to_string(checked) + " invariance samples");

    // Forward orbits of vertices enter the 1e-5 ball around fp.
    std::size_t reached = 0;
    for (int k = 0; k < 10; ++k) {
      const Point2 v = curve.vertices[(k * (curve.vertices.size() - 1)) / 9];
      Point2 p = v;
      bool hit = distance(p, fp.location) < 1e-5;
      for (std::size_t n = 0; n < 2000000 && !hit; ++n) {
        try {
          p = sys.map.raw(p);
        } catch (const Error&) {
          break;
        }
        hit = distance(p, fp.location) < 1e-5;
      }
      reached += hit;
    }
    out.require(reached == 10, name + ": " + std::to_string(reached) + "/10 vertex orbits reached fp");
    summary.push_back(name + " " + std::to_string(curve.vertices.size()) + "v inv " + fmt(worst_inv, 2));
  }
  if (out.pass) {
    for (const auto& s : summary) out.detail += (out.detail.empty() ? "" : "; ") + s;
  }
  return out;
}

// ---------------------------------------------------------------- 5
Outcome basin_checks() {
  Outcome out;
  std::vector<std::string> summary;
  for (ExampleId id : {ExampleId::ex4, ExampleId::ex5}) {
    const auto t0 = std::chrono::steady_clock::now();
    const ExampleSystem sys = make_example(id);
    RasterOptions ro;
    ro.side.mode = sys.mode;
    const BasinRaster r = raster(sys.map, sys.default_fp, sys.window, 128, 128, ro);

    std::vector<Point2> minus, plus;
    for (std::size_t j = 0; j < r.ny; ++j) {
      for (std::size_t i = 0; i < r.nx; ++i) {
        if (r.at(i, j) == CellLabel::minus) minus.push_back(r.center(i, j));
        if (r.at(i, j) == CellLabel::plus) plus.push_back(r.center(i, j));
      }
    }
    std::mt19937_64 rng(5);
    std::size_t invariant_fail = 0;
    for (auto [cells, want] : {std::pair{&minus, SideLabel::minus}, std::pair{&plus, SideLabel::plus}}) {
      if (cells->empty()) {
        out.require(false, to_string(id) + ": no " + to_string(want) + " cells");
        continue;
      }
      std::uniform_int_distribution<std::size_t> pick(0, cells->size() - 1);
      for (int k = 0; k < 100; ++k) {
        const Point2 c = (*cells)[pick(rng)];
        const SideVerdict v = classify_side(sys.map, evaluate(sys.map, c), r.fp, r.side);
        if (v.label != want) ++invariant_fail;
      }
    }
    out.require(invariant_fail == 0, to_string(id) + ": " + std::to_string(invariant_fail) + " images changed side");

    // Brute force from the formulas: escape or convergence to a known limit.
    oracle::Map f;
    std::function<SideLabel(oracle::P)> judge;
    if (id == ExampleId::ex4) {
      f = oracle::ex4(1, 1, 1, 3);
      judge = [](oracle::P p) {
        if (p.y > 1e6) return SideLabel::minus;
        if (std::hypot(p.x - 2, p.y - 1) < 1e-3) return SideLabel::plus;
        return SideLabel::undecided;
      };
    } else {
      const Params& p = sys.params;
      f = oracle::leslie_gower(p.at("b1"), p.at("b2"), p.at("c1"), p.at("c2"), p.at("h1"), p.at("h2"));
      const Point2 nh = sys.default_fp;
      const Ex5Tangency tan = locate_ex5_tangency(ex5_search_line());
      const Point2 st = tan.stable;
      judge = [nh, st](oracle::P q) {
        if (std::hypot(q.x - st.x, q.y - st.y) < 1e-6) return SideLabel::plus;
        if (std::hypot(q.x - nh.x, q.y - nh.y) < 1e-3) return SideLabel::minus;
        return SideLabel::undecided;
      };
    }
    std::size_t decided = 0, agree = 0;
    for (std::size_t j = 0; j < r.ny; ++j) {
      for (std::size_t i = 0; i < r.nx; ++i) {
        const CellLabel l = r.at(i, j);
        if (l != CellLabel::minus && l != CellLabel::plus) continue;
        ++decided;
        oracle::P p = as_oracle(r.center(i, j));
        for (std::size_t n = 0; n < 200000; ++n) {
          const oracle::P q = f(p);
          const double step = std::hypot(q.x - p.x, q.y - p.y);
          p = q;
          if (!std::isfinite(p.x) || !std::isfinite(p.y) || p.y > 1e6) break;
          if (step < 1e-14) break;
        }
        const SideLabel want = l == CellLabel::minus ? SideLabel::minus : SideLabel::plus;
        agree += judge(p) == want;
      }
    }
    const double share = decided ? static_cast<double>(agree) / static_cast<double>(decided) : 0.0;
    out.require(share >= 0.98, to_string(id) + ": brute-force agreement " + fmt(share, 4));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.require(secs < 120, to_string(id) + ": raster checks took " + fmt(secs) + " s");
    summary.push_back(to_string(id) + " agreement " + fmt(100 * share, 4) + "% of " + std::to_string(decided) +
                      " (" + fmt(secs, 2) + " s)");
  }
  if (out.pass) out.detail = summary[0] + "; " + summary[1] + "; 400 image checks kept their side";
  return out;
}

// ---------------------------------------------------------------- 6
Outcome continuum_limits() {
  Outcome out;
  std::mt19937_64 rng(6);
  const ExampleSystem ex2 = make_example(ExampleId::ex2);
  double worst2 = 0;
  std::size_t ok2 = 0;
  for (int i = 0; i < 200; ++i) {
    const Point2 s{oracle::uniform(rng, 0, 2), oracle::uniform(rng, 0, 2)};
    const LimitRecord l = limit_equilibrium(ex2.map, s, 1e-14, 10000000);
    if (!l.limit) continue;
    const double res = std::abs(2 * l.limit->x + l.limit->y - 2);
    worst2 = std::max(worst2, res);
    ok2 += res < 1e-5;
  }
  out.require(ok2 == 200, "ex2: " + std::to_string(ok2) + "/200 limits on the segment");

  const ExampleSystem ex3 = make_example(ExampleId::ex3_T2);
  const oracle::Map t = oracle::ex3_T();
  double worst3 = 0;
  std::size_t ok3 = 0;
  for (int i = 0; i < 200; ++i) {
    const Point2 s{oracle::uniform(rng, 0.5, 8), oracle::uniform(rng, 0.5, 8)};
    const LimitRecord l = limit_equilibrium(ex3.map, s, 1e-14, 10000000);
    if (!l.limit) continue;
    const Point2 q = *l.limit;
    const double res = std::abs(q.x + q.y - q.x * q.y);
    const oracle::P img = t(as_oracle(q));
    const oracle::P back = t(img);
    const bool period_two = std::hypot(back.x - q.x, back.y - q.y) < 1e-8;
    worst3 = std::max(worst3, res);
    ok3 += res < 1e-5 && period_two;
  }
  out.require(ok3 == 200, "ex3: " + std::to_string(ok3) + "/200 period-two limits on the hyperbola");
  if (out.pass) {
    out.detail = "ex2 200/200 worst |2x+y-2| " + fmt(worst2) + "; ex3 200/200 worst |x+y-xy| " + fmt(worst3);
  }
  return out;
}

// ---------------------------------------------------------------- 7
Outcome continuity() {
  Outcome out;
  const ExampleSystem sys = make_example(ExampleId::ex1);
  std::vector<double> gaps;
  for (std::size_t n : {64u, 128u, 256u}) {
    const ContinuityReport r = continuity_probe(sys.map, {0.1, 0.1}, {0.1, 4}, n, 1e-14, 1000000);
    out.require(r.divergent == 0, "divergent samples at n=" + std::to_string(n));
    gaps.push_back(r.max_gap);
  }
  const double r1 = gaps[0] / gaps[1], r2 = gaps[1] / gaps[2];
  out.require(r1 >= 1.8 && r2 >= 1.8, "gap ratios " + fmt(r1) + ", " + fmt(r2));
  if (out.pass) {
    out.detail = "max gaps " + fmt(gaps[0]) + ", " + fmt(gaps[1]) + ", " + fmt(gaps[2]) + "; ratios " + fmt(r1) + ", " +
                 fmt(r2);
  }
  return out;
}

// ---------------------------------------------------------------- 8
Outcome parser_checks() {
  Outcome out;
  std::mt19937_64 rng(8);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const oracle::RandomExpr r = oracle::random_expr(rng, 5);
    const expr::Expr e = expr::parse(r.text);
    const double x = oracle::uniform(rng, 0.2, 1.5), y = oracle::uniform(rng, 0.2, 1.5), a = 1.3;
    const expr::Params p{{"a", a}};
    for (auto [var, fd] : {std::pair{expr::Var::x, oracle::derivative([&](double s) { return r.eval(s, y, a); }, x)},
                           std::pair{expr::Var::y, oracle::derivative([&](double s) { return r.eval(x, s, a); }, y)}}) {
      const double sym = expr::eval(expr::differentiate(e, var), x, y, p);
      const double err = std::abs(sym - fd) / std::max(1.0, std::abs(fd));
      worst = std::max(worst, err);
      out.require(err < 1e-5, "derivative mismatch for " + r.text);
    }
  }
  const PlanarMap dsl = map_from_expressions("x/(a+y)", "y/(1+x)", {{"a", 2.0}}, Rect::first_quadrant());
  double worst_eig = 0;
  for (double yb : {0.0, 1.0, 2.0}) {
    const FixedPointRecord rec = describe_point(dsl, {0, yb});
    const double e = std::max(rel_err(rec.eigen.lambda, 1 / (2 + yb)), rel_err(rec.eigen.mu, 1.0));
    worst_eig = std::max(worst_eig, e);
    out.require(e < 1e-6, "DSL ex1 eigenvalues at ybar=" + fmt(yb));
  }
  if (out.pass) {
    out.detail = "100 expressions, worst relative derivative err " + fmt(worst) + "; DSL ex1 eigen err " + fmt(worst_eig);
  }
  return out;
}

// ---------------------------------------------------------------- 9
int run_cmap(const std::string& args) {
  const std::string cmd = std::string(CMAP_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  Outcome out;
  const std::string dir = CMAP_WORKDIR;
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"basin --example ex4 --nx 96 --ny 96", "pgm"},
      {"basin --example ex5 --nx 64 --ny 64 --format csv", "csv"},
      {"curve --example ex1 --columns 64", "csv"},
      {"curve --example ex5 --unstable", "csv"},
  };
  std::size_t compared = 0;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    std::string reference;
    for (const char* w : {"1", "2", "4", "1"}) {
      const std::string path = dir + "/determinism_" + std::to_string(k) + "_w" + w + "." + runs[k].second;
      const int code = run_cmap(runs[k].first + " --workers " + w + " --out " + path);
      out.require(code == 0, "'" + runs[k].first + "' exited with " + std::to_string(code));
      const std::string bytes = slurp(path);
      out.require(!bytes.empty(), "'" + runs[k].first + "' wrote nothing");
      if (reference.empty()) reference = bytes;
      else out.require(bytes == reference, "'" + runs[k].first + "' differs at --workers " + w);
      ++compared;
    }
  }
  if (out.pass) out.detail = std::to_string(compared) + " runs over 4 configs, workers 1/2/4, byte-identical";
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "eigen fixtures", 1, eigen_fixtures},
      {2, "non-hyperbolic classification", 30, local_classification},
      {3, "separatrix oracle", 60, separatrix_oracle},
      {4, "curve properties", 0, curve_properties},
      {5, "basin invariance", 0, basin_checks},
      {6, "continuum limits", 0, continuum_limits},
      {7, "continuity probe", 0, continuity},
      {8, "parser and differentiation", 0, parser_checks},
      {9, "determinism", 0, determinism},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0 && secs >= c.budget_s) o.require(false, "took " + fmt(secs) + " s, budget " + fmt(c.budget_s) + " s");
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << c.number << " " << c.name << " (" << fmt(secs, 3) << " s): "
              << o.detail << std::endl;
  }
  return failures;
}
