#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "compmap/basins.hpp"
#include "compmap/classification.hpp"
#include "compmap/errors.hpp"
#include "compmap/fixed_points.hpp"

namespace cmap {

using namespace compmap;
using nlohmann::ordered_json;

namespace {

std::string pt(Point2 p) { return "(" + format_real(p.x) + ", " + format_real(p.y) + ")"; }

ordered_json jpt(Point2 p) { return ordered_json::array({p.x, p.y}); }

std::vector<std::string> cfg_comments(const RunConfig& cfg) {
  std::vector<std::string> out;
  for (const auto& l : echo_lines(cfg)) out.push_back("cfg: " + l);
  return out;
}

void write_output(const RunConfig& cfg, const std::string& content) {
  if (cfg.out.empty() || cfg.out == "-") {
    std::cout << content;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + cfg.out + "'");
  f << content;
}

// Summaries go to stderr when the artifact itself is on stdout.
std::ostream& summary_stream(const RunConfig& cfg) {
  return cfg.out.empty() || cfg.out == "-" ? std::cerr : std::cout;
}

FixedPointRecord resolve_fixed_point(const RunConfig& cfg, const ResolvedMap& rm, const NewtonOptions& nopt) {
  Point2 p;
  if (!cfg.fp.empty()) p = parse_point(cfg.fp, "--fp");
  else if (rm.system) p = rm.system->default_fp;
  else throw ConfigError("--fp is required for maps given by --f/--g");
  if (!rm.map.domain().contains(p)) throw ConfigError("--fp lies outside the map's domain");
  const FixedPointRecord here = describe_point(rm.map, p);
  if (here.residual <= nopt.tol) return here;
  return find_fixed_point(rm.map, p, nopt);
}

ordered_json eigen_json(const EigenData& e) {
  ordered_json j;
  j["lambda"] = e.lambda;
  j["mu"] = e.mu;
  j["real_distinct"] = e.real_distinct;
  j["complex_pair"] = e.complex_pair;
  if (e.complex_pair) j["imag"] = e.imag;
  if (e.real_distinct) {
    j["v_lambda"] = jpt(e.v_lambda);
    j["v_mu"] = jpt(e.v_mu);
  }
  return j;
}

}  // namespace

// ---------------------------------------------------------------- analyze

int cmd_analyze(const RunConfig& cfg) {
  const ResolvedMap rm = resolve_map(cfg);
  NewtonOptions nopt;
  nopt.tol = cfg.tol;
  nopt.max_iter = cfg.max_iter;

  std::vector<FixedPointRecord> points;
  // Newton stalls near non-hyperbolic roots, so nearby hits are merged.
  auto add = [&](const FixedPointRecord& r) {
    for (auto& q : points) {
      if (distance(q.location, r.location) < 1e-4 * std::max(1.0, norm(r.location))) {
        if (r.residual < q.residual) q = r;
        return;
      }
    }
    points.push_back(r);
  };
  if (rm.system) {
    for (const auto& f : rm.system->fixtures) {
      if (f.kind == PointKind::fixed) add(describe_point(rm.map, f.point));
    }
  }
  std::vector<Point2> starts;
  if (!cfg.fp.empty()) starts.push_back(parse_point(cfg.fp, "--fp"));
  for (const auto& g : cfg.guess) starts.push_back(parse_point(g, "--guess"));
  if (starts.empty()) starts = sample_grid(rm.window, 16);
  for (const Point2 s : starts) {
    if (!rm.map.domain().contains(s)) throw ConfigError("Newton start " + pt(s) + " lies outside the domain");
    try {
      add(find_fixed_point(rm.map, s, nopt));
    } catch (const ConvergenceError&) {
    } catch (const SingularityError&) {
    }
  }
  if (points.empty() && !starts.empty()) {
    throw ConvergenceError("no fixed point found from " + std::to_string(starts.size()) + " Newton starts");
  }

  const Rect region = rm.map.domain();
  const CompetitivenessReport comp = check_competitive(rm.map, region, 400, rm.window);
  OConditionOptions oo;
  oo.window = rm.window;
  oo.probe_pairs = 2000;
  const OConditionReport oc = check_o_condition(rm.map, region, 400, oo);

  ordered_json report;
  report["map"] = rm.map.name();
  if (rm.system) report["description"] = rm.system->description;
  ordered_json params = ordered_json::object();
  for (const auto& [k, v] : rm.map.params()) params[k] = v;
  report["params"] = params;
  report["window"] = {rm.window.x_lo, rm.window.x_hi, rm.window.y_lo, rm.window.y_hi};
  report["competitive"] = comp.competitive;
  report["strongly_competitive"] = comp.strongly;
  report["o_condition"] = to_string(oc.verdict);
  report["config"] = echo_lines(cfg);

  std::ostringstream text;
  text << "map " << rm.map.name();
  if (rm.system) text << ": " << rm.system->description;
  text << "\n";
  for (const auto& [k, v] : rm.map.params()) text << "  " << k << " = " << format_real(v) << "\n";
  text << "competitive on window: " << (comp.competitive ? "yes" : "no")
       << ", strongly: " << (comp.strongly ? "yes" : "no") << " (" << comp.samples << " samples)\n";
  text << "order condition: " << to_string(oc.verdict) << "\n";
  text << points.size() << " fixed point(s)\n";

  ordered_json jpoints = ordered_json::array();
  for (const auto& r : points) {
    ordered_json jp;
    jp["location"] = jpt(r.location);
    jp["residual"] = r.residual;
    jp["classification"] = to_string(r.classification);
    jp["eigen"] = eigen_json(r.eigen);
    text << "\nfixed point " << pt(r.location) << "  residual " << format_real(r.residual) << "\n";
    text << "  classification: " << to_string(r.classification) << "\n";
    if (r.eigen.complex_pair) {
      text << "  eigenvalues: " << format_real(r.eigen.lambda) << " +/- " << format_real(r.eigen.imag) << "i\n";
    } else {
      text << "  eigenvalues: lambda " << format_real(r.eigen.lambda) << ", mu " << format_real(r.eigen.mu) << "\n";
    }
    if (r.eigen.real_distinct) {
      text << "  v_lambda " << pt(r.eigen.v_lambda) << ", v_mu " << pt(r.eigen.v_mu) << "\n";
    }

    const CurveHypothesesReport t1 = check_theorem1_hypotheses(rm.map, r, region, 400, rm.window);
    ordered_json j1;
    j1["delta_nonempty"] = t1.delta_nonempty;
    j1["eigenvalues"] = t1.eigenvalues_ok;
    j1["eigenspace_not_axis"] = t1.eigenspace_not_axis;
    j1["strongly_competitive"] = t1.strongly_competitive;
    j1["holds"] = t1.all();
    if (!t1.all()) j1["first_failure"] = t1.first_failure();
    jp["invariant_curve_hypotheses"] = j1;
    text << "  invariant curve hypotheses: " << (t1.all() ? "hold" : "fail (" + t1.first_failure() + ")") << "\n";

    EndpointConditionsOptions t2o;
    t2o.window = rm.window;
    const EndpointConditionsReport t2 = check_theorem2_conditions(rm.map, r, region, t2o);
    ordered_json j2;
    j2["condition_i"] = t2.condition_i;
    j2["condition_ii"] = t2.condition_ii;
    j2["condition_iii"] = t2.condition_iii;
    j2["det_at_fp"] = t2.det_at_fp;
    j2["starts"] = t2.starts;
    j2["note"] = t2.note;
    jp["boundary_endpoint_conditions"] = j2;
    text << "  boundary endpoint conditions: i " << (t2.condition_i ? "yes" : "no") << ", ii "
         << (t2.condition_ii ? "yes" : "no") << ", iii " << (t2.condition_iii ? "yes" : "no") << " (" << t2.note
         << ")\n";

    if (const auto la = analyze_local(rm.map, r)) {
      ordered_json jl;
      jl["eigenvalue"] = la->eigenvalue;
      jl["direction"] = jpt(la->direction);
      jl["case"] = to_string(la->verdict.case_id);
      if (la->verdict.ell) jl["ell"] = *la->verdict.ell;
      if (la->ray) {
        ordered_json coeffs = ordered_json::array();
        for (const Point2 c : la->ray->coeffs) coeffs.push_back(jpt(c));
        jl["taylor"] = coeffs;
        jl["ill_conditioned"] = la->ray->ill_conditioned;
      }
      jl["detail"] = la->verdict.detail;
      jp["local"] = jl;
      text << "  local verdict along " << pt(la->direction) << " (eigenvalue " << format_real(la->eigenvalue)
           << "): " << to_string(la->verdict.case_id);
      if (la->verdict.ell) text << ", ell = " << *la->verdict.ell;
      if (la->ray && la->verdict.ell) {
        const Point2 c = la->ray->coefficient(*la->verdict.ell);
        text << ", (c, d) = " << pt(c);
      }
      text << "\n";
      if (!la->verdict.detail.empty()) text << "    " << la->verdict.detail << "\n";
    } else {
      text << "  local verdict: no eigenvector with components of opposite sign\n";
    }
    jpoints.push_back(jp);
  }
  report["fixed_points"] = jpoints;

  if (cfg.format == "json") write_output(cfg, report.dump(2) + "\n");
  else if (cfg.format.empty() || cfg.format == "text") write_output(cfg, text.str());
  else throw ConfigError("analyze supports --format text or json");
  return kOk;
}

// ---------------------------------------------------------------- curve

int cmd_curve(const RunConfig& cfg) {
  if (!cfg.format.empty() && cfg.format != "csv") throw ConfigError("curve writes csv only");
  const ResolvedMap rm = resolve_map(cfg);
  NewtonOptions nopt;
  nopt.tol = cfg.tol;
  const FixedPointRecord fp = resolve_fixed_point(cfg, rm, nopt);

  MonotoneCurve curve;
  std::ostringstream summary;
  if (cfg.unstable) {
    UnstableCurveOptions uo;
    UnstableCurveReport rep;
    try {
      rep = trace_unstable_curve(rm.map, fp, uo);
    } catch (const PreconditionError& e) {
      throw HypothesisError("unstable_curve_hypotheses", e.what());
    }
    curve = rep.curve;
    summary << "unstable curve through " << pt(fp.location) << ": " << curve.vertices.size() << " vertices, "
            << rep.dropped_vertices << " dropped\n";
  } else {
    StableCurveOptions so;
    so.columns = cfg.columns;
    so.mode = rm.mode;
    so.max_iter = cfg.max_iter;
    so.workers = cfg.workers;
    const StableCurveReport rep = trace_stable_curve(rm.map, fp, rm.window, so);
    curve = rep.curve;
    summary << "stable curve through " << pt(fp.location) << ": " << curve.vertices.size() << " vertices, "
            << rep.skipped_columns.size() << " columns without bracket, " << rep.failed_columns.size()
            << " failed, " << rep.dropped_vertices << " dropped\n";
  }
  if (curve.vertices.empty()) throw ConvergenceError("no curve vertex found in the window");
  summary << "monotonicity: " << to_string(curve.monotonicity) << ", certificate "
          << (satisfies_monotonicity(curve) ? "passed" : "FAILED") << "\n";
  summary << "left endpoint " << pt(curve.endpoint_left.point) << ": " << to_string(curve.endpoint_left.kind) << "\n";
  summary << "right endpoint " << pt(curve.endpoint_right.point) << ": " << to_string(curve.endpoint_right.kind)
          << "\n";

  std::ostringstream csv;
  for (const auto& c : cfg_comments(cfg)) csv << "# " << c << "\n";
  csv << "x,y\n";
  for (const Point2 v : curve.vertices) csv << format_real(v.x) << ',' << format_real(v.y) << '\n';
  write_output(cfg, csv.str());
  summary_stream(cfg) << summary.str();
  return kOk;
}

// ---------------------------------------------------------------- basin

int cmd_basin(const RunConfig& cfg) {
  const std::string format = cfg.format.empty() ? "pgm" : cfg.format;
  if (format != "pgm" && format != "csv") throw ConfigError("basin writes pgm or csv");
  if (cfg.nx < 2 || cfg.ny < 2) throw ConfigError("--nx and --ny must be at least 2");
  const ResolvedMap rm = resolve_map(cfg);
  NewtonOptions nopt;
  nopt.tol = cfg.tol;
  const FixedPointRecord fp = resolve_fixed_point(cfg, rm, nopt);
  RasterOptions ro;
  ro.side.mode = rm.mode;
  ro.side.max_iter = cfg.max_iter;
  ro.workers = cfg.workers;
  const BasinRaster r = raster(rm.map, fp.location, rm.window, cfg.nx, cfg.ny, ro);
  const Census c = census(r);

  const auto comments = cfg_comments(cfg);
  write_output(cfg, format == "pgm" ? to_pgm(r, comments) : to_csv(r, comments));

  std::ostream& s = summary_stream(cfg);
  s << "census (" << r.nx << "x" << r.ny << ", fixed point " << pt(fp.location) << ", " << to_string(r.side.mode)
    << ")\n";
  for (CellLabel l : {CellLabel::minus, CellLabel::plus, CellLabel::band, CellLabel::undecided, CellLabel::singular}) {
    s << "  " << to_string(l) << " " << c[static_cast<std::size_t>(l)] << "\n";
  }
  if (2 * c[static_cast<std::size_t>(CellLabel::singular)] > r.labels.size()) {
    std::cerr << "error: more than half of the cells failed to evaluate\n";
    return kEvaluation;
  }
  return kOk;
}

// ---------------------------------------------------------------- orbit

int cmd_orbit(const RunConfig& cfg) {
  if (!cfg.format.empty() && cfg.format != "csv") throw ConfigError("orbit writes csv only");
  if (cfg.start.empty()) throw ConfigError("orbit needs --start x,y");
  const ResolvedMap rm = resolve_map(cfg);
  const Point2 p = parse_point(cfg.start, "--start");
  if (!rm.map.domain().contains(p)) throw DomainError("start " + pt(p) + " lies outside the map's domain");
  StopRule stop;
  stop.max_iter = cfg.max_iter;
  stop.convergence_tol = 0.0;
  const Orbit o = orbit(rm.map, p, stop);
  if (o.terminated_by == Termination::singularity && o.points.size() == 1) {
    throw SingularityError("map is singular at the start point " + pt(p));
  }
  std::ostringstream csv;
  for (const auto& c : cfg_comments(cfg)) csv << "# " << c << "\n";
  csv << "n,x,y\n";
  for (std::size_t n = 0; n < o.points.size(); ++n) {
    csv << n << ',' << format_real(o.points[n].x) << ',' << format_real(o.points[n].y) << '\n';
  }
  write_output(cfg, csv.str());
  summary_stream(cfg) << o.points.size() - 1 << " steps, stopped by " << to_string(o.terminated_by) << "\n";
  return kOk;
}

// ---------------------------------------------------------------- examples

int cmd_examples(const RunConfig& cfg) {
  std::vector<ExampleId> ids;
  if (cfg.example.empty()) ids = all_examples();
  else if (auto id = parse_example_id(cfg.example)) ids.push_back(*id);
  else throw ConfigError("unknown example '" + cfg.example + "'");

  ordered_json all = ordered_json::array();
  std::ostringstream text;
  for (ExampleId id : ids) {
    const ExampleSystem s = make_example(id, cfg.example.empty() ? Params{} : parse_params(cfg.params));
    ordered_json j;
    j["id"] = to_string(id);
    j["description"] = s.description;
    ordered_json params = ordered_json::object();
    for (const auto& [k, v] : s.params) params[k] = v;
    j["params"] = params;
    j["window"] = {s.window.x_lo, s.window.x_hi, s.window.y_lo, s.window.y_hi};
    j["default_fp"] = jpt(s.default_fp);
    j["mode"] = to_string(s.mode);
    text << to_string(id) << ": " << s.description << "\n  params:";
    for (const auto& [k, v] : s.params) text << " " << k << "=" << format_real(v);
    text << "\n  default fixed point " << pt(s.default_fp) << ", side mode " << to_string(s.mode) << "\n";
    ordered_json fx = ordered_json::array();
    for (const auto& f : s.fixtures) {
      ordered_json jf;
      jf["point"] = jpt(f.point);
      jf["kind"] = to_string(f.kind);
      jf["lambda"] = f.lambda;
      jf["mu"] = f.mu;
      if (f.v_lambda) jf["v_lambda"] = jpt(*f.v_lambda);
      if (f.v_mu) jf["v_mu"] = jpt(*f.v_mu);
      if (f.taylor2) jf["taylor2"] = jpt(*f.taylor2);
      jf["note"] = f.note;
      fx.push_back(jf);
      text << "  " << to_string(f.kind) << " " << pt(f.point) << ": lambda " << format_real(f.lambda) << ", mu "
           << format_real(f.mu) << "  [" << f.note << "]\n";
    }
    j["fixtures"] = fx;
    if (s.continuum) {
      j["continuum"] = s.continuum->description;
      text << "  continuum: " << s.continuum->description << "\n";
    }
    all.push_back(j);
  }
  if (cfg.format == "json") write_output(cfg, all.dump(2) + "\n");
  else if (cfg.format.empty() || cfg.format == "text") write_output(cfg, text.str());
  else throw ConfigError("examples supports --format text or json");
  return kOk;
}

}  // namespace cmap
