#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "compmap/errors.hpp"

namespace cmap {

using compmap::format_real;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& raw, const char* what) {
  const std::string t = trim(raw);
  if (t == "inf" || t == "+inf") return compmap::kInf;
  if (t == "-inf") return -compmap::kInf;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ConfigError(std::string("malformed number '") + t + "' in " + what);
  }
  if (used != t.size() || std::isnan(v)) throw ConfigError(std::string("malformed number '") + t + "' in " + what);
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

std::vector<std::string> config_file_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::vector<std::string> lines;
  bool echoed = false;
  for (std::string line; std::getline(in, line);) {
    lines.push_back(trim(line));
    echoed = echoed || lines.back().rfind("# cfg:", 0) == 0;
  }
  // An output file passed back as config: only its echo comments count.
  std::vector<std::string> tokens;
  std::size_t lineno = 0;
  for (std::string t : lines) {
    ++lineno;
    if (t.rfind("# cfg:", 0) == 0) t = trim(t.substr(6));
    else if (echoed || t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("config line " + std::to_string(lineno) + " is not key=value");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key == "verb" || key == "config") continue;
    if (key == "unstable") {
      if (value == "true" || value == "1") tokens.push_back("--unstable");
      else if (value != "false" && value != "0") throw ConfigError("unstable must be true or false");
      continue;
    }
    tokens.push_back("--" + key);
    tokens.push_back(value);
  }
  return tokens;
}

std::vector<std::string> echo_lines(const RunConfig& cfg) {
  std::vector<std::string> out;
  auto add = [&](const std::string& k, const std::string& v) {
    if (!v.empty()) out.push_back(k + "=" + v);
  };
  add("verb", cfg.verb);
  add("example", cfg.example);
  for (const auto& p : cfg.params) add("param", p);
  add("f", cfg.f);
  add("g", cfg.g);
  add("domain", cfg.domain);
  add("window", cfg.window);
  add("format", cfg.format);
  add("tol", format_real(cfg.tol));
  add("max-iter", std::to_string(cfg.max_iter));
  add("mode", cfg.mode);
  add("fp", cfg.fp);
  for (const auto& gs : cfg.guess) add("guess", gs);
  add("start", cfg.start);
  add("nx", std::to_string(cfg.nx));
  add("ny", std::to_string(cfg.ny));
  add("columns", std::to_string(cfg.columns));
  add("unstable", cfg.unstable ? "true" : "false");
  return out;
}

compmap::Rect parse_rect(const std::string& text, const char* what) {
  const auto parts = split(text, ',');
  if (parts.size() != 4) throw ConfigError(std::string(what) + " must be xlo,xhi,ylo,yhi");
  compmap::Rect r{parse_real(parts[0], what), parse_real(parts[1], what), parse_real(parts[2], what),
                  parse_real(parts[3], what)};
  if (!(r.x_lo < r.x_hi) || !(r.y_lo < r.y_hi)) throw ConfigError(std::string(what) + " needs lo < hi on both axes");
  return r;
}

compmap::Point2 parse_point(const std::string& text, const char* what) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw ConfigError(std::string(what) + " must be x,y");
  compmap::Point2 p{parse_real(parts[0], what), parse_real(parts[1], what)};
  if (!p.finite()) throw ConfigError(std::string(what) + " must be finite");
  return p;
}

compmap::Params parse_params(const std::vector<std::string>& entries) {
  compmap::Params p;
  for (const auto& e : entries) {
    const auto eq = e.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--param expects name=value, got '" + e + "'");
    p[trim(e.substr(0, eq))] = parse_real(e.substr(eq + 1), "--param");
  }
  return p;
}

ResolvedMap resolve_map(const RunConfig& cfg) {
  const bool dsl = !cfg.f.empty() || !cfg.g.empty();
  if (dsl && !cfg.example.empty()) throw ConfigError("give either --example or --f/--g, not both");
  if (!dsl && cfg.example.empty()) throw ConfigError("no map: give --example or --f and --g");
  const compmap::Params params = parse_params(cfg.params);
  std::optional<compmap::Rect> window;
  if (!cfg.window.empty()) {
    window = parse_rect(cfg.window, "--window");
    if (!window->bounded()) throw ConfigError("--window must be bounded");
  }
  if (dsl) {
    if (cfg.f.empty() || cfg.g.empty()) throw ConfigError("--f and --g must be given together");
    const compmap::Rect domain = parse_rect(cfg.domain, "--domain");
    ResolvedMap r{compmap::map_from_expressions(cfg.f, cfg.g, params, domain), std::nullopt,
                  window ? *window : domain.clamped({0.0, 10.0, 0.0, 10.0}), compmap::SideMode::quadrant_escape};
    if (cfg.mode == "limit") r.mode = compmap::SideMode::limit_equilibrium;
    else if (!cfg.mode.empty() && cfg.mode != "quadrant") throw ConfigError("--mode must be quadrant or limit");
    return r;
  }
  const auto id = compmap::parse_example_id(cfg.example);
  if (!id) throw ConfigError("unknown example '" + cfg.example + "'");
  compmap::ExampleSystem sys = compmap::make_example(*id, params);
  ResolvedMap r{sys.map, sys, window ? *window : sys.window, sys.mode};
  if (cfg.mode == "limit") r.mode = compmap::SideMode::limit_equilibrium;
  else if (cfg.mode == "quadrant") r.mode = compmap::SideMode::quadrant_escape;
  else if (!cfg.mode.empty()) throw ConfigError("--mode must be quadrant or limit");
  return r;
}

}  // namespace cmap
