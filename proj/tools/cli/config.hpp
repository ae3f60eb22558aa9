#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "compmap/curves.hpp"
#include "compmap/geometry.hpp"
#include "compmap/planar_map.hpp"
#include "compmap/systems.hpp"

namespace cmap {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string verb;
  std::string example;
  std::vector<std::string> params;  // "k=v", later entries win
  std::string f, g;
  std::string domain = "0,inf,0,inf";
  std::string window;
  std::string out;
  std::string format;
  double tol = 1e-10;
  std::size_t max_iter = 10000;
  std::string mode;  // quadrant | limit, empty: per example
  std::string fp;
  std::vector<std::string> guess;
  std::string start;
  std::size_t nx = 128, ny = 128;
  std::size_t columns = 256;
  bool unstable = false;
  unsigned workers = 0;
  std::string config;
};

/// key=value lines; "# cfg: key=value" echo lines are read as plain entries
/// and other '#' lines are comments. Returns argv-style tokens.
std::vector<std::string> config_file_tokens(const std::string& path);

/// Resolved configuration as "key=value" lines in a fixed order. out, config
/// and workers are omitted: they do not affect the written content.
std::vector<std::string> echo_lines(const RunConfig& cfg);

compmap::Rect parse_rect(const std::string& text, const char* what);
compmap::Point2 parse_point(const std::string& text, const char* what);
compmap::Params parse_params(const std::vector<std::string>& entries);

struct ResolvedMap {
  compmap::PlanarMap map;
  std::optional<compmap::ExampleSystem> system;
  compmap::Rect window;
  compmap::SideMode mode = compmap::SideMode::quadrant_escape;
};

/// Exactly one map source: --example, or both --f and --g.
ResolvedMap resolve_map(const RunConfig& cfg);

}  // namespace cmap
