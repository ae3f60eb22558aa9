#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "compmap/errors.hpp"

namespace {

const char* kUsage =
    "usage: cmap <verb> [options]\n"
    "verbs: analyze | curve | basin | orbit | examples\n"
    "run 'cmap <verb> --help' for the options of a verb\n";

void add_options(CLI::App& app, cmap::RunConfig& cfg) {
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.add_option("--example", cfg.example, "built-in system: ex1 ex2 ex3_T ex3_T2 ex4 ex5");
  app.add_option("--param", cfg.params, "parameter binding name=value (repeatable)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  app.add_option("--f", cfg.f, "first component f(x, y) in the map DSL");
  app.add_option("--g", cfg.g, "second component g(x, y) in the map DSL");
  app.add_option("--domain", cfg.domain, "DSL map domain xlo,xhi,ylo,yhi (inf allowed)");
  app.add_option("--window", cfg.window, "analysis window xlo,xhi,ylo,yhi");
  app.add_option("--out", cfg.out, "output path (stdout when omitted)");
  app.add_option("--format", cfg.format, "csv | pgm | json | text");
  app.add_option("--tol", cfg.tol, "Newton tolerance")->check(CLI::PositiveNumber);
  app.add_option("--max-iter", cfg.max_iter, "iteration cap for orbits and side classification")
      ->check(CLI::PositiveNumber);
  app.add_option("--mode", cfg.mode, "side classification: quadrant | limit");
  app.add_option("--fp", cfg.fp, "fixed point x,y (refined by Newton when needed)");
  app.add_option("--guess", cfg.guess, "Newton start x,y (repeatable)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  app.add_option("--start", cfg.start, "orbit start x,y");
  app.add_option("--nx", cfg.nx, "raster columns");
  app.add_option("--ny", cfg.ny, "raster rows");
  app.add_option("--columns", cfg.columns, "stable-curve bisection columns")->check(CLI::PositiveNumber);
  app.add_flag("--unstable", cfg.unstable, "trace the unstable curve instead of the stable one");
  app.add_option("--workers", cfg.workers, "worker threads (0: hardware concurrency)");
  app.add_option("--config", cfg.config, "key=value file; command-line flags take precedence");
}

// Config-file entries go first so that later command-line flags win.
std::vector<std::string> with_config(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::vector<std::string> out = cmap::config_file_tokens(path);
  out.insert(out.end(), args.begin(), args.end());
  return out;
}

int run(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << kUsage;
    return cmap::kConfig;
  }
  const std::string verb = argv[1];
  if (verb == "--help" || verb == "-h" || verb == "help") {
    std::cout << kUsage;
    return cmap::kOk;
  }
  int (*command)(const cmap::RunConfig&) = nullptr;
  if (verb == "analyze") command = cmap::cmd_analyze;
  else if (verb == "curve") command = cmap::cmd_curve;
  else if (verb == "basin") command = cmap::cmd_basin;
  else if (verb == "orbit") command = cmap::cmd_orbit;
  else if (verb == "examples") command = cmap::cmd_examples;
  if (!command) {
    std::cerr << "error: unknown verb '" << verb << "'\n" << kUsage;
    return cmap::kConfig;
  }

  cmap::RunConfig cfg;
  cfg.verb = verb;
  CLI::App app("cmap " + verb);
  app.name("cmap " + verb);
  add_options(app, cfg);
  try {
    std::vector<std::string> args = with_config(std::vector<std::string>(argv + 2, argv + argc));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return cmap::kOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cmap::kConfig;
  }
  return command(cfg);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const cmap::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return cmap::kConfig;
  } catch (const compmap::ConstraintError& e) {
    std::cerr << "constraint violated: " << e.what() << "\n";
    return cmap::kConfig;
  } catch (const compmap::ParseError& e) {
    std::cerr << "expression error: " << e.what() << "\n";
    return cmap::kConfig;
  } catch (const compmap::UnboundParameterError& e) {
    std::cerr << "expression error: " << e.what() << "\n";
    return cmap::kConfig;
  } catch (const compmap::PreconditionError& e) {
    std::cerr << "invalid request: " << e.what() << "\n";
    return cmap::kConfig;
  } catch (const compmap::HypothesisError& e) {
    std::cerr << "hypothesis failed [" << e.verdict() << "]: " << e.what() << "\n";
    return cmap::kHypothesis;
  } catch (const compmap::SingularityError& e) {
    std::cerr << "evaluation error: " << e.what() << "\n";
    return cmap::kEvaluation;
  } catch (const compmap::DomainError& e) {
    std::cerr << "evaluation error: " << e.what() << "\n";
    return cmap::kEvaluation;
  } catch (const compmap::ConvergenceError& e) {
    std::cerr << "evaluation error: " << e.what() << "\n";
    return cmap::kEvaluation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
