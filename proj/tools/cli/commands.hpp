#pragma once

#include "config.hpp"

namespace cmap {

enum ExitCode : int { kOk = 0, kConfig = 2, kEvaluation = 3, kHypothesis = 4 };

int cmd_analyze(const RunConfig& cfg);
int cmd_curve(const RunConfig& cfg);
int cmd_basin(const RunConfig& cfg);
int cmd_orbit(const RunConfig& cfg);
int cmd_examples(const RunConfig& cfg);

}  // namespace cmap
