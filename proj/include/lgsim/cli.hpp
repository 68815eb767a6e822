#pragma once

#include "lgsim/config.hpp"

namespace lgsim {

// Exit codes: 0 success, 2 config error, 3 numerical non-convergence.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNonConverged = 3;

int cmd_crosstalk(const RunConfig& cfg);
int cmd_tradeoff(const RunConfig& cfg);
int cmd_subspace(const RunConfig& cfg);
int cmd_qst(const RunConfig& cfg);
int cmd_mub_check(const RunConfig& cfg);

/// Full argv entry point used by tools/lgsim_main.cpp.
int run_cli(int argc, char** argv);

} // namespace lgsim
