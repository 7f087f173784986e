#pragma once

// Command orchestration and report rendering for the CLI (and the python
// bindings). Reports are deterministic for a fixed config and seed; the
// machine block lists every charted key, zero entries included.

#include "eqdeg/config.hpp"

namespace eqdeg {

struct CommandResult {
    int exit_code = 0;
    std::string text; // full report (text or JSON)
};

// exit codes: 0 ok, 2 invalid config/map, 3 degenerate zero,
// 4 hypothesis violated under --strict, 5 property failure
CommandResult cmd_analyze(const LoadedProblem& p, bool json);
CommandResult cmd_degree(const LoadedProblem& p, bool strict, bool json);
CommandResult cmd_realize(const LoadedProblem& p, bool strict, bool json);
CommandResult cmd_verify(const LoadedProblem& p, bool strict, bool json);

} // namespace eqdeg
