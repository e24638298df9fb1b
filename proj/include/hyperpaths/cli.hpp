#pragma once

namespace hyperpaths {

/// Runs the command-line tool. Returns 0 on success, 2 on a usage error and
/// 1 when a guard or argument check fails.
int run_cli(int argc, char** argv);

}  // namespace hyperpaths
