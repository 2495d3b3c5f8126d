#pragma once

// Command-line front end. Exit codes: 0 ok, 1 usage/validation, 2 solver or I/O,
// 3 verification failure.

namespace dirac1d {

int run_cli(int argc, const char* const* argv);

}  // namespace dirac1d
