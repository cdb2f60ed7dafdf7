#pragma once

namespace alec {

/// Full command-line front end. Returns the process exit code:
/// 0 success, 2 usage/config error, 1 internal failure.
int run_cli(int argc, const char* const* argv);

} // namespace alec
