#pragma once

namespace conceptmap {

// Full CLI entry point. Exit codes: 0 success, 1 usage or config error,
// 2 data error, 3 internal invariant violation.
int run_cli(int argc, const char* const* argv);

} // namespace conceptmap
