#pragma once

namespace armlab {

// Entry point shared by the armlab binary and the CLI tests.
// Exit codes: 0 success, 1 invariant failure, 2 usage error.
int cli_main(int argc, const char* const* argv);

}  // namespace armlab
