#pragma once

namespace dfrsim {

// Full command-line entry point, linkable from tests. Returns the process
// exit code: 0 success, 2 usage/config error, 3 I/O error.
int cli_main(int argc, const char* const* argv);

}  // namespace dfrsim
