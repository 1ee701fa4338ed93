#pragma once

namespace gtf {

// analyze / generate / fuzz / replay entry point. Exit codes: 0 success,
// 1 usage error, 2 input-file error, 3 campaign aborted, 4 replay mismatch.
int run_cli(int argc, const char* const* argv);

}  // namespace gtf
