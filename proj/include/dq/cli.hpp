#pragma once

namespace dq {

// Full command dispatch; returns the process exit status.
// 0: success, 1: validation or usage error, 2: numeric non-convergence.
int cli_main(int argc, char** argv);

}  // namespace dq
