#pragma once

namespace lll {

/// Exit codes: 0 success, 1 validation failure, 2 malformed input,
/// 3 internal-consistency failure.
int run_cli(int argc, const char* const* argv);

}  // namespace lll
