#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace duomode::cli {

/// Entry point behind the duomode binary. args excludes argv[0].
/// Exit codes: 0 ok, 1 verification failure, 2 unstable parameters,
/// 3 unphysical input, 4 I/O error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace duomode::cli
