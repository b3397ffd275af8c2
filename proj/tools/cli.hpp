#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace salmon {

/// Runs the `salmon` command line. args[0] is the program name. Returns the
/// process exit code: 0 member/success, 1 non-member/failed check, 2 usage or
/// data error, 3 inconclusive (float mode).
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace salmon
