#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace flucbound {

/// Exit codes: 0 success, 1 a requested bound was violated (verify only),
/// 2 usage or runtime error (one JSON line on err).
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

}  // namespace flucbound
