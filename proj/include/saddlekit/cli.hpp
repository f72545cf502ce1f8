#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace saddlekit {

// Exit codes: 0 success, 1 refutations/errors, 2 pass-with-warnings
// (inconclusive or unconverged results), 64 usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace saddlekit
