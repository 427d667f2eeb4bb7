#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace tilerank {

/// Entry point behind the tilerank binary. Returns 0 on success, 1 on data
/// errors, 2 on usage errors. Streams are injectable for tests.
int cli_main(const std::vector<std::string>& args,
             std::ostream& out = std::cout, std::ostream& err = std::cerr);
int cli_main(int argc, const char* const* argv,
             std::ostream& out = std::cout, std::ostream& err = std::cerr);

}  // namespace tilerank
