#ifndef E3TOP_CLI_HPP
#define E3TOP_CLI_HPP

#include <iosfwd>

namespace e3top {

/// Full command-line front end; returns the process exit code
/// (0 success, 1 domain/validation error, 2 verification failure).
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace e3top

#endif
