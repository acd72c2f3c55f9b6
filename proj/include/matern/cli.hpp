#ifndef MATERN_CLI_HPP
#define MATERN_CLI_HPP

#include <ostream>

namespace matern {

// Exit-code contract: 0 success, 1 validation/conjecture/conditioning
// failure, 2 usage error. Usage and runtime errors also emit one line of
// machine-readable JSON on `err`. Output is byte-identical for identical
// argv (and seed), regardless of thread count.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace matern

#endif  // MATERN_CLI_HPP
