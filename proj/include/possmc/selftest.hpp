#pragma once

#include <iosfwd>

namespace possmc {

// Quick property checks of the library. Prints one line per check and
// returns the number of failures.
int run_selftest(std::ostream& out);

}  // namespace possmc
