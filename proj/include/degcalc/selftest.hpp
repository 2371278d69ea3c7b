#pragma once

#include <iosfwd>

namespace degcalc {

/// Runs the invariant checks of every module, one "ok"/"FAIL" line each.
/// Returns true when all pass. `jobs` bounds the spectral worker threads.
bool run_selftest(std::ostream& log, int jobs = 1);

}  // namespace degcalc
