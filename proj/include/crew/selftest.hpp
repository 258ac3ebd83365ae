// SPDX-License-Identifier: Apache-2.0
//
// Quick internal consistency checks used by `crewctl selftest`.

#pragma once

#include <ostream>

namespace crew {

/// Runs the checks, printing one line per check. Returns the number of failures.
int run_selftest(std::ostream& out);

}  // namespace crew
