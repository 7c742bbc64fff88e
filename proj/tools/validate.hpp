#pragma once

namespace qbcli {

// Cross-engine consistency suite. `full` adds the n = 8 closed-evolution
// equality sweep, deeper dephasing-vs-dense runs and the n = 10 dense
// charging regression (several minutes); the fast set stays under half a
// minute. Prints one row per check with its worst error and tolerance.
// Returns 0 when everything is within tolerance, 3 otherwise.
int cmd_validate(bool full);

}  // namespace qbcli
