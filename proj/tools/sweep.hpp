#pragma once

#include <string>

namespace qbcli {

// Cartesian sweep driven by a grid file: base trajectory config plus an
// "axes" object listing values for any subset of {beta, gamma, gamma_z, m, n}.
// Writes one trajectory CSV per point plus aggregate.csv into out_dir.
// Points run on `jobs` worker threads (<= 0: hardware concurrency); failures
// are recorded per point. Returns 0 when every point succeeded, otherwise the
// exit code of the worst failure class (numerical over config).
int cmd_sweep(const std::string& grid_path, const std::string& out_dir, int jobs);

}  // namespace qbcli
