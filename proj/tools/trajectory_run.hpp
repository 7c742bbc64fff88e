#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace qbcli {

struct TrajectoryData {
    std::vector<double> energy;  // E(m), m = 0..kicks
    std::vector<double> work;    // W(m) when ergotropy is on, else empty
};

// Dispatch to the engine named in the config. The config must already be
// validated; library-level failures propagate as ConfigError/NumericalError.
TrajectoryData run_engine(const RunConfig& config);

// 17-significant-digit decimal, the one formatter every CSV cell goes through.
std::string format_number(double value);

// `# {json}` metadata line, header, one row per kick. W/dW cells are empty
// unless work was computed. dE(0) = dW(0) = 0 by construction.
void write_trajectory_csv(std::ostream& out, const RunConfig& config, const TrajectoryData& data);

int cmd_trajectory(const RunConfig& config);

}  // namespace qbcli
