#pragma once

#include <cmath>
#include <string>

#include <json.hpp>
#include <qb/lattice_modes.hpp>
#include <qb/thermal_ensemble.hpp>

namespace qbcli {

enum class Engine { Analytic, Dephasing, Dense };

Engine parse_engine(const std::string& name);
const char* engine_name(Engine engine);

// One resolved run. n, kicks and beta carry "unset" sentinels so that a config
// file and command-line flags can each fill them in; validate() rejects a
// config where any of the three is still missing.
struct RunConfig {
    int n_sites = 0;
    long long kicks = -1;
    qb::ChargerParams charger;
    double j_th = 0.5;
    double h_th = 1.0;
    double beta = std::nan("");
    double gamma_z = 0.0;
    double gamma = 0.0;
    double omega0 = 1.0;
    Engine engine = Engine::Analytic;
    double dt = 1e-2;
    bool ergotropy = false;
    std::string out;  // empty: stdout

    qb::ThermalParams thermal() const { return {j_th, h_th, beta}; }

    // Field ranges plus the engine compatibility rules: analytic needs
    // gamma_z = gamma = 0, dephasing needs gamma = 0, dense needs
    // n_sites <= 12, and ergotropy needs the dense engine (it is the only
    // one holding a full density matrix). Throws ConfigError.
    void validate() const;
};

// Merge the fields present in the JSON document at `path` into `config`.
// Unknown keys are rejected; "version" and "out" from an echoed metadata
// line are accepted so a run can be replayed from its own output.
void apply_config_file(RunConfig& config, const std::string& path);

// Same merge from an already-parsed document. Sweep grids reuse it for their
// base fields; only they may carry "axes" and "gamma_z_times_n".
void apply_config_json(RunConfig& config, const nlohmann::json& doc, bool allow_axes);

// Resolved-config echo with sorted keys, infinite beta spelled "inf", and the
// build version. Stable bytes for identical configs.
std::string config_json(const RunConfig& config);

}  // namespace qbcli
