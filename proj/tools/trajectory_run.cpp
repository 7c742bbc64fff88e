#include "trajectory_run.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>

#include <qb/dense_oracle.hpp>
#include <qb/dephasing_dynamics.hpp>
#include <qb/ergotropy.hpp>
#include <qb/errors.hpp>
#include <qb/thermal_ensemble.hpp>

namespace qbcli {

TrajectoryData run_engine(const RunConfig& config) {
    TrajectoryData data;
    switch (config.engine) {
        case Engine::Analytic:
            data.energy = qb::thermal_energy_trajectory(config.n_sites, config.kicks,
                                                        config.charger, config.thermal());
            break;
        case Engine::Dephasing:
            data.energy = qb::dephasing_trajectory(config.n_sites, config.kicks, config.charger,
                                                   config.thermal(), config.gamma_z);
            break;
        case Engine::Dense: {
            const auto channels =
                qb::make_channels(config.gamma_z, config.gamma, config.omega0, config.beta);
            qb::DenseTrajectoryOptions options;
            options.dt = config.dt;
            Eigen::VectorXd h0;
            if (config.ergotropy) {
                h0 = qb::build_hamiltonians(config.n_sites, config.charger, config.thermal()).h_0;
                data.work.reserve(config.kicks + 1);
                options.observer = [&](long long, const Eigen::MatrixXcd& rho) {
                    data.work.push_back(qb::ergotropy(rho, h0));
                };
            }
            data.energy = qb::dense_trajectory(config.n_sites, config.kicks, config.charger,
                                               config.thermal(), channels, options)
                              .energy;
            break;
        }
    }
    return data;
}

std::string format_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_trajectory_csv(std::ostream& out, const RunConfig& config, const TrajectoryData& data) {
    out << "# " << config_json(config) << "\n";
    out << "m,t,E,dE,W,dW\n";
    const bool has_work = !data.work.empty();
    for (std::size_t m = 0; m < data.energy.size(); ++m) {
        const double t = static_cast<double>(m);
        out << m << ',' << format_number(t) << ',' << format_number(data.energy[m]) << ','
            << format_number(qb::normalized_energy(data.energy[m], data.energy[0], config.n_sites));
        if (has_work)
            out << ',' << format_number(data.work[m]) << ','
                << format_number(
                       qb::normalized_ergotropy(data.work[m], data.work[0], config.n_sites));
        else
            out << ",,";
        out << "\n";
    }
}

int cmd_trajectory(const RunConfig& config) {
    config.validate();
    const TrajectoryData data = run_engine(config);
    if (config.out.empty()) {
        write_trajectory_csv(std::cout, config, data);
        std::cout.flush();
    } else {
        std::ofstream file(config.out, std::ios::binary);
        if (!file) throw qb::ConfigError("cannot open output file '" + config.out + "'");
        write_trajectory_csv(file, config, data);
        if (!file.good()) throw qb::ConfigError("failed writing output file '" + config.out + "'");
    }
    return 0;
}

}  // namespace qbcli
