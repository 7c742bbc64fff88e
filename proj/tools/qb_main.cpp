#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <qb/errors.hpp>

#include "run_config.hpp"
#include "sweep.hpp"
#include "trajectory_run.hpp"
#include "units.hpp"
#include "validate.hpp"

namespace {

// Flags write into `flags`; values the user actually passed then overlay the
// config file so the precedence is defaults < --config < flags.
struct TrajectoryCli {
    qbcli::RunConfig flags;
    std::string engine = "analytic";
    std::string config_path;

    void add_options(CLI::App& cmd) {
        cmd.add_option("--n", flags.n_sites, "number of sites");
        cmd.add_option("--kicks", flags.kicks, "number of kicks (rows are m = 0..kicks)");
        cmd.add_option("--beta", flags.beta, "inverse temperature of the initial Gibbs state ('inf' accepted)");
        cmd.add_option("--jth", flags.j_th, "thermal-state Ising coupling");
        cmd.add_option("--hth", flags.h_th, "thermal-state transverse field");
        cmd.add_option("--j", flags.charger.j, "charger Ising coupling");
        cmd.add_option("--b", flags.charger.b, "kick angle");
        cmd.add_option("--g", flags.charger.g, "battery level splitting");
        cmd.add_option("--gamma-z", flags.gamma_z, "dephasing rate");
        cmd.add_option("--gamma", flags.gamma, "thermal-channel rate");
        cmd.add_option("--omega0", flags.omega0, "thermal-channel level splitting");
        cmd.add_option("--engine", engine, "analytic | dephasing | dense");
        cmd.add_option("--dt", flags.dt, "integrator step of the dense engine");
        cmd.add_flag("--ergotropy", flags.ergotropy, "also compute W and dW (dense engine)");
        cmd.add_option("--out", flags.out, "output CSV path (default: stdout)");
        cmd.add_option("--config", config_path, "JSON config file; flags override its fields");
    }

    qbcli::RunConfig resolve(const CLI::App& cmd) const {
        qbcli::RunConfig merged;
        if (!config_path.empty()) qbcli::apply_config_file(merged, config_path);
        if (cmd.count("--n")) merged.n_sites = flags.n_sites;
        if (cmd.count("--kicks")) merged.kicks = flags.kicks;
        if (cmd.count("--beta")) merged.beta = flags.beta;
        if (cmd.count("--jth")) merged.j_th = flags.j_th;
        if (cmd.count("--hth")) merged.h_th = flags.h_th;
        if (cmd.count("--j")) merged.charger.j = flags.charger.j;
        if (cmd.count("--b")) merged.charger.b = flags.charger.b;
        if (cmd.count("--g")) merged.charger.g = flags.charger.g;
        if (cmd.count("--gamma-z")) merged.gamma_z = flags.gamma_z;
        if (cmd.count("--gamma")) merged.gamma = flags.gamma;
        if (cmd.count("--omega0")) merged.omega0 = flags.omega0;
        if (cmd.count("--engine")) merged.engine = qbcli::parse_engine(engine);
        if (cmd.count("--dt")) merged.dt = flags.dt;
        if (cmd.count("--ergotropy")) merged.ergotropy = flags.ergotropy;
        if (cmd.count("--out")) merged.out = flags.out;
        return merged;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kicked Ising-chain quantum battery simulator"};
    app.require_subcommand(1);

    std::function<int()> action;

    auto* trajectory = app.add_subcommand(
        "trajectory", "energy (and optionally ergotropy) trajectory as CSV");
    auto traj_cli = std::make_shared<TrajectoryCli>();
    traj_cli->add_options(*trajectory);
    trajectory->callback([&action, traj_cli, trajectory]() {
        action = [traj_cli, trajectory]() {
            return qbcli::cmd_trajectory(traj_cli->resolve(*trajectory));
        };
    });

    auto* sweep = app.add_subcommand("sweep", "Cartesian parameter sweep from a grid file");
    auto sweep_grid = std::make_shared<std::string>();
    auto sweep_out = std::make_shared<std::string>();
    auto sweep_jobs = std::make_shared<int>(0);
    sweep->add_option("--config", *sweep_grid, "JSON grid file (base config plus axes)")
        ->required();
    sweep->add_option("--out", *sweep_out, "output directory")->required();
    sweep->add_option("--jobs", *sweep_jobs, "worker threads (default: hardware concurrency)");
    sweep->callback([&action, sweep_grid, sweep_out, sweep_jobs]() {
        action = [sweep_grid, sweep_out, sweep_jobs]() {
            return qbcli::cmd_sweep(*sweep_grid, *sweep_out, *sweep_jobs);
        };
    });

    auto* validate = app.add_subcommand("validate", "cross-engine consistency checks");
    auto level = std::make_shared<std::string>("fast");
    validate->add_option("level", *level, "fast | full")
        ->check(CLI::IsMember({"fast", "full"}));
    validate->callback([&action, level]() {
        action = [level]() { return qbcli::cmd_validate(*level == "full"); };
    });

    auto* units = app.add_subcommand("units", "restore physical units for a device");
    struct UnitsArgs {
        double j_phys = 0.0, tau_phys = 0.0;
        double gamma_z = 0.0, gamma = 0.0, omega0 = 1.0, beta = 1.0, j_th = 0.5;
    };
    auto units_args = std::make_shared<UnitsArgs>();
    units->add_option("--j-phys", units_args->j_phys, "device Ising coupling in Hz")->required();
    units->add_option("--tau-phys", units_args->tau_phys, "kick period in seconds")->required();
    units->add_option("--gamma-z", units_args->gamma_z, "dimensionless dephasing rate");
    units->add_option("--gamma", units_args->gamma, "dimensionless thermal-channel rate");
    units->add_option("--omega0", units_args->omega0, "dimensionless level splitting");
    units->add_option("--beta", units_args->beta, "dimensionless inverse temperature");
    units->add_option("--jth", units_args->j_th, "dimensionless thermal coupling");
    units->callback([&action, units_args]() {
        action = [units_args]() {
            const UnitsArgs& a = *units_args;
            return qbcli::cmd_units(a.j_phys, a.tau_phys, a.gamma_z, a.gamma, a.omega0, a.beta,
                                    a.j_th);
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }

    try {
        return action();
    } catch (const qb::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const qb::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    }
}
