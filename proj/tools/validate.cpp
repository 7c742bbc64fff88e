#include "validate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <qb/dense_oracle.hpp>
#include <qb/dephasing_dynamics.hpp>
#include <qb/ergotropy.hpp>
#include <qb/lattice_modes.hpp>
#include <qb/thermal_ensemble.hpp>

namespace qbcli {

namespace {

using Eigen::Matrix2cd;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using qb::ChargerParams;
using qb::ThermalParams;

struct CheckRow {
    std::string name;
    double err = 0.0;
    double tol = 0.0;
};

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

std::vector<double> normalized(const std::vector<double>& energy, int n_sites) {
    std::vector<double> de(energy.size());
    for (std::size_t i = 0; i < energy.size(); ++i)
        de[i] = qb::normalized_energy(energy[i], energy[0], n_sites);
    return de;
}

std::size_t argmax(const std::vector<double>& v) {
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

void check_local_limit(std::vector<CheckRow>& rows) {
    const ChargerParams charger;
    double worst = 0.0;
    for (int n : {4, 6})
        for (double beta : {0.5, 2.0}) {
            const auto traj = qb::thermal_energy_trajectory(n, 2 * n, charger, {0.0, 1.0, beta});
            for (long long m = 0; m <= 2 * n; ++m)
                worst = std::max(worst,
                                 std::abs(traj[m] - qb::local_limit_energy(n, m, charger.g, 1.0, beta)));
        }
    rows.push_back({"local limit vs closed form (n=4,6)", worst, 1e-12});
}

void closed_dense_row(std::vector<CheckRow>& rows, const std::vector<int>& sizes,
                      const std::vector<double>& betas, const std::string& name) {
    const ChargerParams charger;
    const auto channels = qb::make_channels(0.0, 0.0, 1.0, 1.0);
    double worst = 0.0;
    for (int n : sizes)
        for (double beta : betas) {
            const ThermalParams thermal{0.5, 1.0, beta};
            const auto analytic = normalized(
                qb::thermal_energy_trajectory(n, 2 * n, charger, thermal), n);
            const auto dense = normalized(
                qb::dense_trajectory(n, 2 * n, charger, thermal, channels).energy, n);
            worst = std::max(worst, max_abs_diff(analytic, dense));
        }
    rows.push_back({name, worst, 1e-8});
}

void dephasing_dense_row(std::vector<CheckRow>& rows, const std::vector<int>& sizes,
                         const std::vector<double>& rates, long long kicks,
                         const std::string& name) {
    const ChargerParams charger;
    const ThermalParams thermal{0.5, 1.0, 2.0};
    double worst = 0.0;
    for (int n : sizes)
        for (double gamma_z : rates) {
            const auto channels = qb::make_channels(gamma_z, 0.0, 1.0, thermal.beta);
            qb::DenseTrajectoryOptions options;
            options.dt = 1e-3;
            const auto dense =
                qb::dense_trajectory(n, kicks, charger, thermal, channels, options).energy;
            const auto ode = qb::dephasing_trajectory(n, kicks, charger, thermal, gamma_z);
            worst = std::max(worst, max_abs_diff(dense, ode));
        }
    rows.push_back({name, worst, 1e-6});
}

void check_single_qubit(std::vector<CheckRow>& rows) {
    const MatrixXd h = MatrixXd::Zero(2, 2);

    const double gamma_z = 0.3;
    MatrixXcd plus(2, 2);
    plus << 0.5, 0.5, 0.5, 0.5;
    const MatrixXcd dephased =
        qb::evolve_interval(plus, h, qb::make_channels(gamma_z, 0.0, 1.0, 1.0), 1e-3, 1.0);
    const double coherence_err =
        std::abs(dephased(0, 1) - 0.5 * std::exp(-2.0 * gamma_z));
    rows.push_back({"single-qubit dephasing decay", coherence_err, 1e-8});

    const double gamma = 0.4, beta = 1.2, omega0 = 1.0;
    const auto channels = qb::make_channels(0.0, gamma, omega0, beta);
    MatrixXcd rho = MatrixXcd::Zero(2, 2);
    rho(0, 0) = 0.2;
    rho(1, 1) = 0.8;
    const MatrixXcd relaxed = qb::evolve_interval(rho, h, channels, 1e-3, 1.0);
    const double p_ss = 0.5 * (1.0 - std::tanh(0.5 * beta * omega0));
    const double rate = channels.gamma_plus + channels.gamma_minus;
    const double expected = p_ss + (0.2 - p_ss) * std::exp(-rate);
    rows.push_back({"single-qubit thermal relaxation", std::abs(relaxed(0, 0).real() - expected),
                    1e-8});
}

void check_floquet_power(std::vector<CheckRow>& rows, int cases) {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> angle(1e-3, 3.14);
    std::uniform_real_distribution<double> coupling(-2.0, 2.0);
    std::uniform_int_distribution<long long> kicks(0, 1000);
    double worst = 0.0;
    for (int c = 0; c < cases; ++c) {
        const double k = angle(rng), j = coupling(rng), b = coupling(rng);
        const long long m = kicks(rng);
        const auto mode = qb::floquet_one_kick(k, j, b);
        Matrix2cd one;
        one << std::conj(mode.alpha), -std::conj(mode.beta), mode.beta, mode.alpha;
        Matrix2cd power = Matrix2cd::Identity();
        for (long long i = 0; i < m; ++i) power = one * power;
        const auto fast = qb::floquet_power(mode, m);
        worst = std::max({worst, std::abs(fast.alpha - power(1, 1)),
                          std::abs(fast.beta - power(1, 0))});
    }
    rows.push_back({"floquet power vs repeated multiplication", worst, 1e-9});
}

void check_ergotropy(std::vector<CheckRow>& rows) {
    const int n = 4;
    const auto ops = qb::build_hamiltonians(n, ChargerParams{}, ThermalParams{0.5, 1.0, 1.0});
    const MatrixXd h0 = MatrixXd(ops.h_0.asDiagonal());

    double gibbs_worst = 0.0;
    for (double beta : {0.0, 1.0, std::numeric_limits<double>::infinity()})
        gibbs_worst =
            std::max(gibbs_worst, std::abs(qb::ergotropy(qb::gibbs_state(h0, beta), ops.h_0)));
    rows.push_back({"ergotropy of Gibbs states", gibbs_worst, 1e-10});

    std::mt19937 rng(777);
    std::normal_distribution<double> gauss;
    const auto dim = static_cast<Eigen::Index>(1) << n;
    MatrixXcd a(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col)
        for (Eigen::Index row = 0; row < dim; ++row) a(row, col) = {gauss(rng), gauss(rng)};
    MatrixXcd rho = a * a.adjoint();
    rho /= rho.trace().real();

    const double w = qb::ergotropy(rho, ops.h_0);
    const double base = qb::measure(rho, h0);
    double excess = std::max(0.0, -w);
    for (int trial = 0; trial < 100; ++trial) {
        for (Eigen::Index col = 0; col < dim; ++col)
            for (Eigen::Index row = 0; row < dim; ++row) a(row, col) = {gauss(rng), gauss(rng)};
        const MatrixXcd u = Eigen::HouseholderQR<MatrixXcd>(a).householderQ();
        const double extracted = base - qb::measure(MatrixXcd(u * rho * u.adjoint()), h0);
        excess = std::max(excess, extracted - w);
    }
    rows.push_back({"ergotropy bounds random unitary extraction", excess, 1e-8});
}

void check_dense_charging_regression(std::vector<CheckRow>& rows) {
    const int n = 10;
    const ChargerParams charger;
    const ThermalParams thermal{0.5, 1.0, 2.0};
    const auto ops = qb::build_hamiltonians(n, charger, thermal);
    std::vector<double> work;
    qb::DenseTrajectoryOptions options;
    options.dt = 1e-2;
    options.observer = [&](long long, const MatrixXcd& rho) {
        work.push_back(qb::ergotropy(rho, ops.h_0));
    };
    const auto energy =
        qb::dense_trajectory(n, 10, charger, thermal, qb::make_channels(0.0, 0.01, 1.0, thermal.beta),
                             options)
            .energy;
    const auto de = normalized(energy, n);
    std::vector<double> dw(work.size());
    for (std::size_t m = 0; m < work.size(); ++m)
        dw[m] = qb::normalized_ergotropy(work[m], work[0], n);

    double excess = 0.0;
    for (std::size_t m = 0; m < de.size(); ++m) excess = std::max(excess, dw[m] - de[m]);
    rows.push_back({"work bounded by injected energy (n=10, thermal channel)", excess, 1e-9});

    const double peak_err = std::abs(static_cast<double>(argmax(de)) - 5.0) +
                            std::abs(static_cast<double>(argmax(dw)) - 5.0);
    rows.push_back({"charging peak at half the cycle (n=10)", peak_err, 0.5});
}

}  // namespace

int cmd_validate(bool full) {
    using clock = std::chrono::steady_clock;
    std::vector<std::function<void(std::vector<CheckRow>&)>> checks;
    checks.push_back(check_local_limit);
    checks.push_back([](std::vector<CheckRow>& rows) {
        closed_dense_row(rows, {4, 6}, {0.5, 2.0}, "analytic vs dense, closed (n=4,6)");
    });
    checks.push_back([](std::vector<CheckRow>& rows) {
        dephasing_dense_row(rows, {4, 6}, {0.01}, 8, "dephasing vs dense Lindblad (n=4,6)");
    });
    checks.push_back(check_single_qubit);
    checks.push_back([](std::vector<CheckRow>& rows) { check_floquet_power(rows, 2000); });
    checks.push_back(check_ergotropy);
    if (full) {
        checks.push_back([](std::vector<CheckRow>& rows) {
            closed_dense_row(rows, {8}, {0.0, 0.5, 2.0, 10.0}, "analytic vs dense, closed (n=8)");
        });
        checks.push_back([](std::vector<CheckRow>& rows) {
            dephasing_dense_row(rows, {6}, {0.005, 0.05}, 12, "dephasing vs dense Lindblad (n=6, deep)");
        });
        checks.push_back(check_dense_charging_regression);
    }

    std::printf("%-52s %12s %10s %8s  %s\n", "check", "max error", "tolerance", "time", "status");
    int failures = 0;
    for (const auto& check : checks) {
        std::vector<CheckRow> rows;
        const auto start = clock::now();
        try {
            check(rows);
        } catch (const std::exception& e) {
            rows.push_back({std::string("threw: ") + e.what(), std::nan(""), 0.0});
        }
        const double seconds = std::chrono::duration<double>(clock::now() - start).count();
        for (const auto& row : rows) {
            const bool pass = row.err <= row.tol;  // NaN fails
            if (!pass) ++failures;
            std::printf("%-52s %12.3e %10.1e %7.2fs  %s\n", row.name.c_str(), row.err, row.tol,
                        seconds / rows.size(), pass ? "pass" : "FAIL");
        }
    }
    if (failures == 0) {
        std::printf("validate %s: all checks within tolerance\n", full ? "full" : "fast");
        return 0;
    }
    std::printf("validate %s: %d check(s) FAILED\n", full ? "full" : "fast", failures);
    return 3;
}

}  // namespace qbcli
