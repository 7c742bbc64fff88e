#include "units.hpp"

#include <cmath>
#include <cstdio>

#include <qb/dense_oracle.hpp>
#include <qb/errors.hpp>

namespace qbcli {

namespace {

constexpr double kHbar = 1.054571817e-34;       // J s
constexpr double kBoltzmann = 1.380649e-23;     // J / K

void line(const char* label, double dimensionless, double physical, const char* unit) {
    std::printf("%-18s %.17g  ->  %.17g %s\n", label, dimensionless, physical, unit);
}

}  // namespace

int cmd_units(double j_phys, double tau_phys, double gamma_z, double gamma, double omega0,
              double beta, double j_th) {
    if (!(j_phys > 0.0)) throw qb::ConfigError("j-phys must be a positive frequency in Hz");
    if (!(tau_phys > 0.0)) throw qb::ConfigError("tau-phys must be a positive time in seconds");
    if (gamma_z < 0.0 || gamma < 0.0) throw qb::ConfigError("rates must be >= 0");
    if (j_th < 0.0) throw qb::ConfigError("jth must be >= 0");
    if (std::isnan(beta) || beta < 0.0) throw qb::ConfigError("beta must be >= 0");

    // Channel bookkeeping (and the beta = 0 with gamma > 0 rejection) is the
    // library's; this command only rescales its numbers.
    const auto channels = qb::make_channels(gamma_z, gamma, omega0, beta);
    const auto times = qb::coherence_times(channels);
    const double rate_unit = 1.0 / tau_phys;
    const double j_th_phys = j_th * rate_unit;

    std::printf("%-18s %.17g s\n", "kick period", tau_phys);
    std::printf("%-18s %.17g Hz\n", "rate unit", rate_unit);
    std::printf("%-18s %.17g Hz  ->  dimensionless J = %.17g\n", "charger coupling", j_phys,
                j_phys * tau_phys);
    line("gamma_z", gamma_z, gamma_z * rate_unit, "Hz");
    line("gamma", gamma, gamma * rate_unit, "Hz");
    line("gamma_plus", channels.gamma_plus, channels.gamma_plus * rate_unit, "Hz");
    line("gamma_minus", channels.gamma_minus, channels.gamma_minus * rate_unit, "Hz");
    line("T1", times.t1, times.t1 * tau_phys, "s");
    line("T2", times.t2, times.t2 * tau_phys, "s");
    line("T_phi", times.t_phi, times.t_phi * tau_phys, "s");
    line("thermal coupling", j_th, j_th_phys, "Hz");
    std::printf("%-18s beta = %.17g  ->  T_phys = %.17g K\n", "temperature", beta,
                kHbar * j_th_phys / (kBoltzmann * beta));
    return 0;
}

}  // namespace qbcli
