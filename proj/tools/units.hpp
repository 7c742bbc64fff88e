#pragma once

namespace qbcli {

// Translate a dimensionless run into laboratory numbers for a device whose
// Ising coupling is j_phys (Hz) and whose kick period is tau_phys (seconds).
// The kick period is the time unit, so every dimensionless rate divides by
// tau_phys; the printed temperature restores T_phys = hbar J_th_phys / (k_B beta)
// with J_th_phys = j_th / tau_phys. Writes the report to stdout, returns 0.
int cmd_units(double j_phys, double tau_phys, double gamma_z, double gamma, double omega0,
              double beta, double j_th);

}  // namespace qbcli
