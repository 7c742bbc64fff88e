#pragma once

#include <vector>

#include "qb/lattice_modes.hpp"
#include "qb/signed_log.hpp"

namespace qb {

// Initial-state chain parameters; beta = +infinity is the ground-projection limit
// and is handled by a dedicated exact path (no large-beta approximation).
struct ThermalParams {
    double j_th = 0.5;
    double h_th = 1.0;
    double beta = 1.0;
    bool beta_is_infinite() const;
};

enum class ModeKind { Pair, Self };

// Per-mode partition traces. For a (k, -k) pair over its four-dimensional block:
//   z = 2 e^{-beta eps}(cosh beta E + 1),  z_p = 2 e^{-beta eps}(cosh beta E - 1).
// For a self-paired momentum: z = 1 + e^{-beta eps}, z_p = 1 - e^{-beta eps}.
// Finite beta only; the beta = inf limit never forms these products.
struct ModePartition {
    SignedLog z;
    SignedLog z_p;
};

ModePartition mode_partition(double k, ModeKind kind, const ThermalParams& params);

struct SectorWeights {
    double w_plus = 0.0;
    double w_minus = 0.0;
};

// Statistical weights of the even/odd fermion-parity sectors,
//   Z_+ = (Z_ap + Z^P_ap)/2 over the antiperiodic grid,
//   Z_- = (Z_p  - Z^P_p )/2 over the periodic grid,  w_+- = Z_+- / (Z_+ + Z_-).
SectorWeights sector_weights(int n_sites, const ThermalParams& params);

// Parity-sector weights under the thermal channel,
//   w_+-(t) = [1 + (2 w_+-(0) - 1) e^{-N (gamma_+ + gamma_-) t}] / 2.
SectorWeights parity_weight_decay(double w_plus_initial, int n_sites, double gamma_plus,
                                  double gamma_minus, double t);

// Single-mode energy terms after m kicks: the plain average
//   A_k(m) = 2 tanh(beta E_k / 2) [eps_k c_z(m) + delta_k c_x(m)] / E_k
// and the finite product B_k(m) Z^P_k (stored as a signed log product; for pairs
// it is 4 e^{-beta eps} sinh(beta E) times the same bracket, for self-modes it is
// exactly Z_k with A_k = tanh(beta eps_k / 2), both constant in m).
struct SingleModeTerms {
    double a = 0.0;
    SignedLog b_zp;
};

SingleModeTerms single_mode_terms(double k, ModeKind kind, long long m,
                                  const ChargerParams& charger, const ThermalParams& params);

// Battery energy after m kicks from the parity-resolved ensemble,
//   E_N(m) = (g / 4Z) sum_sectors sum_k [A_k(m) Z_bc + sigma B_k(m) Z^P_bc].
double thermal_energy(int n_sites, long long m, const ChargerParams& charger,
                      const ThermalParams& params);

// Energies for m = 0..m_max sharing the per-mode static data.
std::vector<double> thermal_energy_trajectory(int n_sites, long long m_max,
                                              const ChargerParams& charger,
                                              const ThermalParams& params);

// Closed form at j_th = 0 (uncoupled chain), m^z = tanh(beta h_th):
// even N: -g N m^z / 2 at m = 0 mod N, +g N (m^z)^{N-1} / 2 at m = N/2 mod N, else 0;
// odd N only keeps the m = 0 mod N value.
double local_limit_energy(int n_sites, long long m, double g, double h_th, double beta);

// (E_m - E_0) / N.
double normalized_energy(double e_m, double e_0, int n_sites);

// Per-site energy in the N -> infinity limit: (g / 4 pi) integral_0^pi A_k(m) dk
// by adaptive Gauss-Kronrod 7/15 to absolute tolerance 1e-10.
double thermodynamic_limit_energy(long long m, const ChargerParams& charger,
                                  const ThermalParams& params);

}  // namespace qb
