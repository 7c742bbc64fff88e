#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "qb/lattice_modes.hpp"
#include "qb/thermal_ensemble.hpp"

namespace qb {

// Reference engine on the full 2^N-dimensional Hilbert space. Exponentially
// expensive by design; every analytic path in the library is cross-checked
// against it at small N.
//
// Basis convention: computational index a has site l stored in bit l, with
// bit value 0 meaning spin up (sigma^z = +1). All Hamiltonians below are real
// in this basis, so they are kept as real symmetric matrices or plain
// diagonals; states become complex under evolution.

// Operators of the kicked chain: Ising bonds H_I = J sum sigma^x_i sigma^x_{i+1}
// (periodic, bonds (i, i+1 mod N) for i = 0..N-1, which double-counts the
// single bond at N = 2 and drops the self-bond at N = 1), kick generator
// H_K = b sum sigma^z_i, battery H_0 = (g/2) sum sigma^z_i, initial-state
// chain H_th, and the global parity string P = prod sigma^z_i.
struct DenseOperators {
    int n_sites = 0;
    Eigen::MatrixXd h_i;    // real symmetric, off-diagonal XX bonds
    Eigen::MatrixXd h_th;   // real symmetric
    Eigen::VectorXd h_k;    // diagonal
    Eigen::VectorXd h_0;    // diagonal
    Eigen::VectorXd parity; // diagonal, entries +-1
};

// n_sites is capped at 12 (a 4096^2 complex state is ~270 MB); routine use
// stays at n_sites <= 10.
DenseOperators build_hamiltonians(int n_sites, const ChargerParams& charger,
                                  const ThermalParams& thermal);

// Site-local noise rates. The thermal channel attaches the raising jump at
// rate gamma_plus = gamma n_th and the lowering jump at gamma_minus =
// gamma (n_th + 1), n_th = 1/(e^{beta omega0} - 1), so that
// gamma_plus / gamma_minus = e^{-beta omega0} (detailed balance). beta here is
// the bath temperature used to fix the rates; beta = 0 with gamma > 0 diverges
// and is rejected, beta = inf gives pure decay (n_th = 0).
struct DissipationChannels {
    double gamma_z = 0.0;
    double gamma = 0.0;
    double omega0 = 1.0;
    double beta = 1.0;
    double gamma_plus = 0.0;
    double gamma_minus = 0.0;
    double n_th = 0.0;
    bool any() const { return gamma_z > 0.0 || gamma > 0.0; }
};

DissipationChannels make_channels(double gamma_z, double gamma, double omega0, double beta);

// T1 = 1/(gamma_plus + gamma_minus), T_phi = 1/(2 gamma_z),
// 1/T2 = 1/(2 T1) + 1/T_phi; +infinity when the corresponding rates vanish.
// gamma0 is the bare rate in the equivalent form 1/T1 = gamma0 coth(beta omega0 / 2).
struct CoherenceTimes {
    double t1 = 0.0;
    double t2 = 0.0;
    double t_phi = 0.0;
    double gamma0 = 0.0;
};

CoherenceTimes coherence_times(const DissipationChannels& channels);

// e^{-beta H}/Z by eigendecomposition, spectrum shifted by its minimum before
// exponentiation. beta = inf returns the normalized projector onto the ground
// space (eigenvalues within 1e-9 * max(1, |min|) of the minimum).
Eigen::MatrixXcd gibbs_state(const Eigen::MatrixXd& h, double beta);

// Full Lindblad right-hand side
//   -i[H, rho] + gamma_z sum_i (sigma^z_i rho sigma^z_i - rho)
//   + sum_{s in +-} gamma_s sum_i (sigma^s_i rho sigma^s_i^dag
//                                  - {sigma^s_i^dag sigma^s_i, rho} / 2)
// for an arbitrary dense H. The site count is inferred from the dimension.
Eigen::MatrixXcd lindblad_rhs(const Eigen::MatrixXcd& rho, const Eigen::MatrixXd& h,
                              const DissipationChannels& channels);

// Fixed-step RK4 over the autonomous Lindblad generator. dt must divide the
// duration to ~1e-9. Trace and Hermiticity drifts beyond 1e-8 raise
// NumericalError; nothing is renormalized silently.
Eigen::MatrixXcd evolve_interval(const Eigen::MatrixXcd& rho, const Eigen::MatrixXd& h,
                                 const DissipationChannels& channels, double dt,
                                 double duration);

// Conjugation by the diagonal unitary e^{-i H_K}, elementwise phases.
Eigen::MatrixXcd apply_kick(const Eigen::MatrixXcd& rho, const Eigen::VectorXd& h_k);

// Re tr(O rho); an imaginary residue above 1e-10 raises NumericalError.
double measure(const Eigen::MatrixXcd& rho, const Eigen::MatrixXd& o);
double measure_diagonal(const Eigen::MatrixXcd& rho, const Eigen::VectorXd& o_diag);

struct DenseTrajectory {
    std::vector<double> energy;  // tr(rho H_0) at m = 0..m_max, post-kick
    std::vector<double> parity;  // tr(rho P) at the same times
    std::vector<Eigen::MatrixXcd> states;  // filled only when record_states is set
};

struct DenseTrajectoryOptions {
    double dt = 1e-2;
    bool record_states = false;
    // Called at every record point (m = 0 included) with the current state.
    std::function<void(long long m, const Eigen::MatrixXcd& rho)> observer;
};

// Gibbs state of h_th, then m_max repetitions of [one unit of continuous
// evolution under H_I + channels, kick]. Kicks are instantaneous: dissipation
// acts only in the continuous segments. With all rates zero the interval
// propagator is the exact eigendecomposition of H_I instead of RK4.
DenseTrajectory dense_trajectory(int n_sites, long long m_max, const ChargerParams& charger,
                                 const ThermalParams& thermal,
                                 const DissipationChannels& channels,
                                 const DenseTrajectoryOptions& options = {});

}  // namespace qb
