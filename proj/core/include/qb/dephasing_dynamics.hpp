#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qb/lattice_modes.hpp"
#include "qb/thermal_ensemble.hpp"

namespace qb {

// Which linear functional of the thermal chain a moment vector represents.
// Plain is the normalized Gibbs average tr(X e^{-beta H}) / Z; ParityWeighted
// inserts the fermion-parity string, tr(X P e^{-beta H}) / Z^P.
enum class MomentVariant { Plain, ParityWeighted };

// First moments of one momentum block: n = <c+_k c_k> (equal to the -k
// occupation on the k <-> -k symmetric functionals used here) and the pairing
// moment m = <i c_-k c_k> split into real and imaginary parts. Self-paired
// momenta carry only n.
struct ModeMoments {
    double n = 0.0;
    double re_m = 0.0;
    double im_m = 0.0;
};

// Thermal (t = 0) moments of one mode; k = 0 and k = pi are the self-paired
// momenta, everything else is a (k, -k) pair. im_m = 0 always (Gibbs states of
// the chain are stationary under it). ParityWeighted throws ConfigError when
// the mode's parity-weighted trace Z^P_k vanishes (beta = 0, a collapsed pair
// block, or a self-mode level crossing); the trajectory assembly substitutes
// the finite exclusion product instead of ever forming that moment.
ModeMoments gibbs_mode_moments(double k, const ThermalParams& params, MomentVariant variant);

// Planar rotation of every (re_m, im_m) pair by the kick angle 4b; every n is
// untouched.
struct KickRotation {
    double angle = 0.0;  // 4 b
};

// Affine generator of the inter-kick moment dynamics in homogeneous form. The
// matrix is (D+1) x (D+1) with D = 3 |pairs| + |self modes| and layout
// [n_pair..., re_m..., im_m..., n_self..., c]; the last row is zero, so the
// trailing coordinate c (the functional applied to the identity: 1 for
// normalized functionals, 0 for the degenerate parity channel) stays constant.
// Between kicks, with eps_k = 2 j cos k and delta_k = 2 j sin k,
//   dn_k/dt  =  2 delta_k im_k - 4 gamma_z (n_k - nbar),
//   dre_k/dt =  2 eps_k im_k - 4 gamma_z re_k,
//   dim_k/dt = -2 eps_k re_k + delta_k (c - 2 n_k) - 4 gamma_z im_k,
// where nbar = (2 sum_pairs n + sum_selfs n) / n_sites; self-modes couple only
// through the dephasing mean.
struct ModeGenerator {
    Eigen::MatrixXd matrix;
    int n_pairs = 0;
    int n_selfs = 0;
};

ModeGenerator ode_generator(const ModeGrid& grid, double j, double gamma_z);

// exp(interval * generator) left-composed with the kick rotation, reused every
// kick since the inter-kick system is autonomous.
struct PeriodPropagator {
    Eigen::MatrixXd map;
    int n_pairs = 0;
    int n_selfs = 0;
};

PeriodPropagator build_period_propagator(const ModeGenerator& generator, double interval,
                                         const KickRotation& kick);

// Moment vector of one thermal functional on one sector grid, in the
// ode_generator layout (length 3 |pairs| + |selfs| + 1 with the homogeneous
// trace coordinate last).
struct DephasingState {
    ModeGrid grid;
    MomentVariant variant = MomentVariant::Plain;
    Eigen::VectorXd x;
};

DephasingState thermal_moment_state(const ModeGrid& grid, const ThermalParams& params,
                                    MomentVariant variant);

// Fixed-step RK4 on dx/dt = generator * x; validation fallback for the matrix
// exponential. duration must be an integer multiple of dt.
Eigen::VectorXd propagate_rk4(const Eigen::MatrixXd& generator, Eigen::VectorXd x,
                              double duration, double dt);

// E_N(m) for m = 0..m_max under local-sigma^z dephasing at rate gamma_z,
// recombined over both parity sectors with their static thermal weights.
std::vector<double> dephasing_trajectory(int n_sites, long long m_max,
                                         const ChargerParams& charger,
                                         const ThermalParams& params, double gamma_z);

// Energy conditioned on a single parity sector (E_+ for Even, E_- for Odd).
std::vector<double> dephasing_sector_trajectory(int n_sites, long long m_max,
                                                const ChargerParams& charger,
                                                const ThermalParams& params, double gamma_z,
                                                Sector sector);

}  // namespace qb
