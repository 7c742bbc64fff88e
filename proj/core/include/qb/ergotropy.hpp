#pragma once

#include <Eigen/Dense>

namespace qb {

enum class SpectralOrder { Ascending, Descending };

// Eigensystem of a Hermitian matrix with a declared eigenvalue ordering.
// Columns of eigenvectors align with eigenvalues.
struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXcd eigenvectors;
    SpectralOrder order = SpectralOrder::Ascending;
};

SpectralDecomposition spectral_decomposition(const Eigen::MatrixXcd& matrix, SpectralOrder order);

// Passive counterpart of a state: its populations sorted non-increasing,
// assigned index-wise to the battery levels sorted non-decreasing. Within a
// degenerate battery level the eigenvector choice is arbitrary; the passive
// energy does not depend on it.
struct PassiveState {
    Eigen::VectorXd populations;  // descending, unit sum
    Eigen::VectorXd energies;     // ascending battery eigenvalues
    Eigen::MatrixXcd basis;       // battery eigenvectors, aligned with energies
    double energy = 0.0;          // sum_j populations[j] * energies[j]
    Eigen::MatrixXcd matrix() const;
};

// State eigenvalues in [-1e-8, 0) are clipped to zero and the spectrum is
// renormalized; negativity or trace drift beyond 1e-8 raises NumericalError.
PassiveState passive_state(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& h0);

// Maximum work extractable by a unitary, tr(rho H0) - tr(rho_p H0). Inherits
// the state sanitization above; both traces are evaluated on the sanitized
// spectrum, so the result is nonnegative up to eigensolver rounding.
double ergotropy(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& h0);

// Same with a diagonal battery Hamiltonian (the library's H_0), skipping its
// dense eigendecomposition.
double ergotropy(const Eigen::MatrixXcd& rho, const Eigen::VectorXd& h0_diag);

// (W_m - W_0) / N.
double normalized_ergotropy(double w_m, double w_0, int n_sites);

}  // namespace qb
