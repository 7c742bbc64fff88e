#include "qb/ergotropy.hpp"

#include <algorithm>
#include <cmath>

#include "qb/errors.hpp"

namespace qb {
namespace {

constexpr double kHermitianTol = 1e-8;
constexpr double kNegativityTol = 1e-8;
constexpr double kTraceTol = 1e-8;

void check_square(const Eigen::MatrixXcd& m, const char* what) {
    if (m.rows() == 0 || m.rows() != m.cols()) throw ConfigError(std::string(what) + " must be a nonempty square matrix");
}

bool is_hermitian(const Eigen::MatrixXcd& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= kHermitianTol;
}

// Raw state eigenvalues (ascending) -> descending populations with the
// documented sanitization: entries in [-1e-8, 0) clip to zero, the spectrum
// renormalizes, anything worse is an error. 'scale' returns the pre-clip sum.
Eigen::VectorXd sanitized_populations(const Eigen::VectorXd& lambda_asc, double* scale) {
    const Eigen::Index n = lambda_asc.size();
    if (!(lambda_asc[0] >= -kNegativityTol))
        throw NumericalError("state eigenvalue below -1e-8; not a density matrix");
    const double trace = lambda_asc.sum();
    if (!(std::abs(trace - 1.0) <= kTraceTol))
        throw NumericalError("state trace drifted beyond 1e-8");
    Eigen::VectorXd pops(n);
    for (Eigen::Index i = 0; i < n; ++i) pops[i] = std::max(lambda_asc[n - 1 - i], 0.0);
    const double sum = pops.sum();
    pops /= sum;
    if (scale) *scale = sum;
    return pops;
}

// True when the raw spectrum is already a distribution to near machine
// precision, so unsanitized traces of rho are interchangeable with it.
bool spectrum_clean(const Eigen::VectorXd& lambda_asc) {
    return lambda_asc[0] >= 0.0 && std::abs(lambda_asc.sum() - 1.0) <= 1e-13;
}

Eigen::VectorXd state_eigenvalues(const Eigen::MatrixXcd& rho) {
    check_square(rho, "state");
    if (!is_hermitian(rho)) throw NumericalError("state matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("state eigendecomposition failed");
    return es.eigenvalues();
}

// Active energy sum_i max(lambda_i, 0) <v_i|H0|v_i> / scale for states whose
// raw spectrum needs sanitizing; needs the eigenvectors.
template <typename LevelEnergy>
double sanitized_active_energy(const Eigen::MatrixXcd& rho, double scale, LevelEnergy&& level) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    if (es.info() != Eigen::Success) throw NumericalError("state eigendecomposition failed");
    double active = 0.0;
    for (Eigen::Index i = 0; i < rho.rows(); ++i) {
        const double p = es.eigenvalues()[i];
        if (p > 0.0) active += p * level(es.eigenvectors().col(i));
    }
    return active / scale;
}

double passive_energy(const Eigen::VectorXd& pops_desc, const Eigen::VectorXd& eps_asc) {
    return pops_desc.dot(eps_asc);
}

}  // namespace

SpectralDecomposition spectral_decomposition(const Eigen::MatrixXcd& matrix, SpectralOrder order) {
    check_square(matrix, "matrix");
    if (!is_hermitian(matrix)) throw ConfigError("matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix);
    if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
    SpectralDecomposition out;
    out.order = order;
    if (order == SpectralOrder::Ascending) {
        out.eigenvalues = es.eigenvalues();
        out.eigenvectors = es.eigenvectors();
    } else {
        out.eigenvalues = es.eigenvalues().reverse();
        out.eigenvectors = es.eigenvectors().rowwise().reverse();
    }
    return out;
}

Eigen::MatrixXcd PassiveState::matrix() const {
    return basis * populations.asDiagonal() * basis.adjoint();
}

PassiveState passive_state(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& h0) {
    check_square(h0, "battery Hamiltonian");
    if (rho.rows() != h0.rows()) throw ConfigError("state and battery dimensions differ");
    const SpectralDecomposition battery = spectral_decomposition(h0, SpectralOrder::Ascending);
    PassiveState p;
    p.populations = sanitized_populations(state_eigenvalues(rho), nullptr);
    p.energies = battery.eigenvalues;
    p.basis = battery.eigenvectors;
    p.energy = passive_energy(p.populations, p.energies);
    return p;
}

double ergotropy(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& h0) {
    check_square(h0, "battery Hamiltonian");
    if (rho.rows() != h0.rows()) throw ConfigError("state and battery dimensions differ");
    if (!is_hermitian(h0)) throw ConfigError("battery Hamiltonian is not Hermitian");
    const Eigen::VectorXd lambda = state_eigenvalues(rho);
    double scale = 1.0;
    const Eigen::VectorXd pops = sanitized_populations(lambda, &scale);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> bes(h0, Eigen::EigenvaluesOnly);
    if (bes.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
    double active;
    if (spectrum_clean(lambda)) {
        active = rho.cwiseProduct(h0.transpose()).sum().real();
    } else {
        active = sanitized_active_energy(rho, scale, [&](const Eigen::VectorXcd& v) {
            return v.dot(h0 * v).real();
        });
    }
    return active - passive_energy(pops, bes.eigenvalues());
}

double ergotropy(const Eigen::MatrixXcd& rho, const Eigen::VectorXd& h0_diag) {
    if (rho.rows() != h0_diag.size()) throw ConfigError("state and battery dimensions differ");
    const Eigen::VectorXd lambda = state_eigenvalues(rho);
    double scale = 1.0;
    const Eigen::VectorXd pops = sanitized_populations(lambda, &scale);
    Eigen::VectorXd eps = h0_diag;
    std::sort(eps.data(), eps.data() + eps.size());
    double active;
    if (spectrum_clean(lambda)) {
        active = rho.diagonal().real().dot(h0_diag);
    } else {
        active = sanitized_active_energy(rho, scale, [&](const Eigen::VectorXcd& v) {
            return h0_diag.dot(v.cwiseAbs2());
        });
    }
    return active - passive_energy(pops, eps);
}

double normalized_ergotropy(double w_m, double w_0, int n_sites) {
    if (n_sites < 1) throw ConfigError("chain needs at least 1 site");
    return (w_m - w_0) / n_sites;
}

}  // namespace qb
