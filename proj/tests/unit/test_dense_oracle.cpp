#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "qb/dense_oracle.hpp"
#include "qb/errors.hpp"
#include "qb/thermal_ensemble.hpp"

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using qb::ChargerParams;
using qb::complexd;
using qb::DissipationChannels;
using qb::Sector;
using qb::ThermalParams;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

ThermalParams thermal(double j_th, double h_th, double beta) {
    ThermalParams p;
    p.j_th = j_th;
    p.h_th = h_th;
    p.beta = beta;
    return p;
}

ChargerParams charger(double j, double b, double g = 1.0) {
    ChargerParams c;
    c.j = j;
    c.b = b;
    c.g = g;
    return c;
}

ChargerParams self_dual() { return ChargerParams{}; }

// Independent operator construction by Kronecker products. Site l sits in bit
// l of the basis index, so the factor order is I x ... x op x ... x I with op
// in the l-th slot from the right.
MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
    MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

MatrixXcd site_operator(const MatrixXcd& op, int site, int n_sites) {
    MatrixXcd out = MatrixXcd::Identity(1, 1);
    for (int l = n_sites - 1; l >= 0; --l)
        out = kron(out, l == site ? op : MatrixXcd::Identity(2, 2));
    return out;
}

MatrixXcd pauli_x() {
    MatrixXcd s(2, 2);
    s << 0, 1, 1, 0;
    return s;
}

MatrixXcd pauli_z() {
    MatrixXcd s(2, 2);
    s << 1, 0, 0, -1;
    return s;
}

// Random Hermitian positive unit-trace matrix.
MatrixXcd random_state(Eigen::Index dim, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss;
    MatrixXcd a(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j)
        for (Eigen::Index i = 0; i < dim; ++i) a(i, j) = complexd(gauss(rng), gauss(rng));
    MatrixXcd rho = a * a.adjoint();
    return rho / rho.trace().real();
}

double max_abs(const MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("hamiltonians match explicit kronecker products") {
    const auto ch = charger(0.7, -0.4, 1.3);
    const auto th = thermal(0.6, 0.9, 1.0);
    for (int n : {1, 2, 3, 4}) {
        INFO("n=" << n);
        const auto ops = qb::build_hamiltonians(n, ch, th);
        const Eigen::Index dim = Eigen::Index{1} << n;
        MatrixXcd hi = MatrixXcd::Zero(dim, dim);
        MatrixXcd hth = MatrixXcd::Zero(dim, dim);
        MatrixXcd hk = MatrixXcd::Zero(dim, dim);
        MatrixXcd h0 = MatrixXcd::Zero(dim, dim);
        MatrixXcd parity = MatrixXcd::Identity(dim, dim);
        for (int i = 0; i < n; ++i) {
            if (n > 1) {
                const MatrixXcd xx =
                    site_operator(pauli_x(), i, n) * site_operator(pauli_x(), (i + 1) % n, n);
                hi += ch.j * xx;
                hth += th.j_th * xx;
            }
            const MatrixXcd z = site_operator(pauli_z(), i, n);
            hth += th.h_th * z;
            hk += ch.b * z;
            h0 += 0.5 * ch.g * z;
            parity = parity * z;
        }
        // The library accumulates diagonals in a different order than the
        // per-site Kronecker sums here, so allow rounding at the last ulp.
        CHECK(max_abs(ops.h_i.cast<complexd>() - hi) <= 1e-14);
        CHECK(max_abs(ops.h_th.cast<complexd>() - hth) <= 1e-14);
        CHECK(max_abs(MatrixXcd(ops.h_k.cast<complexd>().asDiagonal()) - hk) <= 1e-14);
        CHECK(max_abs(MatrixXcd(ops.h_0.cast<complexd>().asDiagonal()) - h0) <= 1e-14);
        CHECK(max_abs(MatrixXcd(ops.parity.cast<complexd>().asDiagonal()) - parity) <= 1e-14);
    }
}

TEST_CASE("battery spectrum is the binomial ladder") {
    const auto ops = qb::build_hamiltonians(2, charger(0.3, 0.1, 1.0), thermal(0.5, 1.0, 1.0));
    VectorXd e = ops.h_0;
    std::sort(e.data(), e.data() + e.size());
    const double want[] = {-1.0, 0.0, 0.0, 1.0};
    for (int i = 0; i < 4; ++i) CHECK(e(i) == doctest::Approx(want[i]).epsilon(1e-15));
}

TEST_CASE("thermal chain spectrum matches the momentum-space reconstruction") {
    for (int n : {2, 3, 4, 5, 6}) {
        for (auto [j_th, h_th] : {std::pair{0.5, 1.0}, std::pair{1.0, 0.3}, std::pair{0.8, -0.6}}) {
            INFO("n=" << n << " j_th=" << j_th << " h_th=" << h_th);
            const auto ops = qb::build_hamiltonians(n, self_dual(), thermal(j_th, h_th, 1.0));
            Eigen::SelfAdjointEigenSolver<MatrixXd> es(ops.h_th);

            // Fold per-mode fermionic levels sector by sector, keeping only the
            // states whose total fermion parity matches the sector.
            std::vector<double> spectrum;
            for (Sector sector : {Sector::Even, Sector::Odd}) {
                const int target = sector == Sector::Even ? 1 : -1;
                const auto grid = qb::build_grid(n, sector);
                std::vector<std::pair<double, int>> states{{0.0, 1}};
                const auto extend = [&](const std::vector<std::pair<double, int>>& levels) {
                    std::vector<std::pair<double, int>> next;
                    next.reserve(states.size() * levels.size());
                    for (const auto& [e0, p0] : states)
                        for (const auto& [e1, p1] : levels) next.emplace_back(e0 + e1, p0 * p1);
                    states.swap(next);
                };
                for (double k : grid.pairs) {
                    const auto bdg = qb::bdg_params(k, j_th, h_th);
                    extend({{bdg.epsilon - bdg.e, 1},
                            {bdg.epsilon, -1},
                            {bdg.epsilon, -1},
                            {bdg.epsilon + bdg.e, 1}});
                }
                for (double k : grid.self_modes) {
                    const auto bdg = qb::bdg_params(k, j_th, h_th);
                    extend({{0.0, 1}, {bdg.epsilon, -1}});
                }
                for (const auto& [e, p] : states)
                    if (p == target) spectrum.push_back(e + n * h_th);
            }
            REQUIRE(static_cast<Eigen::Index>(spectrum.size()) == es.eigenvalues().size());
            std::sort(spectrum.begin(), spectrum.end());
            for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
                INFO("level " << i);
                CHECK(std::abs(spectrum[i] - es.eigenvalues()(i)) <= 1e-10);
            }
        }
    }
}

TEST_CASE("gibbs state limits and parity expectation") {
    const auto ops = qb::build_hamiltonians(4, self_dual(), thermal(0.5, 1.0, 2.0));

    const MatrixXcd uniform = qb::gibbs_state(ops.h_th, 0.0);
    CHECK(max_abs(uniform - MatrixXcd::Identity(16, 16) / 16.0) <= 1e-14);

    for (double beta : {0.5, 2.0, 10.0}) {
        const MatrixXcd rho = qb::gibbs_state(ops.h_th, beta);
        CHECK(std::abs(rho.trace().real() - 1.0) <= 1e-12);
        const auto weights = qb::sector_weights(4, thermal(0.5, 1.0, beta));
        const double p = qb::measure_diagonal(rho, ops.parity);
        INFO("beta=" << beta);
        CHECK(std::abs(p - (weights.w_plus - weights.w_minus)) <= 1e-10);
    }

    // Disordered chain (h > j): unique ground state, projector is pure and
    // reproduces the minimum energy.
    const MatrixXcd ground = qb::gibbs_state(ops.h_th, kInf);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(ops.h_th);
    CHECK(std::abs(ground.trace().real() - 1.0) <= 1e-12);
    CHECK(std::abs((ground * ground - ground).cwiseAbs().maxCoeff()) <= 1e-12);
    CHECK(std::abs(qb::measure(ground, ops.h_th) - es.eigenvalues()(0)) <= 1e-10);

    // Exactly degenerate pair of ground states at h = 0: rank-2 projector.
    const auto ops0 = qb::build_hamiltonians(4, self_dual(), thermal(1.0, 0.0, 2.0));
    const MatrixXcd g2 = qb::gibbs_state(ops0.h_th, kInf);
    CHECK(std::abs(g2.trace().real() - 1.0) <= 1e-12);
    CHECK(std::abs((g2 * g2 - g2 / 2.0).cwiseAbs().maxCoeff()) <= 1e-12);
}

TEST_CASE("lindblad generator identities") {
    const auto deph = qb::make_channels(0.3, 0.0, 1.0, 1.0);

    SUBCASE("maximally mixed state is a dephasing fixed point") {
        const auto ops = qb::build_hamiltonians(3, self_dual(), thermal(0.5, 1.0, 1.0));
        const MatrixXcd rho = MatrixXcd::Identity(8, 8) / 8.0;
        CHECK(max_abs(qb::lindblad_rhs(rho, ops.h_i, deph)) <= 1e-15);
    }

    SUBCASE("derivative is traceless and Hermitian") {
        const auto ops = qb::build_hamiltonians(3, self_dual(), thermal(0.5, 1.0, 1.0));
        const auto ch = qb::make_channels(0.1, 0.2, 1.0, 1.5);
        const MatrixXcd rho = random_state(8, 11);
        const MatrixXcd d = qb::lindblad_rhs(rho, ops.h_i, ch);
        CHECK(std::abs(d.trace()) <= 1e-12);
        CHECK(max_abs(d - d.adjoint()) <= 1e-13);
    }

    SUBCASE("single-qubit dephasing damps the coherence at 2 gamma_z") {
        MatrixXcd rho(2, 2);
        rho << 0.3, complexd(0.2, -0.1), complexd(0.2, 0.1), 0.7;
        const MatrixXcd d = qb::lindblad_rhs(rho, MatrixXd::Zero(2, 2), deph);
        CHECK(std::abs(d(0, 1) - (-2.0 * 0.3) * rho(0, 1)) <= 1e-15);
        CHECK(std::abs(d(0, 0)) <= 1e-15);
    }

    SUBCASE("single-qubit thermal rates pull toward detailed balance") {
        const auto ch = qb::make_channels(0.0, 0.2, 1.0, 1.0);
        MatrixXcd rho(2, 2);
        rho << 0.4, 0.0, 0.0, 0.6;
        const MatrixXcd d = qb::lindblad_rhs(rho, MatrixXd::Zero(2, 2), ch);
        // population flow: d rho_00 = gamma_+ rho_11 - gamma_- rho_00
        const double want = ch.gamma_plus * 0.6 - ch.gamma_minus * 0.4;
        CHECK(std::abs(d(0, 0).real() - want) <= 1e-15);
        CHECK(std::abs(d(1, 1).real() + want) <= 1e-15);
    }
}

TEST_CASE("parity derivative carries the exact string correction") {
    // d<P>/dt = -N(gamma_+ + gamma_-)<P> + (gamma_+ - gamma_-) sum_l <prod_{j != l} sigma^z_j>.
    const int n = 4;
    const auto ops = qb::build_hamiltonians(n, self_dual(), thermal(0.5, 1.0, 2.0));
    const auto ch = qb::make_channels(0.0, 0.05, 1.0, 2.0);
    for (unsigned seed : {1u, 2u}) {
        const MatrixXcd rho = seed == 1 ? qb::gibbs_state(ops.h_th, 2.0) : random_state(16, seed);
        const MatrixXcd d = qb::lindblad_rhs(rho, ops.h_i, ch);
        const double got = (ops.parity.cast<complexd>().asDiagonal() * d).trace().real();
        double strings = 0.0;
        for (int l = 0; l < n; ++l) {
            VectorXd rest(16);
            for (int a = 0; a < 16; ++a)
                rest(a) = ops.parity(a) * (1.0 - 2.0 * ((a >> l) & 1));
            strings += qb::measure_diagonal(rho, rest);
        }
        const double want = -n * (ch.gamma_plus + ch.gamma_minus) *
                                qb::measure_diagonal(rho, ops.parity) +
                            (ch.gamma_plus - ch.gamma_minus) * strings;
        INFO("seed=" << seed);
        CHECK(std::abs(got - want) <= 1e-12);
    }
}

TEST_CASE("rk4 interval matches the eigendecomposition propagator") {
    const auto ops = qb::build_hamiltonians(4, self_dual(), thermal(0.5, 1.0, 2.0));
    const MatrixXcd rho = qb::gibbs_state(ops.h_th, 2.0);
    const auto none = qb::make_channels(0.0, 0.0, 1.0, 1.0);
    const MatrixXcd got = qb::evolve_interval(rho, ops.h_i, none, 1e-3, 1.0);

    Eigen::SelfAdjointEigenSolver<MatrixXd> es(ops.h_i);
    Eigen::VectorXcd phases(16);
    for (int i = 0; i < 16; ++i) phases(i) = std::polar(1.0, -es.eigenvalues()(i));
    const MatrixXcd u = es.eigenvectors().cast<complexd>() * phases.asDiagonal() *
                        es.eigenvectors().transpose().cast<complexd>();
    CHECK(max_abs(got - u * rho * u.adjoint()) <= 1e-10);
}

TEST_CASE("rk4 is fourth order on the single-qubit thermal closed form") {
    const auto ch = qb::make_channels(0.0, 0.5, 1.0, 1.0);
    MatrixXcd rho(2, 2);
    rho << 0.3, complexd(0.2, -0.1), complexd(0.2, 0.1), 0.7;
    const double relax = ch.gamma_plus + ch.gamma_minus;
    const double ss = ch.gamma_plus / relax;
    MatrixXcd exact(2, 2);
    exact(0, 0) = ss + (rho(0, 0).real() - ss) * std::exp(-relax);
    exact(1, 1) = 1.0 - exact(0, 0);
    exact(0, 1) = rho(0, 1) * std::exp(-relax / 2.0);
    exact(1, 0) = std::conj(exact(0, 1));

    const MatrixXd h0 = MatrixXd::Zero(2, 2);
    const double e1 = max_abs(qb::evolve_interval(rho, h0, ch, 0.25, 1.0) - exact);
    const double e2 = max_abs(qb::evolve_interval(rho, h0, ch, 0.125, 1.0) - exact);
    const double e4 = max_abs(qb::evolve_interval(rho, h0, ch, 0.0625, 1.0) - exact);
    INFO("e1=" << e1 << " e2=" << e2 << " e4=" << e4);
    CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.25));
    CHECK(e2 / e4 == doctest::Approx(16.0).epsilon(0.25));

    // and the fine-step run lands on the closed form
    CHECK(max_abs(qb::evolve_interval(rho, h0, ch, 1e-3, 1.0) - exact) <= 1e-8);
}

TEST_CASE("single-qubit dephasing closed form at t = 1") {
    const auto ch = qb::make_channels(0.3, 0.0, 1.0, 1.0);
    MatrixXcd rho(2, 2);
    rho << 0.3, complexd(0.2, -0.1), complexd(0.2, 0.1), 0.7;
    const MatrixXcd got = qb::evolve_interval(rho, MatrixXd::Zero(2, 2), ch, 1e-3, 1.0);
    CHECK(std::abs(got(0, 1) - rho(0, 1) * std::exp(-0.6)) <= 1e-8);
    CHECK(std::abs(got(0, 0) - rho(0, 0)) <= 1e-12);
}

TEST_CASE("kick is the elementwise diagonal conjugation") {
    const auto ops = qb::build_hamiltonians(3, self_dual(), thermal(0.5, 1.0, 1.0));
    const MatrixXcd rho = random_state(8, 3);

    const MatrixXcd kicked = qb::apply_kick(rho, ops.h_k);
    MatrixXcd u = MatrixXcd::Zero(8, 8);
    for (int a = 0; a < 8; ++a) u(a, a) = std::polar(1.0, -ops.h_k(a));
    CHECK(max_abs(kicked - u * rho * u.adjoint()) <= 1e-15);

    CHECK(max_abs(qb::apply_kick(rho, VectorXd::Zero(8)) - rho) <= 1e-15);

    const MatrixXcd diag = MatrixXcd(rho.diagonal().asDiagonal());
    CHECK(max_abs(qb::apply_kick(diag, ops.h_k) - diag) <= 1e-15);
}

TEST_CASE("mask kernel agrees with the generic dense path") {
    const auto th = thermal(0.5, 1.0, 1.5);
    const auto ch = qb::make_channels(0.02, 0.1, 1.0, 1.5);
    const auto ops = qb::build_hamiltonians(3, self_dual(), th);
    qb::DenseTrajectoryOptions opts;
    opts.dt = 0.05;
    const auto traj = qb::dense_trajectory(3, 2, self_dual(), th, ch, opts);

    MatrixXcd rho = qb::gibbs_state(ops.h_th, 1.5);
    for (int m = 1; m <= 2; ++m) {
        rho = qb::evolve_interval(rho, ops.h_i, ch, 0.05, 1.0);
        rho = qb::apply_kick(rho, ops.h_k);
        INFO("m=" << m);
        CHECK(std::abs(traj.energy[m] - qb::measure_diagonal(rho, ops.h_0)) <= 1e-12);
        CHECK(std::abs(traj.parity[m] - qb::measure_diagonal(rho, ops.parity)) <= 1e-12);
    }
}

TEST_CASE("closed dense trajectories reproduce the analytic ensemble") {
    const auto none = qb::make_channels(0.0, 0.0, 1.0, 1.0);
    for (int n : {4, 6}) {
        for (double beta : {0.0, 0.5, 2.0, 10.0, kInf}) {
            const auto th = thermal(0.5, 1.0, beta);
            qb::DenseTrajectoryOptions opts;
            const auto traj = qb::dense_trajectory(n, 2 * n, self_dual(), th, none, opts);
            const auto want = qb::thermal_energy_trajectory(n, 2 * n, self_dual(), th);
            for (long long m = 0; m <= 2 * n; ++m) {
                INFO("n=" << n << " beta=" << beta << " m=" << m);
                CHECK(std::abs(traj.energy[m] - want[m]) <= 1e-9);
                CHECK(std::abs(traj.parity[m] - traj.parity[0]) <= 1e-12);
            }
        }
    }
}

TEST_CASE("off-dual charger also matches the analytic ensemble") {
    const auto none = qb::make_channels(0.0, 0.0, 1.0, 1.0);
    const auto ch = charger(0.6, 0.35, 0.8);
    const auto th = thermal(1.0, 0.3, 1.0);
    const auto traj = qb::dense_trajectory(5, 10, ch, th, none, {});
    const auto want = qb::thermal_energy_trajectory(5, 10, ch, th);
    for (long long m = 0; m <= 10; ++m) {
        INFO("m=" << m);
        CHECK(std::abs(traj.energy[m] - want[m]) <= 1e-9);
    }
}

TEST_CASE("dephasing conserves parity along the driven trajectory") {
    const auto ch = qb::make_channels(0.05, 0.0, 1.0, 2.0);
    qb::DenseTrajectoryOptions opts;
    opts.dt = 1e-2;
    const auto traj = qb::dense_trajectory(4, 3, self_dual(), thermal(0.5, 1.0, 2.0), ch, opts);
    for (int m = 1; m <= 3; ++m) CHECK(std::abs(traj.parity[m] - traj.parity[0]) <= 1e-10);
}

TEST_CASE("trajectory preserves trace and records states on request") {
    const auto ch = qb::make_channels(0.01, 0.05, 1.0, 2.0);
    qb::DenseTrajectoryOptions opts;
    opts.dt = 1e-2;
    opts.record_states = true;
    long long seen = -1;
    opts.observer = [&](long long m, const MatrixXcd&) { seen = m; };
    const auto traj = qb::dense_trajectory(3, 4, self_dual(), thermal(0.5, 1.0, 2.0), ch, opts);
    CHECK(traj.states.size() == 5);
    CHECK(seen == 4);
    for (const auto& s : traj.states) CHECK(std::abs(s.trace().real() - 1.0) <= 1e-10);
}

TEST_CASE("coherence times follow the combined relaxation relations") {
    const auto deph = qb::coherence_times(qb::make_channels(0.005, 0.0, 1.0, 1.0));
    CHECK(deph.t_phi == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(deph.t2 == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(std::isinf(deph.t1));

    const auto ch = qb::make_channels(0.0, 0.2, 1.0, 1.0);
    const auto relax = qb::coherence_times(ch);
    CHECK(relax.t2 == doctest::Approx(2.0 * relax.t1).epsilon(1e-12));
    CHECK(std::isinf(relax.t_phi));
    // 1/T1 = gamma0 coth(beta omega0 / 2)
    CHECK(1.0 / relax.t1 ==
          doctest::Approx(relax.gamma0 / std::tanh(0.5)).epsilon(1e-12));

    const auto both = qb::coherence_times(qb::make_channels(0.01, 0.2, 1.0, 1.0));
    const double want = 0.5 * (ch.gamma_plus + ch.gamma_minus) + 2.0 * 0.01;
    CHECK(1.0 / both.t2 == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("channel construction enforces detailed balance and rejects bad configs") {
    const auto ch = qb::make_channels(0.0, 0.3, 1.2, 0.8);
    CHECK(ch.gamma_plus / ch.gamma_minus ==
          doctest::Approx(std::exp(-0.8 * 1.2)).epsilon(1e-12));

    const auto cold = qb::make_channels(0.0, 0.3, 1.0, kInf);
    CHECK(cold.gamma_plus == 0.0);
    CHECK(cold.gamma_minus == doctest::Approx(0.3).epsilon(1e-15));

    CHECK_THROWS_AS(qb::make_channels(0.0, 0.1, 1.0, 0.0), qb::ConfigError);
    CHECK_THROWS_AS(qb::make_channels(-0.1, 0.0, 1.0, 1.0), qb::ConfigError);
    CHECK_THROWS_AS(qb::make_channels(0.0, -0.1, 1.0, 1.0), qb::ConfigError);
    CHECK_THROWS_AS(qb::make_channels(0.0, 0.1, 0.0, 1.0), qb::ConfigError);

    CHECK_THROWS_AS(qb::build_hamiltonians(0, self_dual(), thermal(0.5, 1.0, 1.0)),
                    qb::ConfigError);
    CHECK_THROWS_AS(qb::build_hamiltonians(13, self_dual(), thermal(0.5, 1.0, 1.0)),
                    qb::ConfigError);

    const auto ops = qb::build_hamiltonians(2, self_dual(), thermal(0.5, 1.0, 1.0));
    const MatrixXcd rho = qb::gibbs_state(ops.h_th, 1.0);
    CHECK_THROWS_AS(qb::evolve_interval(rho, ops.h_i, qb::make_channels(0.0, 0.0, 1.0, 1.0),
                                        0.3, 1.0),
                    qb::ConfigError);
}
