#include "qb/dense_oracle.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "qb/errors.hpp"

namespace qb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

int checked_site_count(Index dim) {
    int n = 0;
    while ((Index{1} << n) < dim) ++n;
    if ((Index{1} << n) != dim) throw ConfigError("state dimension is not a power of two");
    return n;
}

// Bond list (i, i+1 mod N). Self-bonds (N = 1) drop out as the identity; the
// N = 2 list keeps both copies of its single bond on purpose.
std::vector<unsigned> bond_masks(int n_sites) {
    std::vector<unsigned> masks;
    for (int i = 0; i < n_sites; ++i) {
        const int j = (i + 1) % n_sites;
        if (i == j) continue;
        masks.push_back((1u << i) | (1u << j));
    }
    return masks;
}

void add_xx_bonds(MatrixXd& h, double coupling, const std::vector<unsigned>& masks) {
    const auto dim = static_cast<unsigned>(h.rows());
    for (unsigned mask : masks)
        for (unsigned a = 0; a < dim; ++a) h(a, a ^ mask) += coupling;
}

// sum_l sigma^z_l on basis index a; bit value 0 is spin up.
double total_sz(unsigned a, int n_sites) {
    return n_sites - 2.0 * std::popcount(a);
}

// Dissipative part of the Lindblad generator, split into an elementwise
// damping profile (dephasing plus anticommutator halves of the ladder
// channels) and the two jump gathers.
struct DissipatorPlan {
    bool active = false;
    int n_sites = 0;
    double gamma_plus = 0.0;
    double gamma_minus = 0.0;
    MatrixXd damp;

    static DissipatorPlan build(const DissipationChannels& ch, int n_sites) {
        DissipatorPlan plan;
        plan.n_sites = n_sites;
        plan.active = ch.any();
        if (!plan.active) return plan;
        plan.gamma_plus = ch.gamma_plus;
        plan.gamma_minus = ch.gamma_minus;
        const unsigned dim = 1u << n_sites;
        VectorXd w(dim);
        for (unsigned a = 0; a < dim; ++a) {
            const int pop = std::popcount(a);
            w(a) = ch.gamma_plus * pop + ch.gamma_minus * (n_sites - pop);
        }
        plan.damp.resize(dim, dim);
        for (unsigned b = 0; b < dim; ++b)
            for (unsigned a = 0; a < dim; ++a)
                plan.damp(a, b) = -2.0 * ch.gamma_z * std::popcount(a ^ b) - 0.5 * (w(a) + w(b));
        return plan;
    }

    // One pass per destination column so each 2*dim-doubles column stays in
    // cache while every site's jump contribution lands on it.
    void add_to(const MatrixXcd& in, MatrixXcd& out) const {
        if (!active) return;
        const Index dim = in.rows();
        const bool jumps = gamma_plus > 0.0 || gamma_minus > 0.0;
        for (Index b = 0; b < dim; ++b) {
            const double* c = damp.col(b).data();
            const complexd* same = in.col(b).data();
            complexd* dst = out.col(b).data();
            for (Index a = 0; a < dim; ++a) dst[a] += c[a] * same[a];
            if (!jumps) continue;
            for (int l = 0; l < n_sites; ++l) {
                const Index bit = Index{1} << l;
                const Index stride = bit << 1;
                if ((b & bit) == 0) {
                    if (gamma_plus <= 0.0) continue;
                    // sigma^+ rho sigma^-: both-bits-set quadrant feeds both-clear.
                    const complexd* src = in.col(b + bit).data();
                    for (Index a = 0; a < dim; a += stride)
                        for (Index al = 0; al < bit; ++al)
                            dst[a + al] += gamma_plus * src[a + al + bit];
                } else if (gamma_minus > 0.0) {
                    const complexd* src = in.col(b - bit).data();
                    for (Index a = 0; a < dim; a += stride)
                        for (Index al = 0; al < bit; ++al)
                            dst[a + al + bit] += gamma_minus * src[a + al];
                }
            }
        }
    }
};

// -i J [sum_masks X_mask, rho] for Hermitian rho, written as T - T^dag of the
// one-sided product so the result is Hermitian to the bit.
struct IsingCommutator {
    double j = 0.0;
    std::vector<unsigned> masks;

    void write_to(const MatrixXcd& in, MatrixXcd& out) const {
        const Index dim = in.rows();
        if (masks.empty()) {
            out.setZero();
            return;
        }
        // The gather permutes rows within a column, so run all masks against
        // one cached column before moving to the next.
        for (Index b = 0; b < dim; ++b) {
            const complexd* src = in.col(b).data();
            complexd* dst = out.col(b).data();
            const Index first{masks.front()};
            for (Index a = 0; a < dim; ++a) dst[a] = src[a ^ first];
            for (std::size_t mi = 1; mi < masks.size(); ++mi) {
                const Index mask{masks[mi]};
                for (Index a = 0; a < dim; ++a) dst[a] += src[a ^ mask];
            }
        }
        const complexd cj(0.0, -j);
        for (Index b = 0; b < dim; ++b) {
            for (Index a = 0; a < b; ++a) {
                const complexd x = out(a, b);
                const complexd y = out(b, a);
                out(a, b) = cj * (x - std::conj(y));
                out(b, a) = cj * (y - std::conj(x));
            }
            out(b, b) = 2.0 * j * out(b, b).imag();
        }
    }
};

template <class Rhs>
MatrixXcd rk4_evolve(MatrixXcd rho, const Rhs& rhs, double dt, double duration) {
    const auto steps = static_cast<long long>(std::llround(duration / dt));
    if (steps < 1 || std::abs(steps * dt - duration) > 1e-9 * std::max(1.0, duration))
        throw ConfigError("time step does not divide the interval duration");
    const Index dim = rho.rows();
    MatrixXcd k(dim, dim), stage(dim, dim), acc(dim, dim);
    for (long long s = 0; s < steps; ++s) {
        rhs(rho, k);
        acc = rho + (dt / 6.0) * k;
        stage = rho + (dt / 2.0) * k;
        rhs(stage, k);
        acc += (dt / 3.0) * k;
        stage = rho + (dt / 2.0) * k;
        rhs(stage, k);
        acc += (dt / 3.0) * k;
        stage = rho + dt * k;
        rhs(stage, k);
        acc += (dt / 6.0) * k;
        rho.swap(acc);
    }
    return rho;
}

double trace_drift(const MatrixXcd& rho) {
    return std::abs(rho.diagonal().sum() - 1.0);
}

double hermiticity_drift(const MatrixXcd& rho) {
    double worst = 0.0;
    for (Index b = 0; b < rho.cols(); ++b)
        for (Index a = 0; a <= b; ++a)
            worst = std::max(worst, std::abs(rho(a, b) - std::conj(rho(b, a))));
    return worst;
}

void check_state_invariants(const MatrixXcd& rho, const char* where) {
    if (trace_drift(rho) > 1e-8)
        throw NumericalError(std::string(where) + ": trace drifted beyond 1e-8");
    if (hermiticity_drift(rho) > 1e-8)
        throw NumericalError(std::string(where) + ": state lost Hermiticity beyond 1e-8");
}

}  // namespace

DenseOperators build_hamiltonians(int n_sites, const ChargerParams& charger,
                                  const ThermalParams& thermal) {
    if (n_sites < 1 || n_sites > 12)
        throw ConfigError("dense engine needs 1 <= n_sites <= 12, got " +
                          std::to_string(n_sites));
    const unsigned dim = 1u << n_sites;
    DenseOperators ops;
    ops.n_sites = n_sites;
    const auto masks = bond_masks(n_sites);
    ops.h_i = MatrixXd::Zero(dim, dim);
    add_xx_bonds(ops.h_i, charger.j, masks);
    ops.h_th = MatrixXd::Zero(dim, dim);
    add_xx_bonds(ops.h_th, thermal.j_th, masks);
    ops.h_k.resize(dim);
    ops.h_0.resize(dim);
    ops.parity.resize(dim);
    for (unsigned a = 0; a < dim; ++a) {
        const double sz = total_sz(a, n_sites);
        ops.h_th(a, a) += thermal.h_th * sz;
        ops.h_k(a) = charger.b * sz;
        ops.h_0(a) = 0.5 * charger.g * sz;
        ops.parity(a) = (std::popcount(a) & 1) ? -1.0 : 1.0;
    }
    return ops;
}

DissipationChannels make_channels(double gamma_z, double gamma, double omega0, double beta) {
    if (!(gamma_z >= 0.0)) throw ConfigError("gamma_z must be >= 0");
    if (!(gamma >= 0.0)) throw ConfigError("gamma must be >= 0");
    DissipationChannels ch;
    ch.gamma_z = gamma_z;
    ch.gamma = gamma;
    ch.omega0 = omega0;
    ch.beta = beta;
    if (gamma > 0.0) {
        if (!(omega0 > 0.0)) throw ConfigError("thermal channel needs omega0 > 0");
        if (!(beta > 0.0))
            throw ConfigError("thermal channel needs beta > 0 (n_th diverges at beta = 0)");
        ch.n_th = 1.0 / std::expm1(beta * omega0);  // 0 at beta = inf
        ch.gamma_plus = gamma * ch.n_th;
        ch.gamma_minus = gamma * (ch.n_th + 1.0);
    }
    return ch;
}

CoherenceTimes coherence_times(const DissipationChannels& channels) {
    CoherenceTimes times;
    const double relax = channels.gamma_plus + channels.gamma_minus;
    times.t1 = relax > 0.0 ? 1.0 / relax : kInf;
    times.t_phi = channels.gamma_z > 0.0 ? 1.0 / (2.0 * channels.gamma_z) : kInf;
    const double rate2 = 0.5 * relax + 2.0 * channels.gamma_z;
    times.t2 = rate2 > 0.0 ? 1.0 / rate2 : kInf;
    times.gamma0 = channels.gamma;
    return times;
}

Eigen::MatrixXcd gibbs_state(const Eigen::MatrixXd& h, double beta) {
    if (!(beta >= 0.0)) throw ConfigError("beta must be >= 0 (or +infinity)");
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(h);
    const VectorXd& lambda = es.eigenvalues();
    const MatrixXd& v = es.eigenvectors();
    const Index dim = h.rows();
    MatrixXd rho(dim, dim);
    if (std::isinf(beta)) {
        const double tol = 1e-9 * std::max(1.0, std::abs(lambda(0)));
        Index count = 1;
        while (count < dim && lambda(count) - lambda(0) <= tol) ++count;
        rho = v.leftCols(count) * v.leftCols(count).transpose() / static_cast<double>(count);
    } else {
        VectorXd w = (-beta * (lambda.array() - lambda(0))).exp();
        w /= w.sum();
        rho = v * w.asDiagonal() * v.transpose();
    }
    return rho.cast<complexd>();
}

Eigen::MatrixXcd lindblad_rhs(const Eigen::MatrixXcd& rho, const Eigen::MatrixXd& h,
                              const DissipationChannels& channels) {
    const int n_sites = checked_site_count(rho.rows());
    const auto plan = DissipatorPlan::build(channels, n_sites);
    const MatrixXcd hc = h.cast<complexd>();
    MatrixXcd out = hc * rho;
    out -= rho * hc;
    out *= complexd(0.0, -1.0);
    plan.add_to(rho, out);
    return out;
}

Eigen::MatrixXcd evolve_interval(const Eigen::MatrixXcd& rho, const Eigen::MatrixXd& h,
                                 const DissipationChannels& channels, double dt,
                                 double duration) {
    const int n_sites = checked_site_count(rho.rows());
    const auto plan = DissipatorPlan::build(channels, n_sites);
    const MatrixXcd hc = h.cast<complexd>();
    const Index dim = rho.rows();
    MatrixXcd prod(dim, dim);
    const auto rhs = [&](const MatrixXcd& in, MatrixXcd& out) {
        out.noalias() = hc * in;
        prod.noalias() = in * hc;
        out -= prod;
        out *= complexd(0.0, -1.0);
        plan.add_to(in, out);
    };
    MatrixXcd evolved = rk4_evolve(rho, rhs, dt, duration);
    check_state_invariants(evolved, "evolve_interval");
    return evolved;
}

Eigen::MatrixXcd apply_kick(const Eigen::MatrixXcd& rho, const Eigen::VectorXd& h_k) {
    const Index dim = rho.rows();
    Eigen::VectorXcd u(dim);
    for (Index a = 0; a < dim; ++a) u(a) = std::polar(1.0, -h_k(a));
    MatrixXcd out(dim, dim);
    for (Index b = 0; b < dim; ++b) {
        const complexd ub = std::conj(u(b));
        for (Index a = 0; a < dim; ++a) out(a, b) = u(a) * rho(a, b) * ub;
    }
    return out;
}

double measure(const Eigen::MatrixXcd& rho, const Eigen::MatrixXd& o) {
    const double re = (o.transpose().array() * rho.real().array()).sum();
    const double im = (o.transpose().array() * rho.imag().array()).sum();
    if (std::abs(im) > 1e-10)
        throw NumericalError("expectation of a Hermitian observable came out complex");
    return re;
}

double measure_diagonal(const Eigen::MatrixXcd& rho, const Eigen::VectorXd& o_diag) {
    const double re = (o_diag.array() * rho.diagonal().real().array()).sum();
    const double im = (o_diag.array() * rho.diagonal().imag().array()).sum();
    if (std::abs(im) > 1e-10)
        throw NumericalError("expectation of a Hermitian observable came out complex");
    return re;
}

DenseTrajectory dense_trajectory(int n_sites, long long m_max, const ChargerParams& charger,
                                 const ThermalParams& thermal,
                                 const DissipationChannels& channels,
                                 const DenseTrajectoryOptions& options) {
    if (m_max < 0) throw ConfigError("kick count must be >= 0");
    const DenseOperators ops = build_hamiltonians(n_sites, charger, thermal);
    MatrixXcd rho = gibbs_state(ops.h_th, thermal.beta);

    DenseTrajectory traj;
    traj.energy.reserve(m_max + 1);
    traj.parity.reserve(m_max + 1);
    const auto record = [&](long long m) {
        traj.energy.push_back(measure_diagonal(rho, ops.h_0));
        traj.parity.push_back(measure_diagonal(rho, ops.parity));
        if (options.record_states) traj.states.push_back(rho);
        if (options.observer) options.observer(m, rho);
    };
    record(0);
    if (m_max == 0) return traj;

    MatrixXcd unitary;
    const bool closed = !channels.any();
    if (closed) {
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(ops.h_i);
        Eigen::VectorXcd phases(es.eigenvalues().size());
        for (Index i = 0; i < phases.size(); ++i)
            phases(i) = std::polar(1.0, -es.eigenvalues()(i));
        unitary = es.eigenvectors().cast<complexd>() * phases.asDiagonal() *
                  es.eigenvectors().transpose().cast<complexd>();
    }
    const IsingCommutator commutator{charger.j, bond_masks(n_sites)};
    const auto plan = DissipatorPlan::build(channels, n_sites);
    const auto rhs = [&](const MatrixXcd& in, MatrixXcd& out) {
        commutator.write_to(in, out);
        plan.add_to(in, out);
    };

    for (long long m = 1; m <= m_max; ++m) {
        if (closed)
            rho = unitary * rho * unitary.adjoint();
        else
            rho = rk4_evolve(std::move(rho), rhs, options.dt, 1.0);
        rho = apply_kick(rho, ops.h_k);
        check_state_invariants(rho, "dense_trajectory");
        record(m);
    }
    return traj;
}

}  // namespace qb
