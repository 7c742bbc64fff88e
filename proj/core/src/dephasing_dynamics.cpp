#include "qb/dephasing_dynamics.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <cstddef>

#include "ground_sector.hpp"
#include "qb/errors.hpp"
#include "sector_data.hpp"

namespace qb {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Index layout [n_pair(0..P), re(0..P), im(0..P), n_self(0..S), c].
struct Layout {
    int pairs = 0;
    int selfs = 0;
    int n_pair(int i) const { return i; }
    int re(int i) const { return pairs + i; }
    int im(int i) const { return 2 * pairs + i; }
    int n_self(int i) const { return 3 * pairs + i; }
    int c() const { return 3 * pairs + selfs; }
    int dim() const { return 3 * pairs + selfs + 1; }
};

Layout layout_of(const ModeGrid& grid) {
    return {static_cast<int>(grid.pairs.size()), static_cast<int>(grid.self_modes.size())};
}

ModeMoments pair_moments(const BdGParams& bdg, double beta, MomentVariant variant) {
    ModeMoments out;
    if (bdg.e == 0.0) {
        // Collapsed block (H_k = 0): the Gibbs state is maximally mixed and the
        // parity-weighted trace vanishes identically.
        if (variant == MomentVariant::ParityWeighted)
            throw ConfigError("parity-weighted moments are undefined on a collapsed pair block");
        out.n = 0.5;
        return out;
    }
    double t;  // tanh for Plain, coth for ParityWeighted
    if (std::isinf(beta)) {
        t = 1.0;
    } else {
        t = std::tanh(0.5 * beta * bdg.e);
        if (variant == MomentVariant::ParityWeighted) {
            if (t == 0.0)
                throw ConfigError("parity-weighted moments are undefined at Z^P_k = 0");
            t = 1.0 / t;
        }
    }
    out.n = 0.5 * (1.0 - (bdg.epsilon / bdg.e) * t);
    out.re_m = 0.5 * (bdg.delta / bdg.e) * t;
    return out;
}

ModeMoments self_moments(const BdGParams& bdg, double beta, MomentVariant variant) {
    ModeMoments out;
    const double eps = bdg.epsilon;
    if (std::isinf(beta)) {
        if (eps > 0.0) {
            out.n = 0.0;
        } else if (eps < 0.0) {
            out.n = 1.0;
        } else {
            if (variant == MomentVariant::ParityWeighted)
                throw ConfigError("parity-weighted moments are undefined at Z^P_k = 0");
            out.n = 0.5;
        }
        return out;
    }
    const double x = beta * eps;
    if (variant == MomentVariant::Plain) {
        out.n = 1.0 / (1.0 + std::exp(x));
        return out;
    }
    if (x == 0.0) throw ConfigError("parity-weighted moments are undefined at Z^P_k = 0");
    out.n = -1.0 / std::expm1(x);
    return out;
}

// Sector-level data shared by the trajectory assemblies.
struct SectorRun {
    int sigma = 1;
    Layout lay;
    PeriodPropagator prop;
    Eigen::VectorXd plain;
    Eigen::VectorXd parity;      // normalized, or the degenerate substitute
    bool parity_active = false;
    SignedLog parity_scale;      // Z^P_bc, or the surviving exclusion product
    SignedLog z_bc;
};

// o_k-contraction of one moment vector: 2 (c - 2 n_k) per pair plus (c - 2 n_k)
// per self-mode.
double contract(const Layout& lay, const Eigen::VectorXd& x) {
    const double c = x[lay.c()];
    double s = 0.0;
    for (int i = 0; i < lay.pairs; ++i) s += 2.0 * (c - 2.0 * x[lay.n_pair(i)]);
    for (int i = 0; i < lay.selfs; ++i) s += c - 2.0 * x[lay.n_self(i)];
    return s;
}

void check_plain_bounds(const Layout& lay, const Eigen::VectorXd& x) {
    constexpr double slack = 1e-8;
    for (int i = 0; i < lay.pairs; ++i) {
        const double n = x[lay.n_pair(i)];
        const double m2 = x[lay.re(i)] * x[lay.re(i)] + x[lay.im(i)] * x[lay.im(i)];
        if (n < -slack || n > 1.0 + slack || m2 > 0.25 + slack)
            throw NumericalError("dephasing moments left the physical-state bounds");
    }
    for (int i = 0; i < lay.selfs; ++i) {
        const double n = x[lay.n_self(i)];
        if (n < -slack || n > 1.0 + slack)
            throw NumericalError("dephasing moments left the physical-state bounds");
    }
}

SectorRun build_sector_run(const detail::SectorData& sd, const ModeGrid& grid,
                           const ChargerParams& charger, const ThermalParams& params,
                           double gamma_z) {
    SectorRun run;
    run.sigma = sd.sigma;
    run.lay = layout_of(grid);
    run.prop = build_period_propagator(ode_generator(grid, charger.j, gamma_z), 1.0,
                                       KickRotation{4.0 * charger.b});
    run.z_bc = sd.z_bc;

    const Layout& lay = run.lay;
    run.plain = Eigen::VectorXd::Zero(lay.dim());
    run.plain[lay.c()] = 1.0;
    for (int i = 0; i < lay.pairs; ++i) {
        const ModeMoments mm = pair_moments(sd.modes[i].bdg, params.beta, MomentVariant::Plain);
        run.plain[lay.n_pair(i)] = mm.n;
        run.plain[lay.re(i)] = mm.re_m;
    }
    for (int i = 0; i < lay.selfs; ++i) {
        const ModeMoments mm = self_moments(sd.modes[lay.pairs + i].bdg, params.beta,
                                            MomentVariant::Plain);
        run.plain[lay.n_self(i)] = mm.n;
    }

    // Parity channel. With every Z^P_k finite it is the normalized
    // parity-weighted functional scaled by Z^P_bc. A single vanishing factor
    // leaves only that mode's term: the functional renormalized by the product
    // of the nonzero factors has trace zero, all foreign moments zero, and the
    // degenerate mode's own unnormalized numerator as initial data (identically
    // zero for a collapsed pair, -e^{-beta eps} = -1 for a self-mode crossing).
    // Two or more vanishing factors kill the channel outright.
    std::size_t zero_count = 0;
    std::size_t zero_index = 0;
    for (std::size_t i = 0; i < sd.modes.size(); ++i) {
        if (sd.modes[i].z_p.is_zero()) {
            ++zero_count;
            zero_index = i;
        }
    }
    run.parity = Eigen::VectorXd::Zero(lay.dim());
    if (zero_count == 0) {
        run.parity_active = true;
        run.parity_scale = sd.z_p_bc;
        run.parity[lay.c()] = 1.0;
        for (int i = 0; i < lay.pairs; ++i) {
            const ModeMoments mm =
                pair_moments(sd.modes[i].bdg, params.beta, MomentVariant::ParityWeighted);
            run.parity[lay.n_pair(i)] = mm.n;
            run.parity[lay.re(i)] = mm.re_m;
        }
        for (int i = 0; i < lay.selfs; ++i) {
            const ModeMoments mm = self_moments(sd.modes[lay.pairs + i].bdg, params.beta,
                                                MomentVariant::ParityWeighted);
            run.parity[lay.n_self(i)] = mm.n;
        }
    } else if (zero_count == 1 && sd.modes[zero_index].kind == ModeKind::Self) {
        run.parity_active = true;
        run.parity_scale = sd.excl.excluding(zero_index);
        run.parity[lay.n_self(static_cast<int>(zero_index) - lay.pairs)] = -1.0;
    }
    return run;
}

SectorRun build_ground_run(const detail::GroundSector& gs, const ModeGrid& grid,
                           const ChargerParams& charger, double gamma_z) {
    SectorRun run;
    run.sigma = gs.sigma;
    run.lay = layout_of(grid);
    run.prop = build_period_propagator(ode_generator(grid, charger.j, gamma_z), 1.0,
                                       KickRotation{4.0 * charger.b});
    const Layout& lay = run.lay;
    run.plain = Eigen::VectorXd::Zero(lay.dim());
    run.plain[lay.c()] = 1.0;
    for (std::size_t i = 0; i < gs.modes.size(); ++i) {
        double n = 0.0;
        double re = 0.0;
        for (std::size_t l = 0; l < gs.modes[i].levels.size(); ++l) {
            n += gs.level_probs[i][l] * gs.modes[i].levels[l].n;
            re += gs.level_probs[i][l] * gs.modes[i].levels[l].re_m;
        }
        if (gs.modes[i].kind == ModeKind::Pair) {
            run.plain[lay.n_pair(static_cast<int>(i))] = n;
            run.plain[lay.re(static_cast<int>(i))] = re;
        } else {
            run.plain[lay.n_self(static_cast<int>(i) - lay.pairs)] = n;
        }
    }
    return run;
}

void check_trajectory_args(int n_sites, long long m_max, const ThermalParams& params,
                           double gamma_z) {
    if (n_sites < 2) throw ConfigError("chain needs at least 2 sites");
    if (m_max < 0) throw ConfigError("kick count must be nonnegative");
    if (!(params.beta >= 0.0)) throw ConfigError("beta must be nonnegative");
    if (!(gamma_z >= 0.0)) throw ConfigError("dephasing rate must be nonnegative");
}

}  // namespace

ModeMoments gibbs_mode_moments(double k, const ThermalParams& params, MomentVariant variant) {
    if (!(params.beta >= 0.0)) throw ConfigError("beta must be nonnegative");
    const BdGParams bdg = bdg_params(k, params.j_th, params.h_th);
    // k = 0 and k = pi are exactly the self-paired grid momenta.
    if (k == 0.0 || k == kPi) return self_moments(bdg, params.beta, variant);
    return pair_moments(bdg, params.beta, variant);
}

ModeGenerator ode_generator(const ModeGrid& grid, double j, double gamma_z) {
    if (!(gamma_z >= 0.0)) throw ConfigError("dephasing rate must be nonnegative");
    const Layout lay = layout_of(grid);
    if (2 * lay.pairs + lay.selfs != grid.n_sites)
        throw ConfigError("mode grid is inconsistent with its site count");
    ModeGenerator gen;
    gen.n_pairs = lay.pairs;
    gen.n_selfs = lay.selfs;
    Eigen::MatrixXd& g = gen.matrix;
    g = Eigen::MatrixXd::Zero(lay.dim(), lay.dim());
    for (int i = 0; i < lay.pairs; ++i) {
        const double eps = 2.0 * j * std::cos(grid.pairs[i]);
        const double delta = 2.0 * j * std::sin(grid.pairs[i]);
        g(lay.n_pair(i), lay.im(i)) += 2.0 * delta;
        g(lay.re(i), lay.im(i)) += 2.0 * eps;
        g(lay.re(i), lay.re(i)) -= 4.0 * gamma_z;
        g(lay.im(i), lay.re(i)) -= 2.0 * eps;
        g(lay.im(i), lay.n_pair(i)) -= 2.0 * delta;
        g(lay.im(i), lay.c()) += delta;
        g(lay.im(i), lay.im(i)) -= 4.0 * gamma_z;
    }
    if (gamma_z > 0.0) {
        // -4 gamma_z (n - nbar) on every occupation row; nbar runs over all N
        // grid momenta, so pairs enter the mean with weight 2.
        const double mix = 4.0 * gamma_z / grid.n_sites;
        for (int r = 0; r < lay.pairs + lay.selfs; ++r) {
            const int row = r < lay.pairs ? lay.n_pair(r) : lay.n_self(r - lay.pairs);
            g(row, row) -= 4.0 * gamma_z;
            for (int q = 0; q < lay.pairs; ++q) g(row, lay.n_pair(q)) += 2.0 * mix;
            for (int q = 0; q < lay.selfs; ++q) g(row, lay.n_self(q)) += mix;
        }
    }
    return gen;
}

PeriodPropagator build_period_propagator(const ModeGenerator& generator, double interval,
                                         const KickRotation& kick) {
    if (!(interval > 0.0)) throw ConfigError("kick interval must be positive");
    const Layout lay{generator.n_pairs, generator.n_selfs};
    if (generator.matrix.rows() != lay.dim() || generator.matrix.cols() != lay.dim())
        throw ConfigError("generator matrix does not match its mode counts");
    PeriodPropagator prop;
    prop.n_pairs = lay.pairs;
    prop.n_selfs = lay.selfs;
    prop.map = (generator.matrix * interval).exp();
    if (!prop.map.allFinite())
        throw NumericalError("matrix exponential of the dephasing generator diverged");
    const double c = std::cos(kick.angle);
    const double s = std::sin(kick.angle);
    for (int i = 0; i < lay.pairs; ++i) {
        const Eigen::RowVectorXd re_row = prop.map.row(lay.re(i));
        const Eigen::RowVectorXd im_row = prop.map.row(lay.im(i));
        prop.map.row(lay.re(i)) = c * re_row - s * im_row;
        prop.map.row(lay.im(i)) = s * re_row + c * im_row;
    }
    return prop;
}

DephasingState thermal_moment_state(const ModeGrid& grid, const ThermalParams& params,
                                    MomentVariant variant) {
    const Layout lay = layout_of(grid);
    DephasingState st;
    st.grid = grid;
    st.variant = variant;
    st.x = Eigen::VectorXd::Zero(lay.dim());
    st.x[lay.c()] = 1.0;
    for (int i = 0; i < lay.pairs; ++i) {
        const ModeMoments mm = gibbs_mode_moments(grid.pairs[i], params, variant);
        st.x[lay.n_pair(i)] = mm.n;
        st.x[lay.re(i)] = mm.re_m;
    }
    for (int i = 0; i < lay.selfs; ++i)
        st.x[lay.n_self(i)] = gibbs_mode_moments(grid.self_modes[i], params, variant).n;
    return st;
}

Eigen::VectorXd propagate_rk4(const Eigen::MatrixXd& generator, Eigen::VectorXd x,
                              double duration, double dt) {
    if (!(dt > 0.0)) throw ConfigError("step size must be positive");
    if (duration < 0.0) throw ConfigError("duration must be nonnegative");
    const long long steps = std::llround(duration / dt);
    if (std::abs(static_cast<double>(steps) * dt - duration) >
        1e-9 * std::max(1.0, duration))
        throw ConfigError("duration must be an integer multiple of the step size");
    Eigen::VectorXd k1(x.size()), k2(x.size()), k3(x.size()), k4(x.size());
    for (long long s = 0; s < steps; ++s) {
        k1.noalias() = generator * x;
        k2.noalias() = generator * (x + 0.5 * dt * k1);
        k3.noalias() = generator * (x + 0.5 * dt * k2);
        k4.noalias() = generator * (x + dt * k3);
        x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return x;
}

std::vector<double> dephasing_trajectory(int n_sites, long long m_max,
                                         const ChargerParams& charger,
                                         const ThermalParams& params, double gamma_z) {
    check_trajectory_args(n_sites, m_max, params, gamma_z);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(m_max) + 1);

    if (params.beta_is_infinite()) {
        const auto even_gs = detail::build_ground_sector(n_sites, Sector::Even, params);
        const auto odd_gs = detail::build_ground_sector(n_sites, Sector::Odd, params);
        const SectorWeights w = detail::ground_sector_weights(even_gs, odd_gs);
        SectorRun even = build_ground_run(even_gs, build_grid(n_sites, Sector::Even), charger,
                                          gamma_z);
        SectorRun odd = build_ground_run(odd_gs, build_grid(n_sites, Sector::Odd), charger,
                                         gamma_z);
        for (long long m = 0; m <= m_max; ++m) {
            double e = 0.0;
            if (w.w_plus > 0.0) e += w.w_plus * 0.5 * charger.g * contract(even.lay, even.plain);
            if (w.w_minus > 0.0) e += w.w_minus * 0.5 * charger.g * contract(odd.lay, odd.plain);
            out.push_back(e);
            if (m == m_max) break;
            even.plain = even.prop.map * even.plain;
            odd.plain = odd.prop.map * odd.plain;
        }
        return out;
    }

    const auto even_sd = detail::build_sector_data(n_sites, Sector::Even, params);
    const auto odd_sd = detail::build_sector_data(n_sites, Sector::Odd, params);
    const auto parts = detail::sector_partitions(even_sd, odd_sd);
    SectorRun runs[2] = {
        build_sector_run(even_sd, build_grid(n_sites, Sector::Even), charger, params, gamma_z),
        build_sector_run(odd_sd, build_grid(n_sites, Sector::Odd), charger, params, gamma_z)};
    for (SectorRun& run : runs) {
        run.z_bc = run.z_bc / parts.z_total;
        if (run.parity_active) run.parity_scale = run.parity_scale / parts.z_total;
    }
    for (long long m = 0; m <= m_max; ++m) {
        double e = 0.0;
        for (const SectorRun& run : runs) {
            e += run.z_bc.value() * contract(run.lay, run.plain);
            if (run.parity_active)
                e += run.sigma * run.parity_scale.value() * contract(run.lay, run.parity);
        }
        out.push_back(0.25 * charger.g * e);
        if (m == m_max) break;
        for (SectorRun& run : runs) {
            run.plain = run.prop.map * run.plain;
            check_plain_bounds(run.lay, run.plain);
            if (run.parity_active) run.parity = run.prop.map * run.parity;
        }
    }
    return out;
}

std::vector<double> dephasing_sector_trajectory(int n_sites, long long m_max,
                                                const ChargerParams& charger,
                                                const ThermalParams& params, double gamma_z,
                                                Sector sector) {
    check_trajectory_args(n_sites, m_max, params, gamma_z);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(m_max) + 1);

    if (params.beta_is_infinite()) {
        const auto gs = detail::build_ground_sector(n_sites, sector, params);
        SectorRun run = build_ground_run(gs, build_grid(n_sites, sector), charger, gamma_z);
        for (long long m = 0; m <= m_max; ++m) {
            out.push_back(0.5 * charger.g * contract(run.lay, run.plain));
            if (m == m_max) break;
            run.plain = run.prop.map * run.plain;
        }
        return out;
    }

    const auto sd = detail::build_sector_data(n_sites, sector, params);
    const SignedLog half = SignedLog::from_value(0.5);
    const SignedLog z_sector = sector == Sector::Even ? (sd.z_bc + sd.z_p_bc) * half
                                                      : (sd.z_bc - sd.z_p_bc) * half;
    if (z_sector.is_zero() || z_sector.sign < 0)
        throw NumericalError("sector weight vanished; the conditional energy is undefined");
    SectorRun run = build_sector_run(sd, build_grid(n_sites, sector), charger, params, gamma_z);
    run.z_bc = run.z_bc / (z_sector + z_sector);
    if (run.parity_active) run.parity_scale = run.parity_scale / (z_sector + z_sector);
    for (long long m = 0; m <= m_max; ++m) {
        double e = run.z_bc.value() * contract(run.lay, run.plain);
        if (run.parity_active)
            e += run.sigma * run.parity_scale.value() * contract(run.lay, run.parity);
        out.push_back(0.5 * charger.g * e);
        if (m == m_max) break;
        run.plain = run.prop.map * run.plain;
        check_plain_bounds(run.lay, run.plain);
        if (run.parity_active) run.parity = run.prop.map * run.parity;
    }
    return out;
}

}  // namespace qb
