#include "qb/thermal_ensemble.hpp"

#include <cmath>
#include <functional>
#include <utility>

#include "ground_sector.hpp"
#include "qb/errors.hpp"
#include "sector_data.hpp"

namespace qb {
namespace {

constexpr double kPi = 3.14159265358979323846;

void check_common(int n_sites, long long m, const ThermalParams& params) {
    if (n_sites < 2) throw ConfigError("chain needs at least 2 sites");
    if (m < 0) throw ConfigError("kick count must be nonnegative");
    if (!(params.beta >= 0.0)) throw ConfigError("beta must be nonnegative");
}

// log(1 - e^{-x}) for x > 0.
double log_one_minus_exp(double x) { return std::log(-std::expm1(-x)); }

// [eps c_z(m) + delta c_x(m)] / E for one pair; zero on a collapsed block.
double observable_bracket(const BdGParams& bdg, const EvolvedObservable& obs) {
    if (bdg.e == 0.0) return 0.0;
    return (bdg.epsilon * obs.c_z + bdg.delta * obs.c_x) / bdg.e;
}

double observable_bracket(const BdGParams& bdg, double k, long long m,
                          const ChargerParams& charger) {
    if (bdg.e == 0.0) return 0.0;
    const FloquetMode mode = floquet_one_kick(k, charger.j, charger.b);
    return observable_bracket(bdg, evolved_observable(floquet_power(mode, m)));
}

// 4 e^{-beta eps} sinh(beta E) as a signed log; B_k(m) Z^P_k is this times the
// evolved bracket.
SignedLog pair_b_prefactor(const BdGParams& bdg, double beta) {
    const double x = beta * bdg.e;
    if (x <= 0.0) return SignedLog::zero();
    const double lm = std::log(2.0) - beta * (bdg.epsilon - bdg.e) + log_one_minus_exp(2.0 * x);
    return SignedLog::from_log(lm, 1);
}

// Static per-sector data for the energy assembly at finite beta.
struct PairTerm {
    FloquetMode mode;
    BdGParams bdg;
    double a_prefactor = 0.0;  // 2 tanh(beta E / 2)
    SignedLog b_prefactor;     // 4 e^{-beta eps} sinh(beta E)
    SignedLog excl;            // prod_{q != k} z_p
};

struct SectorAssembly {
    int sigma = 1;
    SignedLog z_bc;
    std::vector<PairTerm> pairs;
    double self_a_sum = 0.0;  // self-modes are constant in m
    SignedLog self_b_sum;
};

SectorAssembly build_assembly(const detail::SectorData& sd, const ChargerParams& charger,
                              const ThermalParams& params) {
    SectorAssembly out;
    out.sigma = sd.sigma;
    out.z_bc = sd.z_bc;
    out.self_b_sum = SignedLog::zero();
    for (std::size_t i = 0; i < sd.modes.size(); ++i) {
        const detail::ModeData& mode = sd.modes[i];
        if (mode.kind == ModeKind::Pair) {
            PairTerm term;
            term.mode = floquet_one_kick(mode.k, charger.j, charger.b);
            term.bdg = mode.bdg;
            term.a_prefactor = 2.0 * std::tanh(0.5 * params.beta * mode.bdg.e);
            term.b_prefactor = pair_b_prefactor(mode.bdg, params.beta);
            term.excl = sd.excl.excluding(i);
            out.pairs.push_back(term);
        } else {
            out.self_a_sum += std::tanh(0.5 * params.beta * mode.bdg.epsilon);
            out.self_b_sum += mode.z * sd.excl.excluding(i);
        }
    }
    return out;
}

double assemble_energy(const SectorAssembly& even, const SectorAssembly& odd,
                       const SignedLog& z_total, long long m, double g) {
    SignedLog total = SignedLog::zero();
    for (const SectorAssembly* sa : {&even, &odd}) {
        double a_sum = sa->self_a_sum;
        SignedLog b_sum = sa->self_b_sum;
        for (const PairTerm& term : sa->pairs) {
            const double br =
                observable_bracket(term.bdg, evolved_observable(floquet_power(term.mode, m)));
            a_sum += term.a_prefactor * br;
            if (br != 0.0)
                b_sum += term.b_prefactor * SignedLog::from_value(br) * term.excl;
        }
        SignedLog sector = SignedLog::from_value(a_sum) * sa->z_bc;
        sector += sa->sigma > 0 ? b_sum : -b_sum;
        total += sector;
    }
    return 0.25 * g * (total / z_total).value();
}

double ground_energy(const detail::GroundSector& sector, long long m,
                     const ChargerParams& charger) {
    double sum = 0.0;
    for (std::size_t i = 0; i < sector.modes.size(); ++i) {
        const detail::GroundMode& gm = sector.modes[i];
        const double br = gm.kind == ModeKind::Pair
                              ? observable_bracket(gm.bdg, gm.k, m, charger)
                              : 0.0;
        for (std::size_t l = 0; l < gm.levels.size(); ++l) {
            const detail::ModeLevel& lv = gm.levels[l];
            sum += sector.level_probs[i][l] * (lv.bracket_weighted ? lv.character * br
                                                                   : lv.character);
        }
    }
    return 0.5 * charger.g * sum;
}

// Adaptive Gauss-Kronrod 7/15 on [a, b] to absolute tolerance; the embedded
// Gauss rule supplies the error estimate. QUADPACK abscissae and weights.
constexpr double kXgk[8] = {0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
                            0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
                            0.2077849550078985, 0.0};
constexpr double kWgk[8] = {0.0229353220105292, 0.0630920926299786, 0.1047900103222502,
                            0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
                            0.2044329400752989, 0.2094821410847278};
constexpr double kWg[4] = {0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
                           0.4179591836734694};

double gk15(const std::function<double(double)>& f, double a, double b, double tol, int depth) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kronrod = kWgk[7] * fc;
    double gauss = kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double lo = f(c - h * kXgk[i]);
        const double hi = f(c + h * kXgk[i]);
        kronrod += kWgk[i] * (lo + hi);
        if (i % 2 == 1) gauss += kWg[i / 2] * (lo + hi);
    }
    kronrod *= h;
    gauss *= h;
    if (std::abs(kronrod - gauss) <= tol) return kronrod;
    if (depth >= 30) throw NumericalError("quadrature failed to converge");
    return gk15(f, a, c, 0.5 * tol, depth + 1) + gk15(f, c, b, 0.5 * tol, depth + 1);
}

}  // namespace

bool ThermalParams::beta_is_infinite() const { return std::isinf(beta) && beta > 0.0; }

ModePartition mode_partition(double k, ModeKind kind, const ThermalParams& params) {
    if (!(params.beta >= 0.0)) throw ConfigError("beta must be nonnegative");
    if (params.beta_is_infinite())
        throw ConfigError("mode partitions need finite beta; the ground-state limit "
                          "bypasses partition products");
    const double beta = params.beta;
    ModePartition out;
    if (kind == ModeKind::Pair) {
        const BdGParams bdg = bdg_params(k, params.j_th, params.h_th);
        const double x = beta * bdg.e;
        const double base = -beta * (bdg.epsilon - bdg.e);
        out.z = SignedLog::from_log(base + 2.0 * std::log1p(std::exp(-x)), 1);
        out.z_p = x > 0.0 ? SignedLog::from_log(base + 2.0 * log_one_minus_exp(x), 1)
                          : SignedLog::zero();
        return out;
    }
    const double x = beta * bdg_params(k, params.j_th, params.h_th).epsilon;
    out.z = x >= 0.0 ? SignedLog::from_log(std::log1p(std::exp(-x)), 1)
                     : SignedLog::from_log(-x + std::log1p(std::exp(x)), 1);
    if (x > 0.0) {
        out.z_p = SignedLog::from_log(log_one_minus_exp(x), 1);
    } else if (x < 0.0) {
        // |1 - e^{-x}| = e^{-x} - 1, guarded against expm1 overflow
        const double ax = -x;
        const double lm = ax > 30.0 ? ax + std::log1p(-std::exp(-ax)) : std::log(std::expm1(ax));
        out.z_p = SignedLog::from_log(lm, -1);
    } else {
        out.z_p = SignedLog::zero();
    }
    return out;
}

SectorWeights sector_weights(int n_sites, const ThermalParams& params) {
    check_common(n_sites, 0, params);
    if (params.beta_is_infinite()) {
        const auto even = detail::build_ground_sector(n_sites, Sector::Even, params);
        const auto odd = detail::build_ground_sector(n_sites, Sector::Odd, params);
        return detail::ground_sector_weights(even, odd);
    }
    const auto even = detail::build_sector_data(n_sites, Sector::Even, params);
    const auto odd = detail::build_sector_data(n_sites, Sector::Odd, params);
    const auto parts = detail::sector_partitions(even, odd);
    SectorWeights w;
    w.w_plus = parts.z_plus.is_zero() ? 0.0 : (parts.z_plus / parts.z_total).value();
    w.w_minus = parts.z_minus.is_zero() ? 0.0 : (parts.z_minus / parts.z_total).value();
    return w;
}

SectorWeights parity_weight_decay(double w_plus_initial, int n_sites, double gamma_plus,
                                  double gamma_minus, double t) {
    if (n_sites < 2) throw ConfigError("chain needs at least 2 sites");
    if (gamma_plus < 0.0 || gamma_minus < 0.0) throw ConfigError("rates must be nonnegative");
    if (t < 0.0) throw ConfigError("time must be nonnegative");
    const double decay = std::exp(-n_sites * (gamma_plus + gamma_minus) * t);
    SectorWeights w;
    w.w_plus = 0.5 * (1.0 + (2.0 * w_plus_initial - 1.0) * decay);
    w.w_minus = 1.0 - w.w_plus;
    return w;
}

SingleModeTerms single_mode_terms(double k, ModeKind kind, long long m,
                                  const ChargerParams& charger, const ThermalParams& params) {
    if (m < 0) throw ConfigError("kick count must be nonnegative");
    if (!(params.beta >= 0.0)) throw ConfigError("beta must be nonnegative");
    if (params.beta_is_infinite())
        throw ConfigError("single-mode terms need finite beta; the ground-state limit "
                          "bypasses partition products");
    SingleModeTerms out;
    out.b_zp = SignedLog::zero();
    if (kind == ModeKind::Self) {
        out.a = std::tanh(0.5 * params.beta * bdg_params(k, params.j_th, params.h_th).epsilon);
        out.b_zp = mode_partition(k, kind, params).z;
        return out;
    }
    const BdGParams bdg = bdg_params(k, params.j_th, params.h_th);
    const double br = observable_bracket(bdg, k, m, charger);
    out.a = 2.0 * std::tanh(0.5 * params.beta * bdg.e) * br;
    if (br != 0.0) out.b_zp = pair_b_prefactor(bdg, params.beta) * SignedLog::from_value(br);
    return out;
}

double thermal_energy(int n_sites, long long m, const ChargerParams& charger,
                      const ThermalParams& params) {
    check_common(n_sites, m, params);
    if (params.beta_is_infinite()) {
        const auto even = detail::build_ground_sector(n_sites, Sector::Even, params);
        const auto odd = detail::build_ground_sector(n_sites, Sector::Odd, params);
        const auto w = detail::ground_sector_weights(even, odd);
        double e = 0.0;
        if (w.w_plus > 0.0) e += w.w_plus * ground_energy(even, m, charger);
        if (w.w_minus > 0.0) e += w.w_minus * ground_energy(odd, m, charger);
        return e;
    }
    const auto even_data = detail::build_sector_data(n_sites, Sector::Even, params);
    const auto odd_data = detail::build_sector_data(n_sites, Sector::Odd, params);
    const auto parts = detail::sector_partitions(even_data, odd_data);
    const auto even = build_assembly(even_data, charger, params);
    const auto odd = build_assembly(odd_data, charger, params);
    return assemble_energy(even, odd, parts.z_total, m, charger.g);
}

std::vector<double> thermal_energy_trajectory(int n_sites, long long m_max,
                                              const ChargerParams& charger,
                                              const ThermalParams& params) {
    check_common(n_sites, m_max, params);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(m_max) + 1);
    if (params.beta_is_infinite()) {
        const auto even = detail::build_ground_sector(n_sites, Sector::Even, params);
        const auto odd = detail::build_ground_sector(n_sites, Sector::Odd, params);
        const auto w = detail::ground_sector_weights(even, odd);
        for (long long m = 0; m <= m_max; ++m) {
            double e = 0.0;
            if (w.w_plus > 0.0) e += w.w_plus * ground_energy(even, m, charger);
            if (w.w_minus > 0.0) e += w.w_minus * ground_energy(odd, m, charger);
            out.push_back(e);
        }
        return out;
    }
    const auto even_data = detail::build_sector_data(n_sites, Sector::Even, params);
    const auto odd_data = detail::build_sector_data(n_sites, Sector::Odd, params);
    const auto parts = detail::sector_partitions(even_data, odd_data);
    const auto even = build_assembly(even_data, charger, params);
    const auto odd = build_assembly(odd_data, charger, params);
    for (long long m = 0; m <= m_max; ++m)
        out.push_back(assemble_energy(even, odd, parts.z_total, m, charger.g));
    return out;
}

double local_limit_energy(int n_sites, long long m, double g, double h_th, double beta) {
    if (n_sites < 2) throw ConfigError("chain needs at least 2 sites");
    if (m < 0) throw ConfigError("kick count must be nonnegative");
    if (!(beta >= 0.0)) throw ConfigError("beta must be nonnegative");
    double mz;
    if (std::isinf(beta))
        mz = h_th > 0.0 ? 1.0 : (h_th < 0.0 ? -1.0 : 0.0);
    else
        mz = std::tanh(beta * h_th);
    const long long r = m % n_sites;
    if (r == 0) return -0.5 * g * n_sites * mz;
    if (n_sites % 2 == 0 && r == n_sites / 2)
        return 0.5 * g * n_sites * std::pow(mz, n_sites - 1);
    return 0.0;
}

double normalized_energy(double e_m, double e_0, int n_sites) {
    if (n_sites < 1) throw ConfigError("chain needs at least 1 site");
    return (e_m - e_0) / n_sites;
}

double thermodynamic_limit_energy(long long m, const ChargerParams& charger,
                                  const ThermalParams& params) {
    if (m < 0) throw ConfigError("kick count must be nonnegative");
    if (!(params.beta >= 0.0)) throw ConfigError("beta must be nonnegative");
    const bool ground = params.beta_is_infinite();
    const auto integrand = [&](double k) {
        const BdGParams bdg = bdg_params(k, params.j_th, params.h_th);
        const double fac = ground ? 2.0 : 2.0 * std::tanh(0.5 * params.beta * bdg.e);
        return fac * observable_bracket(bdg, k, m, charger);
    };
    return charger.g / (4.0 * kPi) * gk15(integrand, 0.0, kPi, 1e-10, 0);
}

}  // namespace qb
