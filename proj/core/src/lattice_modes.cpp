#include "qb/lattice_modes.hpp"

#include <algorithm>
#include <cmath>

#include "qb/errors.hpp"

namespace qb {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

ModeGrid build_grid(int n_sites, Sector sector) {
    if (n_sites < 2) throw ConfigError("build_grid: n_sites must be >= 2");
    ModeGrid grid;
    grid.n_sites = n_sites;
    grid.sector = sector;
    const int p = sector == Sector::Even ? 1 : 0;
    // Momenta are q pi / N with q = 2n + p, n = 0..N-1; classification is exact
    // in the integer q: q = 0 and q = N are self-paired, q > N mirrors 2N - q.
    for (int n = 0; n < n_sites; ++n) {
        const int q = 2 * n + p;
        if (q == 0 || q == n_sites) {
            grid.self_modes.push_back(q == 0 ? 0.0 : kPi);
        } else if (q < n_sites) {
            grid.pairs.push_back(q * kPi / n_sites);
        }
    }
    std::sort(grid.self_modes.begin(), grid.self_modes.end());
    return grid;
}

BdGParams bdg_params(double k, double j, double h) {
    BdGParams p;
    p.epsilon = 2.0 * (j * std::cos(k) - h);
    p.delta = 2.0 * j * std::sin(k);
    p.e = std::hypot(p.epsilon, p.delta);
    return p;
}

FloquetMode floquet_one_kick(double k, double j, double b) {
    FloquetMode m;
    const complexd phase = std::exp(complexd(0.0, 2.0 * b));
    m.alpha = phase * complexd(std::cos(2.0 * j), -std::sin(2.0 * j) * std::cos(k));
    m.beta = complexd(0.0, 1.0) * phase * (std::sin(2.0 * j) * std::sin(k));
    m.xi = m.alpha.real();
    m.theta = std::acos(std::clamp(m.xi, -1.0, 1.0));
    return m;
}

double chebyshev_u(long long n, double x) {
    if (n == -2) return -1.0;
    if (n == -1) return 0.0;
    if (n == 0) return 1.0;
    x = std::clamp(x, -1.0, 1.0);
    if (1.0 - std::abs(x) < 1e-8) {
        // Exact polynomial evaluation; the sin ratio loses the argument near the
        // band edges while the recurrence stays uniformly accurate (values <= n+1).
        double um1 = 1.0, um2 = 0.0;  // U_0, U_{-1}
        for (long long i = 1; i <= n; ++i) {
            const double u = 2.0 * x * um1 - um2;
            um2 = um1;
            um1 = u;
        }
        return um1;
    }
    const double t = std::acos(x);
    return std::sin((n + 1) * t) / std::sin(t);
}

FloquetMode floquet_power(const FloquetMode& mode, long long m) {
    if (m < 0) throw ConfigError("floquet_power: m must be >= 0");
    const double u1 = chebyshev_u(m - 1, mode.xi);
    const double u2 = chebyshev_u(m - 2, mode.xi);
    FloquetMode p;
    p.alpha = mode.alpha * u1 - u2;
    p.beta = mode.beta * u1;
    p.xi = p.alpha.real();
    p.theta = std::acos(std::clamp(p.xi, -1.0, 1.0));
    return p;
}

EvolvedObservable evolved_observable(const FloquetMode& powered) {
    EvolvedObservable o;
    const complexd cross = std::conj(powered.alpha) * powered.beta;
    o.c_z = 1.0 - 2.0 * std::norm(powered.beta);
    o.c_x = -2.0 * cross.real();
    o.c_y = -2.0 * cross.imag();
    return o;
}

}  // namespace qb
