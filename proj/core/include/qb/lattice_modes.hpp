#pragma once

#include <complex>
#include <vector>

namespace qb {

using complexd = std::complex<double>;

// Periodically kicked transverse-field coupling: J on the Ising bonds, kick
// angle b, battery field g. Defaults are the self-dual point.
struct ChargerParams {
    double j = 3.14159265358979323846 / 4.0;
    double b = -3.14159265358979323846 / 4.0;
    double g = 1.0;
};

enum class Sector { Even, Odd };  // Even <-> antiperiodic grid, Odd <-> periodic grid

// Momentum grid K_p = {(2n + p) pi / N}, folded to canonical (k, -k) pairs with
// representative in (0, pi) plus self-paired momenta {0, pi}. 2*pairs + selfs = N.
struct ModeGrid {
    int n_sites = 0;
    Sector sector = Sector::Even;
    std::vector<double> pairs;       // ascending, exclusive (0, pi)
    std::vector<double> self_modes;  // subset of {0, pi}
};

ModeGrid build_grid(int n_sites, Sector sector);

// Single-mode Bogoliubov-de Gennes parameters of the transverse-field chain.
struct BdGParams {
    double epsilon = 0.0;  // 2 (j cos k - h)
    double delta = 0.0;    // 2 j sin k
    double e = 0.0;        // hypot(epsilon, delta)
};

BdGParams bdg_params(double k, double j, double h);

// One period of the kicked evolution restricted to the (k, -k) even-occupation
// block in the {|0_k 0_-k>, |1_k 1_-k>} basis, where the pair Hamiltonians are
// H_I|block = 2J cos k (1 - tz) - 2J sin k tx and H_K|block = -2b (1 - tz).
// Dropping overall phases, one period is the 2x2 product
//   exp(-2ib tz) exp(2iJ[cos k tz + sin k tx]) = [[conj(a), -conj(b)], [b, a]].
struct FloquetMode {
    complexd alpha;  // e^{2ib} (cos 2J - i sin 2J cos k), the lower-right entry
    complexd beta;   // i e^{2ib} sin 2J sin k, the lower-left entry
    double xi = 0.0;     // Re(alpha) = half trace; xi = cos2b cos2J + sin2b sin2J cos k
    double theta = 0.0;  // arccos(xi)
};

FloquetMode floquet_one_kick(double k, double j, double b);

// Chebyshev second-kind evaluation, U_n(cos t) = sin((n+1)t)/sin t, defined for
// n >= -2 (U_{-1} = 0, U_{-2} = -1). Near-degenerate |x| -> 1 uses the exact
// three-term recurrence, which reduces to U_n(+-1) = (+-1)^n (n+1) at the ends.
double chebyshev_u(long long n, double x);

// m-th power of the one-kick mode matrix:
//   alpha(m) = alpha U_{m-1}(xi) - U_{m-2}(xi),  beta(m) = beta U_{m-1}(xi).
FloquetMode floquet_power(const FloquetMode& mode, long long m);

// Coefficients of the kick-evolved occupation observable on the pair block,
// U^dag(m) tz U(m) = c_z tz + c_x tx + c_y ty (unit Bloch vector).
struct EvolvedObservable {
    double c_z = 1.0;  // 1 - 2 |beta(m)|^2
    double c_x = 0.0;  // -2 Re[conj(alpha(m)) beta(m)]
    double c_y = 0.0;  // -2 Im[conj(alpha(m)) beta(m)]
};

EvolvedObservable evolved_observable(const FloquetMode& powered);

}  // namespace qb
