#pragma once

// Dense Jordan-Wigner momentum operators on the full 2^N space, built directly
// from site operators: c_j = (prod_{l<j} sigma^z_l) sigma^+_j with site l in
// bit l and bit value 0 meaning spin up, then c_k = N^{-1/2} sum_j e^{-ikj} c_j
// and the pairing operator i c_{-k} c_k. Shares nothing with the library's
// momentum-space path; used to cross-check the moment ODEs against the exact
// Liouvillian at small N.

#include <Eigen/Dense>
#include <cmath>
#include <complex>

namespace jw {

using Eigen::MatrixXcd;
using complexd = std::complex<double>;

// c_j in the computational basis: clears bit j (down = occupied) with the
// parity of the preceding bits as sign.
inline MatrixXcd annihilation_site(int n_sites, int j) {
    const int dim = 1 << n_sites;
    MatrixXcd c = MatrixXcd::Zero(dim, dim);
    for (int a = 0; a < dim; ++a) {
        if (!((a >> j) & 1)) continue;
        double sign = 1.0;
        for (int l = 0; l < j; ++l) sign *= (a >> l) & 1 ? -1.0 : 1.0;
        c(a ^ (1 << j), a) = sign;
    }
    return c;
}

inline MatrixXcd annihilation_momentum(int n_sites, double k) {
    const int dim = 1 << n_sites;
    MatrixXcd ck = MatrixXcd::Zero(dim, dim);
    for (int j = 0; j < n_sites; ++j)
        ck += std::exp(complexd(0.0, -k * j)) * annihilation_site(n_sites, j);
    return ck / std::sqrt(static_cast<double>(n_sites));
}

struct PairOperators {
    MatrixXcd n_sym;  // (n_k + n_{-k}) / 2
    MatrixXcd m;      // i c_{-k} c_k
};

inline PairOperators pair_operators(int n_sites, double k) {
    const MatrixXcd ck = annihilation_momentum(n_sites, k);
    const MatrixXcd cmk = annihilation_momentum(n_sites, -k);
    PairOperators ops;
    ops.n_sym = 0.5 * (ck.adjoint() * ck + cmk.adjoint() * cmk);
    ops.m = complexd(0.0, 1.0) * (cmk * ck);
    return ops;
}

inline MatrixXcd self_occupation(int n_sites, double k) {
    const MatrixXcd ck = annihilation_momentum(n_sites, k);
    return ck.adjoint() * ck;
}

}  // namespace jw
