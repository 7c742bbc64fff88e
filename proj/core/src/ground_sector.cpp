#include "ground_sector.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "qb/errors.hpp"

namespace qb::detail {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Minimum reachable energy and its configuration count for one parity cell.
struct Cell {
    double e = kInf;
    double count = 0.0;
};

int cell_index(int parity) { return parity > 0 ? 0 : 1; }

void absorb(Cell& cell, double e, double count, double tol) {
    if (count == 0.0) return;
    if (e < cell.e - tol) {
        cell.e = e;
        cell.count = count;
    } else if (e <= cell.e + tol) {
        cell.e = std::min(cell.e, e);
        cell.count += count;
    }
}

GroundMode make_pair_mode(double k, const ThermalParams& params) {
    GroundMode gm;
    gm.k = k;
    gm.kind = ModeKind::Pair;
    gm.bdg = bdg_params(k, params.j_th, params.h_th);
    const double eps = gm.bdg.epsilon;
    const double e = gm.bdg.e;
    // e == 0 collapses the block; the split of the even-block moments is then
    // arbitrary because all four states are exactly degenerate.
    const double n_gs = e > 0.0 ? 0.5 * (1.0 - eps / e) : 0.5;
    const double re_gs = e > 0.0 ? 0.5 * gm.bdg.delta / e : 0.0;
    gm.levels = {
        ModeLevel{eps - e, +1, 1.0, true, +2.0, n_gs, re_gs},
        ModeLevel{eps, -1, 2.0, true, 0.0, 0.5, 0.0},
        ModeLevel{eps + e, +1, 1.0, true, -2.0, 1.0 - n_gs, -re_gs},
    };
    return gm;
}

GroundMode make_self_mode(double k, const ThermalParams& params) {
    GroundMode gm;
    gm.k = k;
    gm.kind = ModeKind::Self;
    gm.bdg = bdg_params(k, params.j_th, params.h_th);
    gm.levels = {
        ModeLevel{0.0, +1, 1.0, false, +1.0, 0.0, 0.0},
        ModeLevel{gm.bdg.epsilon, -1, 1.0, false, -1.0, 1.0, 0.0},
    };
    return gm;
}

}  // namespace

GroundSector build_ground_sector(int n_sites, Sector sector, const ThermalParams& params) {
    GroundSector out;
    out.sector = sector;
    out.sigma = sector == Sector::Even ? 1 : -1;
    const int target = out.sigma;  // restricted fermion parity of this sector

    const ModeGrid grid = build_grid(n_sites, sector);
    out.modes.reserve(grid.pairs.size() + grid.self_modes.size());
    for (double k : grid.pairs) out.modes.push_back(make_pair_mode(k, params));
    for (double k : grid.self_modes) out.modes.push_back(make_self_mode(k, params));

    double scale = 0.0;
    for (const GroundMode& gm : out.modes)
        for (const ModeLevel& lv : gm.levels) scale = std::max(scale, std::abs(lv.energy));
    // Ties between independently accumulated sums drift by O(M ulp scale);
    // physical gaps in the test regimes sit far above this.
    const double tol = 1e-9 * (1.0 + scale * static_cast<double>(out.modes.size()));

    const std::size_t m_count = out.modes.size();
    std::vector<std::array<Cell, 2>> fwd(m_count + 1), bwd(m_count + 1);
    fwd[0][cell_index(+1)] = Cell{0.0, 1.0};
    for (std::size_t i = 0; i < m_count; ++i) {
        for (int parity : {+1, -1}) {
            const Cell& src = fwd[i][cell_index(parity)];
            if (src.count == 0.0) continue;
            for (const ModeLevel& lv : out.modes[i].levels)
                absorb(fwd[i + 1][cell_index(parity * lv.parity)], src.e + lv.energy,
                       src.count * lv.mult, tol);
        }
    }
    bwd[m_count][cell_index(+1)] = Cell{0.0, 1.0};
    for (std::size_t i = m_count; i-- > 0;) {
        for (int parity : {+1, -1}) {
            const Cell& src = bwd[i + 1][cell_index(parity)];
            if (src.count == 0.0) continue;
            for (const ModeLevel& lv : out.modes[i].levels)
                absorb(bwd[i][cell_index(parity * lv.parity)], src.e + lv.energy,
                       src.count * lv.mult, tol);
        }
    }

    const Cell& total = fwd[m_count][cell_index(target)];
    if (total.count == 0.0 || !std::isfinite(total.e))
        throw NumericalError("empty parity-restricted ground manifold");
    out.energy = total.e;
    out.degeneracy = total.count;

    out.level_probs.resize(m_count);
    for (std::size_t i = 0; i < m_count; ++i) {
        const GroundMode& gm = out.modes[i];
        std::vector<double>& probs = out.level_probs[i];
        probs.assign(gm.levels.size(), 0.0);
        for (std::size_t l = 0; l < gm.levels.size(); ++l) {
            const ModeLevel& lv = gm.levels[l];
            for (int p1 : {+1, -1}) {
                const Cell& pre = fwd[i][cell_index(p1)];
                const Cell& suf = bwd[i + 1][cell_index(target * p1 * lv.parity)];
                if (pre.count == 0.0 || suf.count == 0.0) continue;
                if (pre.e + lv.energy + suf.e <= out.energy + tol)
                    probs[l] += pre.count * lv.mult * suf.count;
            }
        }
        for (double& p : probs) p /= out.degeneracy;
    }
    return out;
}

SectorWeights ground_sector_weights(const GroundSector& even, const GroundSector& odd) {
    const double tol = 1e-9 * (1.0 + std::max(std::abs(even.energy), std::abs(odd.energy)));
    if (even.energy < odd.energy - tol) return {1.0, 0.0};
    if (odd.energy < even.energy - tol) return {0.0, 1.0};
    const double total = even.degeneracy + odd.degeneracy;
    return {even.degeneracy / total, odd.degeneracy / total};
}

}  // namespace qb::detail
