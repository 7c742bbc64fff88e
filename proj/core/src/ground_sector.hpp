#pragma once

// Internal beta = infinity machinery: exact parity-restricted ground manifolds
// via a min-plus scan over per-mode levels. Not installed.

#include <cstddef>
#include <vector>

#include "qb/lattice_modes.hpp"
#include "qb/thermal_ensemble.hpp"

namespace qb::detail {

// One eigenlevel of a single momentum block. For pairs the battery observable
// is character * [eps c_z(m) + delta c_x(m)] / E (character +2 ground, 0 odd
// block, -2 excited); for self-modes it is the static value in character.
struct ModeLevel {
    double energy = 0.0;
    int parity = 1;
    double mult = 1.0;
    bool bracket_weighted = false;
    double character = 0.0;
    double n = 0.0;     // Gibbs-limit mode moments of this level
    double re_m = 0.0;
};

struct GroundMode {
    double k = 0.0;
    ModeKind kind = ModeKind::Pair;
    BdGParams bdg;
    std::vector<ModeLevel> levels;
};

// Parity-restricted ground manifold of one boundary-condition grid: total
// energy, total degeneracy, and for every mode the fraction of the manifold
// occupying each of its levels (fractions sum to one per mode).
struct GroundSector {
    Sector sector = Sector::Even;
    int sigma = 1;
    std::vector<GroundMode> modes;
    double energy = 0.0;
    double degeneracy = 0.0;
    std::vector<std::vector<double>> level_probs;
};

GroundSector build_ground_sector(int n_sites, Sector sector, const ThermalParams& params);

// Weights of the two parity sectors in the global ground manifold; ties split
// by degeneracy.
SectorWeights ground_sector_weights(const GroundSector& even, const GroundSector& odd);

}  // namespace qb::detail
