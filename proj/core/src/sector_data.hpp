#pragma once

// Internal finite-temperature per-sector mode tables shared by the analytic
// energy assembly and the dephasing propagator. Not installed.

#include <cstddef>
#include <vector>

#include "qb/lattice_modes.hpp"
#include "qb/signed_log.hpp"
#include "qb/thermal_ensemble.hpp"

namespace qb::detail {

struct ModeData {
    double k = 0.0;
    ModeKind kind = ModeKind::Pair;
    BdGParams bdg;       // initial-chain quasiparticle data (j_th, h_th)
    SignedLog z;
    SignedLog z_p;
};

// Product of all z_p with the factor at one index removed. Zero factors are
// tracked by count so a single vanishing z_p still leaves its own exclusion
// product finite and every other exclusion product zero.
class ExclusionProduct {
  public:
    void build(const std::vector<ModeData>& modes);
    SignedLog total() const;
    SignedLog excluding(std::size_t index) const;

  private:
    double log_all_ = 0.0;
    int sign_all_ = 1;
    std::vector<double> log_factors_;
    std::vector<int> sign_factors_;
    std::size_t zero_count_ = 0;
    std::size_t zero_index_ = 0;
};

struct SectorData {
    Sector sector = Sector::Even;
    int sigma = 1;                 // +1 even sector, -1 odd sector
    std::vector<ModeData> modes;   // canonical grid order: pairs then self-modes
    std::size_t n_pairs = 0;       // modes[0..n_pairs) are pairs
    SignedLog z_bc;                // product of z over the grid
    SignedLog z_p_bc;              // product of z_p over the grid
    ExclusionProduct excl;
};

SectorData build_sector_data(int n_sites, Sector sector, const ThermalParams& params);

// Z_+ and Z_- as signed logs; signs saturated to zero when cancellation
// exhausts double precision (the exact values are strictly positive).
struct SectorPartitions {
    SignedLog z_plus;
    SignedLog z_minus;
    SignedLog z_total;
};

SectorPartitions sector_partitions(const SectorData& even, const SectorData& odd);

}  // namespace qb::detail
