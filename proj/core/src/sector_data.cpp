#include "sector_data.hpp"

#include "qb/errors.hpp"

namespace qb::detail {

void ExclusionProduct::build(const std::vector<ModeData>& modes) {
    log_all_ = 0.0;
    sign_all_ = 1;
    zero_count_ = 0;
    zero_index_ = 0;
    log_factors_.assign(modes.size(), 0.0);
    sign_factors_.assign(modes.size(), 0);
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const SignedLog& f = modes[i].z_p;
        log_factors_[i] = f.log_mag;
        sign_factors_[i] = f.sign;
        if (f.is_zero()) {
            ++zero_count_;
            zero_index_ = i;
        } else {
            log_all_ += f.log_mag;
            sign_all_ *= f.sign;
        }
    }
}

SignedLog ExclusionProduct::total() const {
    if (zero_count_ > 0) return SignedLog::zero();
    return SignedLog::from_log(log_all_, sign_all_);
}

SignedLog ExclusionProduct::excluding(std::size_t index) const {
    if (zero_count_ >= 2) return SignedLog::zero();
    if (zero_count_ == 1) {
        if (index != zero_index_) return SignedLog::zero();
        return SignedLog::from_log(log_all_, sign_all_);
    }
    return SignedLog::from_log(log_all_ - log_factors_[index], sign_all_ * sign_factors_[index]);
}

SectorData build_sector_data(int n_sites, Sector sector, const ThermalParams& params) {
    SectorData out;
    out.sector = sector;
    out.sigma = sector == Sector::Even ? 1 : -1;
    const ModeGrid grid = build_grid(n_sites, sector);
    out.modes.reserve(grid.pairs.size() + grid.self_modes.size());
    for (double k : grid.pairs) {
        ModeData mode;
        mode.k = k;
        mode.kind = ModeKind::Pair;
        mode.bdg = bdg_params(k, params.j_th, params.h_th);
        const ModePartition part = mode_partition(k, ModeKind::Pair, params);
        mode.z = part.z;
        mode.z_p = part.z_p;
        out.modes.push_back(mode);
    }
    out.n_pairs = out.modes.size();
    for (double k : grid.self_modes) {
        ModeData mode;
        mode.k = k;
        mode.kind = ModeKind::Self;
        mode.bdg = bdg_params(k, params.j_th, params.h_th);
        const ModePartition part = mode_partition(k, ModeKind::Self, params);
        mode.z = part.z;
        mode.z_p = part.z_p;
        out.modes.push_back(mode);
    }
    out.z_bc = SignedLog::one();
    for (const ModeData& mode : out.modes) out.z_bc *= mode.z;
    out.excl.build(out.modes);
    out.z_p_bc = out.excl.total();
    return out;
}

SectorPartitions sector_partitions(const SectorData& even, const SectorData& odd) {
    const SignedLog half = SignedLog::from_value(0.5);
    SectorPartitions out;
    out.z_plus = (even.z_bc + even.z_p_bc) * half;
    out.z_minus = (odd.z_bc - odd.z_p_bc) * half;
    // The exact Z_+- are strictly positive; a nonpositive sign only arises when
    // the subtraction cancels below double resolution, so the weight saturates
    // to zero rather than going negative.
    if (out.z_plus.sign < 0) out.z_plus = SignedLog::zero();
    if (out.z_minus.sign < 0) out.z_minus = SignedLog::zero();
    out.z_total = out.z_plus + out.z_minus;
    if (out.z_total.sign <= 0) throw NumericalError("parity-resolved partition function vanished");
    return out;
}

}  // namespace qb::detail
