// baselines.hpp — the two literature weight layouts used for comparison, and
// the strategy-generic entry points.
//
// stacked:   uniform tiles from generate_tiles, each at (0,0) of its macro,
//            piled along D_m in workload order. No packing, no folding.
// flattened: each layer's weights, K-major then (C,FX,FY)-minor, cut into
//            D_i*D_o-element slices that fill successive (macro, dm) slots.
//            A slice keeps whole K rows along D_o when they fit, and is
//            reshaped to full D_o-wide rows otherwise.
#pragma once

#include <cstdint>

#include "imcpack/packing.hpp"

namespace imcpack {

PackOutcome map_stacked(const Workload& workload, const ImcArchitecture& arch);
PackOutcome map_flattened(const Workload& workload, const ImcArchitecture& arch);

PackOutcome map_workload(const Workload& workload, const ImcArchitecture& arch, Strategy strategy,
                         const PackOptions& options = {});

struct MinDmOptions {
    PackOptions pack;
    std::uint64_t ceiling = 4096;
};

// Smallest Dm (arch.Dm is ignored) at which the strategy fits on chip, by
// linear search upward from the volume / tile-height lower bound. Throws
// Error when nothing up to the ceiling fits.
std::uint64_t min_dm_for_fit(const Workload& workload, const ImcArchitecture& arch, Strategy strategy,
                             const MinDmOptions& options = {});

}  // namespace imcpack
