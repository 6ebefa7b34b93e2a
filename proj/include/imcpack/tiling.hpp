// tiling.hpp — uniform per-layer weight tiles and the supertile pool.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "imcpack/architecture.hpp"
#include "imcpack/workload.hpp"

namespace imcpack {

struct SubsetProduct {
    std::vector<std::uint64_t> factors;  // sorted ascending
    std::uint64_t product = 1;
};

// Sub-multiset of `factors` with the largest product <= cap. Ties go to the
// subset with fewer factors, then to the lexicographically smallest sorted
// factor list. Exhaustive over per-value multiplicities.
SubsetProduct max_subset_product(std::span<const std::uint64_t> factors, std::uint64_t cap);

struct LpfSelection {
    LpfSet chosen;
    LpfSet rest;
    std::uint64_t product = 1;
};

// Same optimum as max_subset_product over the primes; among equal-prime
// factors with different tags the smallest tags are taken.
LpfSelection select_lpfs(std::span<const Lpf> pool, std::uint64_t cap);

// Th identical copies of a Ti x To x Tm block, one per macro.
struct Tile {
    std::size_t layer = 0;  // index into the workload
    std::string layer_id;
    std::uint64_t Ti = 1;
    std::uint64_t To = 1;
    std::uint64_t Th = 1;
    std::uint64_t Tm = 1;
    LpfSet ti_lpfs;
    LpfSet to_lpfs;
    LpfSet th_lpfs;
    LpfSet tm_lpfs;
    std::vector<Lpf> folded;  // in folding order; also present in tm_lpfs

    std::uint64_t footprint() const { return Ti * To; }
    std::uint64_t volume() const { return Ti * To * Tm; }
    // Th split into input-relevant factors (outputs accumulate across macros)
    // and K factors (outputs gathered).
    std::uint64_t th_accumulate() const;
    std::uint64_t th_gather() const;
    // Temporal steps that accumulate into the same outputs.
    std::uint64_t accumulation_depth() const;

    bool operator==(const Tile&) const = default;
};

// Ti from the K factors (cap Di), To from the C/FX/FY factors (cap Do), Th
// from the leftovers with input-relevant factors offered first (cap Dh), Tm
// the product of everything left. Dm is not enforced here.
Tile generate_tiles(const Layer& layer, const ImcArchitecture& arch);
std::vector<Tile> generate_tile_pool(const Workload& workload, const ImcArchitecture& arch);

// A D_m stack of tiles from distinct layers, bottom to top.
struct SuperTile {
    std::vector<std::size_t> tiles;  // indices into the tile pool
    std::uint64_t STi = 0;
    std::uint64_t STo = 0;
    std::uint64_t STm = 0;
    std::uint64_t tile_volume = 0;  // sum of member Ti*To*Tm

    std::uint64_t footprint() const { return STi * STo; }
    std::uint64_t bounding_volume() const { return STi * STo * STm; }

    bool operator==(const SuperTile&) const = default;
};

struct SupertileOptions {
    std::size_t max_stack = 6;
    // Multi-tile stacks kept after sorting; singletons are always kept.
    std::size_t max_stacks = 256;
};

// Every singleton plus each stack of >= 2 distinct-layer tiles whose summed
// Tm stays within both the largest pool Tm and Dm. Ordered by descending
// bounding volume, then by member list.
std::vector<SuperTile> generate_supertiles(std::span<const Tile> pool, const ImcArchitecture& arch,
                                           const SupertileOptions& options = {});

}  // namespace imcpack
