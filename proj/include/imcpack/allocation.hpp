// allocation.hpp — where every weight tile lives, plus the independent
// occupancy validator and the versioned allocation export.
//
// Export schema (JSON, "imcpack.allocation" version 1):
//   {
//     "schema": "imcpack.allocation", "version": 1,
//     "strategy": "packed" | "stacked" | "flattened",
//     "workload": <name>,
//     "geometry": {"Di", "Do", "Dh", "Dm"},
//     "fit_on_chip": bool,
//     "layers": [{"layer", "Ti", "To", "Th", "Tm", "th_gather",
//                 "accumulation_depth", "folds": [["K", 2], ...]}],
//     "entries": [{"layer", "macro", "dm", "di", "do", "Ti", "To", "Tm",
//                  "weights"}]
//   }
// Entry extents are the occupied cuboid; "weights" is the number of weight
// elements it stores (Ti*To*Tm except for partial flattened slices).
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "imcpack/architecture.hpp"
#include "imcpack/workload.hpp"

namespace imcpack {

enum class Strategy { packed, stacked, flattened };

std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view s);

// Per-layer execution view of a mapping, used by the cost model.
struct LayerMapping {
    std::string layer_id;
    std::uint64_t Ti = 1;
    std::uint64_t To = 1;
    std::uint64_t Th = 1;
    std::uint64_t Tm = 1;
    std::uint64_t th_gather = 1;          // K part of Th
    std::uint64_t accumulation_depth = 1;  // input-relevant factors in Tm
    std::vector<Lpf> folds;

    bool operator==(const LayerMapping&) const = default;
};

struct AllocationEntry {
    std::string layer_id;
    std::uint64_t macro = 0;
    std::uint64_t dm = 0;
    std::uint64_t di = 0;
    std::uint64_t do_ = 0;
    std::uint64_t Ti = 1;
    std::uint64_t To = 1;
    std::uint64_t Tm = 1;
    std::uint64_t weights = 1;

    bool operator==(const AllocationEntry&) const = default;
};

struct Geometry {
    std::uint64_t Di = 1;
    std::uint64_t Do = 1;
    std::uint64_t Dh = 1;
    std::uint64_t Dm = 1;

    bool operator==(const Geometry&) const = default;
};

Geometry geometry_of(const ImcArchitecture& arch);

// A mapping that does not fit on chip keeps its per-layer view (so it can
// still be costed with per-inference weight reloads) and has no entries.
struct Allocation {
    Strategy strategy = Strategy::packed;
    Geometry geometry;
    bool fit_on_chip = false;
    std::vector<LayerMapping> layers;
    std::vector<AllocationEntry> entries;

    const LayerMapping* find_layer(std::string_view id) const;

    bool operator==(const Allocation&) const = default;
};

std::string export_allocation(const Allocation& alloc, std::string_view workload_name);
Allocation import_allocation(std::string_view text);

// Rasterizes every entry into per-macro occupancy grids and checks bounds,
// overlaps, one tile per layer per macro (packed and stacked only), entry
// counts against Th, and exact weight coverage. Returns one line per
// violation; empty means valid.
std::vector<std::string> validate_allocation(const Allocation& alloc, const Workload& workload,
                                             const Geometry& geometry);

}  // namespace imcpack
