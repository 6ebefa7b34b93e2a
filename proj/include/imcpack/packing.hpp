// packing.hpp — column generation, column-to-macro allocation and the
// folding retry loop that together place a whole network in
// D_i x D_o x D_h x D_m.
//
//   tiles -> supertiles -> columns (2D, D_i x D_o) -> macros (1D, D_h x D_m)
//     ^                                                  |
//     +------------- fold one LPF into T_m <---- fail ---+
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "imcpack/allocation.hpp"
#include "imcpack/architecture.hpp"
#include "imcpack/exec.hpp"
#include "imcpack/tiling.hpp"
#include "imcpack/workload.hpp"

namespace imcpack {

struct ColumnPlacement {
    std::size_t supertile = 0;  // index into the supertile pool
    std::uint64_t di = 0;
    std::uint64_t do_ = 0;

    bool operator==(const ColumnPlacement&) const = default;
};

struct Column {
    std::vector<ColumnPlacement> placements;
    std::uint64_t height = 0;       // largest STm among the placed supertiles
    std::uint64_t tile_volume = 0;  // sum of member tile volumes
    double density = 0.0;           // tile_volume / (Di * Do * height)

    bool operator==(const Column&) const = default;
};

// Layer indices of every tile in the column.
std::vector<std::size_t> column_layers(const Column& column, std::span<const SuperTile> supertiles,
                                       std::span<const Tile> tiles);

struct ColumnOptions {
    // Largest candidate subset enumerated exhaustively.
    std::size_t max_subset = 8;
    // Exhaustive enumeration is used while at most this many supertiles are
    // still available; beyond it every available supertile seeds a greedy
    // density-ordered growth.
    std::size_t exhaustive_pool = 12;
    // Merge pairs of emitted columns whenever a re-covered union packs
    // without adding height.
    bool merge_pass = true;
    // Search nodes spent choosing a cover for one merge candidate.
    std::size_t merge_nodes = 512;
    ExecPolicy policy = ExecPolicy::parallel;
};

// Emits the densest feasible column, consumes one copy of each member tile,
// and repeats until every tile copy (Th per layer) is placed; then merges
// columns pairwise (see merge_pass).
std::vector<Column> generate_columns(std::span<const Tile> tiles, std::span<const SuperTile> supertiles,
                                     const ImcArchitecture& arch, const ColumnOptions& options = {});

struct ColumnSlot {
    std::uint64_t macro = 0;
    std::uint64_t dm_offset = 0;

    bool operator==(const ColumnSlot&) const = default;
};

// First-fit decreasing by column height over the macros, never putting two
// tiles of one layer in the same macro. nullopt when a column cannot be
// placed.
std::optional<std::vector<ColumnSlot>> allocate_columns(std::span<const Column> columns,
                                                        std::span<const SuperTile> supertiles,
                                                        std::span<const Tile> tiles, const ImcArchitecture& arch);

struct TraceEvent {
    enum class Kind { fold, skip, infeasible };
    Kind kind = Kind::fold;
    std::string layer_id;
    Lpf lpf;
    // Tile shape after a fold.
    std::uint64_t Ti = 0;
    std::uint64_t To = 0;
    std::uint64_t Tm = 0;
    std::string note;

    bool operator==(const TraceEvent&) const = default;
};

std::string format_event(const TraceEvent& e);

// Folds the smallest spatial LPF of the lowest-latency layer into T_m,
// preferring K factors from T_i over factors from T_o. Layers whose fold
// would push T_m past D_m are passed over. nullopt when no layer can fold;
// the reasons are appended to `trace`.
std::optional<std::vector<Tile>> fold_layer(std::span<const Tile> tiles, std::span<const std::uint64_t> latencies,
                                            const ImcArchitecture& arch, std::vector<TraceEvent>* trace = nullptr);

LayerMapping mapping_of(const Tile& tile);

Allocation build_packed_allocation(std::span<const Tile> tiles, std::span<const SuperTile> supertiles,
                                   std::span<const Column> columns, std::span<const ColumnSlot> slots,
                                   const ImcArchitecture& arch);

struct PackOptions {
    SupertileOptions supertiles;
    ColumnOptions columns;
};

struct PackOutcome {
    // On failure fit_on_chip is false, entries are empty, and the layer views
    // hold the unfolded tiling.
    Allocation allocation;
    std::vector<Tile> tiles;
    std::vector<SuperTile> supertiles;
    std::vector<Column> columns;
    std::vector<TraceEvent> fold_trace;

    bool ok() const { return allocation.fit_on_chip; }
    std::size_t fold_count() const;
};

// Throws ValidationError when a layer's weight precision exceeds the
// architecture's cell precision.
void check_precision(const Workload& workload, const ImcArchitecture& arch);

PackOutcome pack_network(const Workload& workload, const ImcArchitecture& arch, const PackOptions& options = {});

}  // namespace imcpack
