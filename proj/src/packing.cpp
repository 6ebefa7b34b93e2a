#include "imcpack/packing.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "imcpack/error.hpp"

namespace imcpack {

std::optional<std::vector<ColumnSlot>> allocate_columns(std::span<const Column> columns,
                                                        std::span<const SuperTile> supertiles,
                                                        std::span<const Tile> tiles, const ImcArchitecture& arch) {
    std::vector<std::size_t> order(columns.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return columns[a].height > columns[b].height; });

    std::vector<std::uint64_t> used(arch.Dh, 0);
    // resident[m][t]: macro m already holds a copy of pool tile t.
    std::vector<std::vector<char>> resident(arch.Dh, std::vector<char>(tiles.size(), 0));
    std::vector<ColumnSlot> slots(columns.size());

    for (auto c : order) {
        std::vector<std::size_t> members;
        for (const auto& p : columns[c].placements)
            for (auto t : supertiles[p.supertile].tiles) members.push_back(t);

        bool placed = false;
        for (std::uint64_t m = 0; m < arch.Dh && !placed; ++m) {
            if (used[m] + columns[c].height > arch.Dm) continue;
            bool clash = false;
            for (auto t : members) clash = clash || resident[m][t];
            if (clash) continue;
            slots[c] = {m, used[m]};
            used[m] += columns[c].height;
            for (auto t : members) resident[m][t] = 1;
            placed = true;
        }
        if (!placed) return std::nullopt;
    }
    return slots;
}

std::string format_event(const TraceEvent& e) {
    std::ostringstream os;
    switch (e.kind) {
        case TraceEvent::Kind::fold:
            os << "fold " << e.layer_id << ": (" << to_string(e.lpf.dim) << "," << e.lpf.prime << ") -> Ti=" << e.Ti
               << " To=" << e.To << " Tm=" << e.Tm;
            break;
        case TraceEvent::Kind::skip:
            os << "skip " << e.layer_id << ": " << e.note;
            break;
        case TraceEvent::Kind::infeasible:
            os << "infeasible" << (e.layer_id.empty() ? "" : " " + e.layer_id) << ": " << e.note;
            break;
    }
    return os.str();
}

std::optional<std::vector<Tile>> fold_layer(std::span<const Tile> tiles, std::span<const std::uint64_t> latencies,
                                            const ImcArchitecture& arch, std::vector<TraceEvent>* trace) {
    std::vector<std::size_t> order(tiles.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return latencies[a] < latencies[b]; });

    std::vector<TraceEvent> skipped;
    for (auto i : order) {
        const auto& t = tiles[i];
        // K factors live in ti_lpfs, C/FX/FY factors in to_lpfs; both are
        // sorted by (dim, prime) so the smallest K prime is the first entry.
        std::optional<Lpf> pick;
        bool from_ti = false;
        if (!t.ti_lpfs.empty()) {
            pick = t.ti_lpfs.front();
            from_ti = true;
        } else if (!t.to_lpfs.empty()) {
            pick = *std::min_element(t.to_lpfs.begin(), t.to_lpfs.end(), [](const Lpf& a, const Lpf& b) {
                return std::pair(a.prime, a.dim) < std::pair(b.prime, b.dim);
            });
        }
        if (!pick) {
            skipped.push_back({TraceEvent::Kind::skip, t.layer_id, {}, 0, 0, 0, "no spatial LPF left to fold"});
            continue;
        }
        if (t.Tm * pick->prime > arch.Dm) {
            std::ostringstream os;
            os << "folding (" << to_string(pick->dim) << "," << pick->prime << ") needs Tm=" << t.Tm * pick->prime
               << " > Dm=" << arch.Dm;
            skipped.push_back({TraceEvent::Kind::skip, t.layer_id, *pick, 0, 0, 0, os.str()});
            continue;
        }

        std::vector<Tile> out(tiles.begin(), tiles.end());
        auto& f = out[i];
        auto& src = from_ti ? f.ti_lpfs : f.to_lpfs;
        src.erase(std::find(src.begin(), src.end(), *pick));
        if (from_ti)
            f.Ti /= pick->prime;
        else
            f.To /= pick->prime;
        f.Tm *= pick->prime;
        f.tm_lpfs.insert(std::upper_bound(f.tm_lpfs.begin(), f.tm_lpfs.end(), *pick), *pick);
        f.folded.push_back(*pick);
        if (trace) trace->push_back({TraceEvent::Kind::fold, f.layer_id, *pick, f.Ti, f.To, f.Tm, {}});
        return out;
    }
    if (trace) trace->insert(trace->end(), skipped.begin(), skipped.end());
    return std::nullopt;
}

LayerMapping mapping_of(const Tile& t) {
    LayerMapping m;
    m.layer_id = t.layer_id;
    m.Ti = t.Ti;
    m.To = t.To;
    m.Th = t.Th;
    m.Tm = t.Tm;
    m.th_gather = t.th_gather();
    m.accumulation_depth = t.accumulation_depth();
    m.folds = t.folded;
    return m;
}

Allocation build_packed_allocation(std::span<const Tile> tiles, std::span<const SuperTile> supertiles,
                                   std::span<const Column> columns, std::span<const ColumnSlot> slots,
                                   const ImcArchitecture& arch) {
    Allocation a;
    a.strategy = Strategy::packed;
    a.geometry = geometry_of(arch);
    a.fit_on_chip = true;
    for (const auto& t : tiles) a.layers.push_back(mapping_of(t));
    for (std::size_t c = 0; c < columns.size(); ++c) {
        for (const auto& p : columns[c].placements) {
            auto z = slots[c].dm_offset;
            for (auto ti : supertiles[p.supertile].tiles) {
                const auto& t = tiles[ti];
                a.entries.push_back({t.layer_id, slots[c].macro, z, p.di, p.do_, t.Ti, t.To, t.Tm, t.volume()});
                z += t.Tm;
            }
        }
    }
    std::sort(a.entries.begin(), a.entries.end(), [](const AllocationEntry& x, const AllocationEntry& y) {
        return std::tie(x.macro, x.dm, x.di, x.do_, x.layer_id) < std::tie(y.macro, y.dm, y.di, y.do_, y.layer_id);
    });
    return a;
}

std::size_t PackOutcome::fold_count() const {
    return static_cast<std::size_t>(std::count_if(fold_trace.begin(), fold_trace.end(), [](const TraceEvent& e) {
        return e.kind == TraceEvent::Kind::fold;
    }));
}

void check_precision(const Workload& workload, const ImcArchitecture& arch) {
    for (const auto& l : workload.layers)
        if (l.weight_bits > arch.weight_bits)
            throw ValidationError("layer '" + l.id + "' uses " + std::to_string(l.weight_bits) +
                                  "-bit weights but the architecture stores " + std::to_string(arch.weight_bits) +
                                  "-bit weights");
}

PackOutcome pack_network(const Workload& workload, const ImcArchitecture& arch, const PackOptions& options) {
    validate(workload);
    validate(arch);
    check_precision(workload, arch);

    PackOutcome out;
    out.tiles = generate_tile_pool(workload, arch);
    out.allocation.strategy = Strategy::packed;
    out.allocation.geometry = geometry_of(arch);
    for (const auto& t : out.tiles) out.allocation.layers.push_back(mapping_of(t));

    // Folding conserves volume, so this bound cannot be beaten.
    const auto volume = workload.total_weight_volume();
    if (volume > arch.capacity_weights()) {
        std::ostringstream os;
        os << "weight volume " << volume << " exceeds capacity Di*Do*Dh*Dm = " << arch.capacity_weights();
        out.fold_trace.push_back({TraceEvent::Kind::infeasible, {}, {}, 0, 0, 0, os.str()});
        return out;
    }
    // Folding only grows Tm.
    bool too_tall = false;
    for (const auto& t : out.tiles) {
        if (t.Tm > arch.Dm) {
            out.fold_trace.push_back({TraceEvent::Kind::infeasible, t.layer_id, {}, 0, 0, 0,
                                      "Tm=" + std::to_string(t.Tm) + " exceeds Dm=" + std::to_string(arch.Dm)});
            too_tall = true;
        }
    }
    if (too_tall) return out;

    auto tiles = out.tiles;
    std::vector<std::uint64_t> latencies(tiles.size());
    for (;;) {
        auto sts = generate_supertiles(tiles, arch, options.supertiles);
        auto cols = generate_columns(tiles, sts, arch, options.columns);
        if (auto slots = allocate_columns(cols, sts, tiles, arch)) {
            out.allocation = build_packed_allocation(tiles, sts, cols, *slots, arch);
            out.tiles = std::move(tiles);
            out.supertiles = std::move(sts);
            out.columns = std::move(cols);
            return out;
        }
        for (std::size_t i = 0; i < tiles.size(); ++i) {
            const auto& l = workload.layers[tiles[i].layer];
            latencies[i] = tiles[i].Tm * l.OX * l.OY;
        }
        auto folded = fold_layer(tiles, latencies, arch, &out.fold_trace);
        if (!folded) return out;
        tiles = std::move(*folded);
    }
}

}  // namespace imcpack
