#include "imcpack/baselines.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "imcpack/error.hpp"

namespace imcpack {

namespace {

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

// Extent of an n-weight slice: whole rows of the K x (C*FX*FY) matrix when
// they fit along Do and the rows fit along Di, full-width rows otherwise.
std::pair<std::uint64_t, std::uint64_t> slice_shape(std::uint64_t n, std::uint64_t row, const ImcArchitecture& arch) {
    if (row <= arch.Do && ceil_div(n, row) <= arch.Di) return {ceil_div(n, row), std::min(n, row)};
    return {ceil_div(n, arch.Do), std::min(n, arch.Do)};
}

}  // namespace

PackOutcome map_stacked(const Workload& workload, const ImcArchitecture& arch) {
    validate(workload);
    validate(arch);
    check_precision(workload, arch);

    PackOutcome out;
    out.tiles = generate_tile_pool(workload, arch);
    auto& a = out.allocation;
    a.strategy = Strategy::stacked;
    a.geometry = geometry_of(arch);
    for (const auto& t : out.tiles) a.layers.push_back(mapping_of(t));

    std::vector<std::uint64_t> height(arch.Dh, 0);
    std::uint64_t cursor = 0;
    for (const auto& t : out.tiles) {
        for (std::uint64_t j = 0; j < t.Th; ++j) {
            const auto m = (cursor + j) % arch.Dh;
            a.entries.push_back({t.layer_id, m, height[m], 0, 0, t.Ti, t.To, t.Tm, t.volume()});
            height[m] += t.Tm;
        }
        cursor = (cursor + t.Th) % arch.Dh;
    }
    const auto peak = *std::max_element(height.begin(), height.end());
    a.fit_on_chip = peak <= arch.Dm;
    if (!a.fit_on_chip) {
        a.entries.clear();
        out.fold_trace.push_back({TraceEvent::Kind::infeasible, {}, {}, 0, 0, 0,
                                  "stack height " + std::to_string(peak) + " exceeds Dm=" + std::to_string(arch.Dm)});
    }
    return out;
}

PackOutcome map_flattened(const Workload& workload, const ImcArchitecture& arch) {
    validate(workload);
    validate(arch);
    check_precision(workload, arch);

    PackOutcome out;
    auto& a = out.allocation;
    a.strategy = Strategy::flattened;
    a.geometry = geometry_of(arch);

    const auto plane = arch.plane();
    std::uint64_t slot = 0;
    for (const auto& l : workload.layers) {
        const auto v = l.weight_volume();
        const auto slices = ceil_div(v, plane);
        std::vector<std::uint64_t> per_macro(arch.Dh, 0);
        for (std::uint64_t j = 0; j < slices; ++j, ++slot) {
            const auto n = std::min(plane, v - j * plane);
            const auto m = slot % arch.Dh;
            ++per_macro[m];
            const auto [ti, to] = slice_shape(n, l.reduction_size(), arch);
            a.entries.push_back({l.id, m, slot / arch.Dh, 0, 0, ti, to, 1, n});
        }
        LayerMapping lm;
        lm.layer_id = l.id;
        const auto [ti, to] = slice_shape(std::min(v, plane), l.reduction_size(), arch);
        lm.Ti = ti;
        lm.To = to;
        lm.Th = std::min<std::uint64_t>(arch.Dh, slices);
        lm.Tm = *std::max_element(per_macro.begin(), per_macro.end());
        lm.th_gather = lm.Th;
        lm.accumulation_depth = 1;
        a.layers.push_back(std::move(lm));
    }
    a.fit_on_chip = slot <= arch.Dh * arch.Dm;
    if (!a.fit_on_chip) {
        a.entries.clear();
        out.fold_trace.push_back({TraceEvent::Kind::infeasible, {}, {}, 0, 0, 0,
                                  std::to_string(slot) + " slices exceed Dh*Dm=" + std::to_string(arch.Dh * arch.Dm)});
    }
    return out;
}

PackOutcome map_workload(const Workload& workload, const ImcArchitecture& arch, Strategy strategy,
                         const PackOptions& options) {
    switch (strategy) {
        case Strategy::packed: return pack_network(workload, arch, options);
        case Strategy::stacked: return map_stacked(workload, arch);
        case Strategy::flattened: return map_flattened(workload, arch);
    }
    throw Error("unknown strategy");
}

std::uint64_t min_dm_for_fit(const Workload& workload, const ImcArchitecture& arch, Strategy strategy,
                             const MinDmOptions& options) {
    validate(workload);
    auto probe = arch;
    probe.Dm = 1;
    validate(probe);

    std::uint64_t lower = std::max<std::uint64_t>(1, ceil_div(workload.total_weight_volume(), arch.plane() * arch.Dh));
    if (strategy != Strategy::flattened)
        for (const auto& l : workload.layers) lower = std::max(lower, generate_tiles(l, arch).Tm);

    for (auto dm = lower; dm <= options.ceiling; ++dm) {
        probe.Dm = dm;
        if (map_workload(workload, probe, strategy, options.pack).ok()) return dm;
    }
    throw Error("workload '" + workload.name + "' does not fit with strategy " + std::string(to_string(strategy)) +
                " up to Dm=" + std::to_string(options.ceiling));
}

}  // namespace imcpack
