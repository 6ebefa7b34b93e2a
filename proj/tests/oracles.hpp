// Brute-force reference implementations used as test oracles. Everything here
// is deliberately naive: exhaustive enumeration, no shared code with the
// library beyond its plain data types.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "imcpack/packing.hpp"
#include "imcpack/rect_pack.hpp"
#include "imcpack/tiling.hpp"

namespace oracle {

using u64 = std::uint64_t;

inline std::vector<u64> prime_factors(u64 n) {
    std::vector<u64> out;
    for (u64 p = 2; n > 1 && p <= n; ++p)
        while (n % p == 0) {
            out.push_back(p);
            n /= p;
        }
    return out;
}

struct Subset {
    std::vector<u64> factors;
    u64 product = 1;
};

// All 2^n index subsets; best product <= cap, then fewer factors, then the
// lexicographically smallest sorted list.
inline Subset subset_product(const std::vector<u64>& f, u64 cap) {
    Subset best;
    const std::size_t n = f.size();
    for (u64 mask = 0; mask < (u64{1} << n); ++mask) {
        u64 prod = 1;
        bool over = false;
        std::vector<u64> pick;
        for (std::size_t i = 0; i < n && !over; ++i)
            if (mask >> i & 1) {
                prod *= f[i];
                pick.push_back(f[i]);
                over = prod > cap;
            }
        if (over) continue;
        std::sort(pick.begin(), pick.end());
        const bool better = prod > best.product ||
                            (prod == best.product && (pick.size() < best.factors.size() ||
                                                      (pick.size() == best.factors.size() && pick < best.factors)));
        if (better) best = {pick, prod};
    }
    return best;
}

inline bool placements_valid(const std::vector<imcpack::RectItem>& items,
                             const std::vector<imcpack::Placement>& pl, u64 W, u64 H) {
    if (items.size() != pl.size()) return false;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (pl[i].x + items[i].w > W || pl[i].y + items[i].h > H) return false;
        for (std::size_t j = 0; j < i; ++j) {
            const bool apart = pl[i].x + items[i].w <= pl[j].x || pl[j].x + items[j].w <= pl[i].x ||
                               pl[i].y + items[i].h <= pl[j].y || pl[j].y + items[j].h <= pl[i].y;
            if (!apart) return false;
        }
    }
    return true;
}

// Exhaustive 2D feasibility. Positions are restricted to normal patterns
// (sums of other items' extents), which loses no feasible packing.
inline bool rect_feasible(const std::vector<imcpack::RectItem>& items, u64 W, u64 H) {
    const std::size_t n = items.size();
    u64 area = 0;
    for (const auto& it : items) {
        if (it.w > W || it.h > H) return false;
        area += it.w * it.h;
    }
    if (area > W * H) return false;

    auto normal = [&](std::size_t self, bool along_w) {
        std::set<u64> s{0};
        for (std::size_t i = 0; i < n; ++i) {
            if (i == self) continue;
            std::set<u64> next = s;
            for (auto v : s) next.insert(v + (along_w ? items[i].w : items[i].h));
            s = std::move(next);
        }
        const u64 lim = along_w ? W - items[self].w : H - items[self].h;
        std::vector<u64> out;
        for (auto v : s)
            if (v <= lim) out.push_back(v);
        return out;
    };
    std::vector<std::vector<u64>> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = normal(i, true);
        ys[i] = normal(i, false);
    }
    std::vector<imcpack::Placement> pl(n);
    std::function<bool(std::size_t)> go = [&](std::size_t k) {
        if (k == n) return true;
        for (auto x : xs[k])
            for (auto y : ys[k]) {
                bool ok = true;
                for (std::size_t j = 0; j < k && ok; ++j)
                    ok = x + items[k].w <= pl[j].x || pl[j].x + items[j].w <= x || y + items[k].h <= pl[j].y ||
                         pl[j].y + items[j].h <= y;
                if (!ok) continue;
                pl[k] = {x, y};
                if (go(k + 1)) return true;
            }
        return false;
    };
    return go(0);
}

// Exhaustive 1D assignment of columns to Dh macros: per-macro height sum <=
// Dm and no tile (by pool index) twice in one macro.
inline bool alloc_1d_feasible(const std::vector<u64>& heights, const std::vector<std::vector<std::size_t>>& members,
                              u64 Dh, u64 Dm) {
    const std::size_t n = heights.size();
    std::vector<u64> used(Dh, 0);
    std::vector<std::multiset<std::size_t>> held(Dh);
    std::function<bool(std::size_t)> go = [&](std::size_t k) {
        if (k == n) return true;
        for (u64 m = 0; m < Dh; ++m) {
            if (used[m] + heights[k] > Dm) continue;
            bool clash = false;
            for (auto t : members[k]) clash = clash || held[m].count(t);
            if (clash) continue;
            used[m] += heights[k];
            for (auto t : members[k]) held[m].insert(t);
            if (go(k + 1)) return true;
            used[m] -= heights[k];
            for (auto t : members[k]) held[m].erase(held[m].find(t));
        }
        return false;
    };
    return go(0);
}

// Minimum total column height over every way to cover each pool tile exactly
// once with supertiles from `sts` and to group those supertiles into
// 2D-feasible columns. Single macro (Th = 1 for every tile). nullopt if no
// exact cover exists.
inline std::optional<u64> min_total_height(std::span<const imcpack::Tile> tiles,
                                           std::span<const imcpack::SuperTile> sts, u64 Di, u64 Do) {
    const std::size_t n = sts.size();
    const u64 all_tiles = (u64{1} << tiles.size()) - 1;
    std::vector<u64> tmask(n, 0);
    for (std::size_t s = 0; s < n; ++s)
        for (auto t : sts[s].tiles) tmask[s] |= u64{1} << t;

    std::map<u64, bool> feasible;  // block mask over supertiles
    auto block_ok = [&](u64 block) {
        auto it = feasible.find(block);
        if (it != feasible.end()) return it->second;
        std::vector<imcpack::RectItem> items;
        for (std::size_t s = 0; s < n; ++s)
            if (block >> s & 1) items.push_back({sts[s].STi, sts[s].STo});
        return feasible[block] = rect_feasible(items, Di, Do);
    };
    auto block_height = [&](u64 block) {
        u64 h = 0;
        for (std::size_t s = 0; s < n; ++s)
            if (block >> s & 1) h = std::max(h, sts[s].STm);
        return h;
    };

    std::optional<u64> best;
    for (u64 chosen = 1; chosen < (u64{1} << n); ++chosen) {
        u64 cover = 0;
        bool overlap = false;
        for (std::size_t s = 0; s < n && !overlap; ++s)
            if (chosen >> s & 1) {
                overlap = (cover & tmask[s]) != 0;
                cover |= tmask[s];
            }
        if (overlap || cover != all_tiles) continue;
        // Set partitions of `chosen`: the lowest remaining member always
        // opens the next block.
        std::function<void(u64, u64)> part = [&](u64 rest, u64 acc) {
            if (rest == 0) {
                if (!best || acc < *best) best = acc;
                return;
            }
            const u64 low = rest & (~rest + 1);
            const u64 others = rest & ~low;
            for (u64 sub = others;; sub = (sub - 1) & others) {
                const u64 block = low | sub;
                if (block_ok(block)) part(rest & ~block, acc + block_height(block));
                if (sub == 0) break;
            }
        };
        part(chosen, 0);
    }
    return best;
}

}  // namespace oracle
