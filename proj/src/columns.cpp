#include <algorithm>
#include <iterator>
#include <optional>
#include <set>
#include <stdexcept>

#include "imcpack/packing.hpp"
#include "imcpack/rect_pack.hpp"

namespace imcpack {

std::vector<std::size_t> column_layers(const Column& column, std::span<const SuperTile> supertiles,
                                       std::span<const Tile> tiles) {
    std::vector<std::size_t> out;
    for (const auto& p : column.placements)
        for (auto t : supertiles[p.supertile].tiles) out.push_back(tiles[t].layer);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

struct Candidate {
    std::vector<std::size_t> members;  // supertile indices, in insertion order
    std::vector<Placement> placements;
    std::uint64_t volume = 0;
    std::uint64_t height = 0;
    bool feasible = false;
};

// Strictly denser, or equally dense with fewer supertiles.
bool better(const Candidate& a, const Candidate& b) {
    if (!a.feasible) return false;
    if (!b.feasible) return true;
    const auto lhs = static_cast<unsigned __int128>(a.volume) * b.height;
    const auto rhs = static_cast<unsigned __int128>(b.volume) * a.height;
    if (lhs != rhs) return lhs > rhs;
    return a.members.size() < b.members.size();
}

class ColumnSearch {
public:
    ColumnSearch(std::span<const Tile> tiles, std::span<const SuperTile> sts, const ImcArchitecture& arch,
                 const ColumnOptions& opt)
        : tiles_(tiles), sts_(sts), arch_(arch), opt_(opt) {}

    Candidate evaluate(std::vector<std::size_t> members) const {
        Candidate c;
        std::vector<RectItem> items;
        items.reserve(members.size());
        for (auto s : members) {
            const auto& st = sts_[s];
            items.push_back({st.STi, st.STo});
            c.volume += st.tile_volume;
            c.height = std::max(c.height, st.STm);
        }
        auto placed = pack_rect_2d(items, arch_.Di, arch_.Do);
        c.members = std::move(members);
        if (placed) {
            c.placements = std::move(*placed);
            c.feasible = true;
        }
        return c;
    }

    // All layer-disjoint subsets of `avail` up to max_subset, in DFS order.
    std::vector<std::vector<std::size_t>> enumerate(const std::vector<std::size_t>& avail) const {
        std::vector<std::vector<std::size_t>> out;
        std::vector<std::size_t> cur;
        std::vector<char> used(tiles_.size(), 0);
        const auto plane = arch_.plane();
        auto dfs = [&](auto&& self, std::size_t start, std::uint64_t area) -> void {
            for (std::size_t k = start; k < avail.size(); ++k) {
                const auto& st = sts_[avail[k]];
                if (area + st.footprint() > plane) continue;
                if (!disjoint(st, used)) continue;
                mark(st, used, 1);
                cur.push_back(avail[k]);
                out.push_back(cur);
                if (cur.size() < opt_.max_subset) self(self, k + 1, area + st.footprint());
                cur.pop_back();
                mark(st, used, 0);
            }
        };
        dfs(dfs, 0, 0);
        return out;
    }

    Candidate grow(std::size_t seed, const std::vector<std::size_t>& avail) const {
        std::vector<char> used(tiles_.size(), 0);
        Candidate cur = evaluate({seed});
        if (!cur.feasible) return cur;
        mark(sts_[seed], used, 1);
        std::uint64_t area = sts_[seed].footprint();
        Candidate best = cur;
        const auto plane = arch_.plane();

        struct Option {
            std::size_t st;
            std::uint64_t volume;
            std::uint64_t height;
        };
        std::vector<Option> options;
        for (;;) {
            options.clear();
            for (auto s : avail) {
                const auto& st = sts_[s];
                if (area + st.footprint() > plane || !disjoint(st, used)) continue;
                options.push_back({s, cur.volume + st.tile_volume, std::max(cur.height, st.STm)});
            }
            std::stable_sort(options.begin(), options.end(), [](const Option& a, const Option& b) {
                return static_cast<unsigned __int128>(a.volume) * b.height >
                       static_cast<unsigned __int128>(b.volume) * a.height;
            });
            std::set<std::pair<std::uint64_t, std::uint64_t>> failed;
            bool grew = false;
            for (const auto& o : options) {
                const auto& st = sts_[o.st];
                if (failed.count({st.STi, st.STo})) continue;
                auto members = cur.members;
                members.push_back(o.st);
                auto next = evaluate(std::move(members));
                if (!next.feasible) {
                    failed.insert({st.STi, st.STo});
                    continue;
                }
                cur = std::move(next);
                mark(st, used, 1);
                area += st.footprint();
                grew = true;
                break;
            }
            if (!grew) break;
            if (better(cur, best)) best = cur;
        }
        return best;
    }

    Candidate best_serial(const std::vector<std::size_t>& avail) const {
        Candidate best;
        if (avail.size() <= opt_.exhaustive_pool) {
            for (auto& subset : enumerate(avail)) {
                auto c = evaluate(std::move(subset));
                if (better(c, best)) best = std::move(c);
            }
        } else {
            for (auto seed : avail) {
                auto c = grow(seed, avail);
                if (better(c, best)) best = std::move(c);
            }
        }
        return best;
    }

    // Same result as best_serial: candidates are evaluated independently and
    // reduced in enumeration order.
    Candidate best_parallel(const std::vector<std::size_t>& avail) const {
        std::vector<Candidate> results;
        if (avail.size() <= opt_.exhaustive_pool) {
            auto subsets = enumerate(avail);
            results.resize(subsets.size());
            const auto n = static_cast<std::ptrdiff_t>(subsets.size());
#pragma omp parallel for schedule(dynamic, 16)
            for (std::ptrdiff_t i = 0; i < n; ++i) results[i] = evaluate(std::move(subsets[i]));
        } else {
            results.resize(avail.size());
            const auto n = static_cast<std::ptrdiff_t>(avail.size());
#pragma omp parallel for schedule(dynamic, 1)
            for (std::ptrdiff_t i = 0; i < n; ++i) results[i] = grow(avail[i], avail);
        }
        Candidate best;
        for (auto& c : results)
            if (better(c, best)) best = std::move(c);
        return best;
    }

private:
    bool disjoint(const SuperTile& st, const std::vector<char>& used) const {
        for (auto t : st.tiles)
            if (used[t]) return false;
        return true;
    }
    void mark(const SuperTile& st, std::vector<char>& used, char v) const {
        for (auto t : st.tiles) used[t] = v;
    }

    std::span<const Tile> tiles_;
    std::span<const SuperTile> sts_;
    const ImcArchitecture& arch_;
    const ColumnOptions& opt_;
};

// Second pass over the greedy result. Two columns with disjoint tiles can
// share one column when some cover of their combined tiles packs into the
// plane; the cover may use different stacks than either column did. The
// merge with the largest height saving is applied until none saves anything
// (equal height still counts: it removes a column).
class ColumnMerger {
public:
    ColumnMerger(std::span<const Tile> tiles, std::span<const SuperTile> sts, const ColumnSearch& search,
                 const ImcArchitecture& arch, const ColumnOptions& opt)
        : tiles_(tiles), sts_(sts), search_(search), plane_(arch.plane()), opt_(opt), by_tile_(tiles.size()) {
        for (std::size_t s = 0; s < sts.size(); ++s)
            for (auto t : sts[s].tiles) by_tile_[t].push_back(s);
    }

    std::vector<Candidate> run(std::vector<Candidate> cols) const {
        std::vector<std::vector<std::size_t>> sets;
        for (const auto& c : cols) sets.push_back(tile_set(c));

        // merged[i][j] (i < j): best merge of columns i and j, if any.
        std::vector<std::vector<std::optional<Candidate>>> merged(cols.size());
        auto fill = [&](const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
            std::vector<std::optional<Candidate>> out(pairs.size());
            const auto n = static_cast<std::ptrdiff_t>(pairs.size());
            if (opt_.policy == ExecPolicy::parallel) {
#pragma omp parallel for schedule(dynamic, 4)
                for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = merge(cols, sets, pairs[k].first, pairs[k].second);
            } else {
                for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = merge(cols, sets, pairs[k].first, pairs[k].second);
            }
            for (std::size_t k = 0; k < pairs.size(); ++k)
                merged[pairs[k].first][pairs[k].second] = std::move(out[k]);
        };
        {
            std::vector<std::pair<std::size_t, std::size_t>> pairs;
            for (std::size_t i = 0; i < cols.size(); ++i) {
                merged[i].resize(cols.size());
                for (std::size_t j = i + 1; j < cols.size(); ++j) pairs.emplace_back(i, j);
            }
            fill(pairs);
        }

        for (;;) {
            std::optional<std::pair<std::size_t, std::size_t>> pick;
            std::uint64_t best_gain = 0;
            for (std::size_t i = 0; i < cols.size(); ++i)
                for (std::size_t j = i + 1; j < cols.size(); ++j) {
                    const auto& m = merged[i][j];
                    if (!m) continue;
                    const auto gain = cols[i].height + cols[j].height - m->height;
                    if (!pick || gain > best_gain) {
                        pick = {i, j};
                        best_gain = gain;
                    }
                }
            if (!pick) break;
            const auto [i, j] = *pick;
            cols[i] = std::move(*merged[i][j]);
            sets[i] = tile_set(cols[i]);
            cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(j));
            sets.erase(sets.begin() + static_cast<std::ptrdiff_t>(j));
            merged.erase(merged.begin() + static_cast<std::ptrdiff_t>(j));
            for (auto& row : merged) row.erase(row.begin() + static_cast<std::ptrdiff_t>(j));

            std::vector<std::pair<std::size_t, std::size_t>> pairs;
            for (std::size_t k = 0; k < cols.size(); ++k)
                if (k != i) pairs.emplace_back(std::min(i, k), std::max(i, k));
            fill(pairs);
        }
        return cols;
    }

private:
    std::vector<std::size_t> tile_set(const Candidate& c) const {
        std::vector<std::size_t> out;
        for (auto s : c.members) out.insert(out.end(), sts_[s].tiles.begin(), sts_[s].tiles.end());
        std::sort(out.begin(), out.end());
        return out;
    }

    std::optional<Candidate> merge(const std::vector<Candidate>& cols, const std::vector<std::vector<std::size_t>>& sets,
                                   std::size_t i, std::size_t j) const {
        const auto budget = cols[i].height + cols[j].height;
        std::vector<std::size_t> uni;
        std::set_union(sets[i].begin(), sets[i].end(), sets[j].begin(), sets[j].end(), std::back_inserter(uni));
        if (uni.size() != sets[i].size() + sets[j].size()) return std::nullopt;  // shared tile

        std::vector<char> in(tiles_.size(), 0), covered(tiles_.size(), 0);
        for (auto t : uni) in[t] = 1;
        std::optional<Candidate> best;
        std::vector<std::size_t> cover;
        std::size_t nodes = 0;
        auto dfs = [&](auto&& self, std::uint64_t area, std::uint64_t height) -> void {
            if (++nodes > opt_.merge_nodes) return;
            std::size_t next = tiles_.size();
            for (auto t : uni)
                if (!covered[t]) {
                    next = t;
                    break;
                }
            if (next == tiles_.size()) {
                auto c = search_.evaluate(cover);
                if (c.feasible && (!best || c.height < best->height)) best = std::move(c);
                return;
            }
            for (auto s : by_tile_[next]) {
                const auto& st = sts_[s];
                const auto h = std::max(height, st.STm);
                if (area + st.footprint() > plane_ || h > budget || (best && h >= best->height)) continue;
                bool fits = true;
                for (auto t : st.tiles) fits = fits && in[t] && !covered[t];
                if (!fits) continue;
                for (auto t : st.tiles) covered[t] = 1;
                cover.push_back(s);
                self(self, area + st.footprint(), h);
                cover.pop_back();
                for (auto t : st.tiles) covered[t] = 0;
            }
        };
        dfs(dfs, 0, 0);
        return best;
    }

    std::span<const Tile> tiles_;
    std::span<const SuperTile> sts_;
    const ColumnSearch& search_;
    std::uint64_t plane_;
    const ColumnOptions& opt_;
    std::vector<std::vector<std::size_t>> by_tile_;
};

}  // namespace

std::vector<Column> generate_columns(std::span<const Tile> tiles, std::span<const SuperTile> supertiles,
                                     const ImcArchitecture& arch, const ColumnOptions& options) {
    // Tiles are indexed by layer in the pool, so remaining copies are tracked
    // per pool index.
    std::vector<std::uint64_t> remaining(tiles.size());
    for (std::size_t i = 0; i < tiles.size(); ++i) remaining[i] = tiles[i].Th;

    ColumnSearch search(tiles, supertiles, arch, options);
    std::vector<Candidate> picked;
    for (;;) {
        std::vector<std::size_t> avail;
        for (std::size_t s = 0; s < supertiles.size(); ++s) {
            bool ok = true;
            for (auto t : supertiles[s].tiles) ok = ok && remaining[t] > 0;
            if (ok) avail.push_back(s);
        }
        if (avail.empty()) break;

        auto best = options.policy == ExecPolicy::parallel ? search.best_parallel(avail) : search.best_serial(avail);
        if (!best.feasible) throw std::logic_error("generate_columns: no supertile fits the D_i x D_o plane");

        for (auto s : best.members)
            for (auto t : supertiles[s].tiles) --remaining[t];
        picked.push_back(std::move(best));
    }
    if (options.merge_pass) picked = ColumnMerger(tiles, supertiles, search, arch, options).run(std::move(picked));

    std::vector<Column> columns;
    for (const auto& best : picked) {
        Column col;
        col.height = best.height;
        col.tile_volume = best.volume;
        col.density = static_cast<double>(best.volume) / (static_cast<double>(arch.plane()) * best.height);
        for (std::size_t k = 0; k < best.members.size(); ++k)
            col.placements.push_back({best.members[k], best.placements[k].x, best.placements[k].y});
        columns.push_back(std::move(col));
    }
    return columns;
}

}  // namespace imcpack
