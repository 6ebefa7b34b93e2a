#include "imcpack/tiling.hpp"

#include <algorithm>
#include <map>

namespace imcpack {

namespace {

struct ValueCount {
    std::uint64_t value;
    std::size_t count;
};

struct SubsetSearch {
    std::vector<ValueCount> groups;
    std::uint64_t cap;
    std::vector<std::size_t> take;

    std::uint64_t best_product = 0;
    std::size_t best_count = 0;
    std::vector<std::uint64_t> best_list;
    std::vector<std::size_t> best_take;

    std::vector<std::uint64_t> list_for(const std::vector<std::size_t>& t) const {
        std::vector<std::uint64_t> out;
        for (std::size_t j = 0; j < groups.size(); ++j) out.insert(out.end(), t[j], groups[j].value);
        return out;  // groups are ascending, so the list is sorted
    }

    void consider(std::uint64_t prod, std::size_t count) {
        if (prod < best_product) return;
        if (prod == best_product) {
            if (count > best_count) return;
            if (count == best_count) {
                auto list = list_for(take);
                if (!(list < best_list)) return;
                best_list = std::move(list);
                best_take = take;
                return;
            }
        }
        best_product = prod;
        best_count = count;
        best_list = list_for(take);
        best_take = take;
    }

    void run(std::size_t j, std::uint64_t prod, std::size_t count) {
        if (j == groups.size()) {
            consider(prod, count);
            return;
        }
        const auto v = groups[j].value;
        std::uint64_t p = prod;
        for (std::size_t e = 0;; ++e) {
            take[j] = e;
            run(j + 1, p, count + e);
            if (e == groups[j].count || v == 0 || p > cap / v) break;
            p *= v;
        }
        take[j] = 0;
    }
};

}  // namespace

SubsetProduct max_subset_product(std::span<const std::uint64_t> factors, std::uint64_t cap) {
    std::map<std::uint64_t, std::size_t> counts;
    for (auto f : factors) ++counts[f];
    SubsetSearch s;
    s.cap = std::max<std::uint64_t>(cap, 1);
    for (auto [v, c] : counts) s.groups.push_back({v, c});
    s.take.assign(s.groups.size(), 0);
    s.run(0, 1, 0);
    return {std::move(s.best_list), s.best_product};
}

LpfSelection select_lpfs(std::span<const Lpf> pool, std::uint64_t cap) {
    std::vector<std::uint64_t> primes;
    primes.reserve(pool.size());
    for (const auto& f : pool) primes.push_back(f.prime);
    auto best = max_subset_product(primes, cap);

    std::map<std::uint64_t, std::size_t> want;
    for (auto p : best.factors) ++want[p];

    LpfSet sorted(pool.begin(), pool.end());
    std::sort(sorted.begin(), sorted.end());
    LpfSelection out;
    out.product = best.product;
    for (const auto& f : sorted) {
        auto it = want.find(f.prime);
        if (it != want.end() && it->second > 0) {
            --it->second;
            out.chosen.push_back(f);
        } else {
            out.rest.push_back(f);
        }
    }
    return out;
}

std::uint64_t Tile::th_accumulate() const {
    std::uint64_t p = 1;
    for (const auto& f : th_lpfs)
        if (is_input_relevant(f.dim)) p *= f.prime;
    return p;
}

std::uint64_t Tile::th_gather() const { return product(th_lpfs, Dim::K); }

std::uint64_t Tile::accumulation_depth() const {
    std::uint64_t p = 1;
    for (const auto& f : tm_lpfs)
        if (is_input_relevant(f.dim)) p *= f.prime;
    return p;
}

Tile generate_tiles(const Layer& layer, const ImcArchitecture& arch) {
    LpfSet k_pool;
    LpfSet r_pool;
    for (const auto& f : lpf_decompose(layer)) (f.dim == Dim::K ? k_pool : r_pool).push_back(f);

    auto ti = select_lpfs(k_pool, arch.Di);
    auto to = select_lpfs(r_pool, arch.Do);
    auto th_in = select_lpfs(to.rest, arch.Dh);
    auto th_k = select_lpfs(ti.rest, arch.Dh / th_in.product);

    Tile t;
    t.layer_id = layer.id;
    t.Ti = ti.product;
    t.To = to.product;
    t.Th = th_in.product * th_k.product;
    t.ti_lpfs = std::move(ti.chosen);
    t.to_lpfs = std::move(to.chosen);
    t.th_lpfs = th_k.chosen;
    t.th_lpfs.insert(t.th_lpfs.end(), th_in.chosen.begin(), th_in.chosen.end());
    std::sort(t.th_lpfs.begin(), t.th_lpfs.end());
    t.tm_lpfs = th_k.rest;
    t.tm_lpfs.insert(t.tm_lpfs.end(), th_in.rest.begin(), th_in.rest.end());
    std::sort(t.tm_lpfs.begin(), t.tm_lpfs.end());
    t.Tm = product(t.tm_lpfs);
    return t;
}

std::vector<Tile> generate_tile_pool(const Workload& workload, const ImcArchitecture& arch) {
    std::vector<Tile> pool;
    pool.reserve(workload.layers.size());
    for (std::size_t i = 0; i < workload.layers.size(); ++i) {
        auto t = generate_tiles(workload.layers[i], arch);
        t.layer = i;
        pool.push_back(std::move(t));
    }
    return pool;
}

namespace {

bool supertile_before(const SuperTile& a, const SuperTile& b) {
    if (a.bounding_volume() != b.bounding_volume()) return a.bounding_volume() > b.bounding_volume();
    return a.tiles < b.tiles;
}

SuperTile make_supertile(std::span<const Tile> pool, std::vector<std::size_t> members) {
    SuperTile st;
    for (auto i : members) {
        const auto& t = pool[i];
        st.STi = std::max(st.STi, t.Ti);
        st.STo = std::max(st.STo, t.To);
        st.STm += t.Tm;
        st.tile_volume += t.volume();
    }
    st.tiles = std::move(members);
    return st;
}

}  // namespace

std::vector<SuperTile> generate_supertiles(std::span<const Tile> pool, const ImcArchitecture& arch,
                                           const SupertileOptions& options) {
    std::vector<SuperTile> singles;
    std::uint64_t max_tm = 0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        singles.push_back(make_supertile(pool, {i}));
        max_tm = std::max(max_tm, pool[i].Tm);
    }
    const std::uint64_t limit = std::min(max_tm, arch.Dm);

    // Multi-tile stacks, trimmed to the best max_stacks as we go.
    std::vector<SuperTile> stacks;
    auto trim = [&] {
        if (stacks.size() <= options.max_stacks) return;
        std::nth_element(stacks.begin(), stacks.begin() + static_cast<std::ptrdiff_t>(options.max_stacks),
                         stacks.end(), supertile_before);
        stacks.resize(options.max_stacks);
    };

    std::vector<std::size_t> members;
    auto dfs = [&](auto&& self, std::size_t start, std::uint64_t height) -> void {
        if (members.size() >= 2) {
            stacks.push_back(make_supertile(pool, members));
            if (stacks.size() >= 4 * options.max_stacks + 64) trim();
        }
        if (members.size() == options.max_stack) return;
        for (std::size_t i = start; i < pool.size(); ++i) {
            if (height + pool[i].Tm > limit) continue;
            members.push_back(i);
            self(self, i + 1, height + pool[i].Tm);
            members.pop_back();
        }
    };
    if (options.max_stack >= 2 && options.max_stacks > 0) dfs(dfs, 0, 0);
    trim();

    std::vector<SuperTile> out = std::move(singles);
    out.insert(out.end(), std::make_move_iterator(stacks.begin()), std::make_move_iterator(stacks.end()));
    std::sort(out.begin(), out.end(), supertile_before);
    return out;
}

}  // namespace imcpack
