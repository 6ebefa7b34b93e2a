#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "oracles.hpp"

using namespace imcpack;

TEST_CASE("max_subset_product examples") {
    std::vector<std::uint64_t> a{2, 2, 2, 2, 2};
    CHECK(max_subset_product(a, 16).product == 16);
    std::vector<std::uint64_t> b{2, 2, 3, 3};
    CHECK(max_subset_product(b, 256).product == 36);
    std::vector<std::uint64_t> c{5, 7, 11};
    auto r = max_subset_product(c, 60);
    CHECK(r.product == 55);
    CHECK(r.factors == std::vector<std::uint64_t>{5, 11});
    CHECK(max_subset_product(c, 1).product == 1);
    CHECK(max_subset_product(std::vector<std::uint64_t>{}, 9).factors.empty());
}

TEST_CASE("max_subset_product tie-breaks") {
    // 6 = 2*3 and 6 = 6 cannot both occur with primes; use 4 = 2*2 vs 4 = 4.
    std::vector<std::uint64_t> f{2, 2, 4};
    auto r = max_subset_product(f, 4);
    CHECK(r.product == 4);
    CHECK(r.factors == std::vector<std::uint64_t>{4});
    std::vector<std::uint64_t> g{3, 2, 5};
    CHECK(max_subset_product(g, 6).factors == std::vector<std::uint64_t>{2, 3});
}

TEST_CASE("max_subset_product agrees with exhaustive enumeration") {
    std::mt19937_64 rng(3);
    const std::vector<std::uint64_t> primes{2, 2, 2, 3, 3, 5, 7, 11, 13};
    std::uniform_int_distribution<std::size_t> n(0, 12), pi(0, primes.size() - 1);
    std::uniform_int_distribution<std::uint64_t> cap(1, 5000);
    for (int i = 0; i < 300; ++i) {
        std::vector<std::uint64_t> f(n(rng));
        for (auto& v : f) v = primes[pi(rng)];
        const auto c = cap(rng);
        auto got = max_subset_product(f, c);
        auto want = oracle::subset_product(f, c);
        CHECK(got.product == want.product);
        CHECK(got.factors == want.factors);
    }
}

TEST_CASE("select_lpfs takes the smallest tags among equal primes") {
    LpfSet pool{{Dim::C, 3}, {Dim::FX, 3}, {Dim::FY, 3}};
    auto s = select_lpfs(pool, 9);
    CHECK(s.product == 9);
    CHECK(s.chosen == LpfSet{{Dim::C, 3}, {Dim::FX, 3}});
    CHECK(s.rest == LpfSet{{Dim::FY, 3}});
}

TEST_CASE("generate_tiles examples") {
    auto l = th::layer("a", 32, 16, 3, 3);
    auto t2 = generate_tiles(l, th::arch(16, 256, 2, 1));
    CHECK(t2.Ti == 16);
    CHECK(t2.To == 144);
    CHECK(t2.Th == 2);
    CHECK(t2.Tm == 1);
    CHECK(t2.th_lpfs == LpfSet{{Dim::K, 2}});

    auto t1 = generate_tiles(l, th::arch(16, 256, 1, 1));
    CHECK(t1.Ti == 16);
    CHECK(t1.To == 144);
    CHECK(t1.Th == 1);
    CHECK(t1.Tm == 2);

    auto unit = generate_tiles(th::layer("u", 1, 1), th::arch(16, 256, 4, 4));
    CHECK(unit.Ti == 1);
    CHECK(unit.To == 1);
    CHECK(unit.Th == 1);
    CHECK(unit.Tm == 1);
}

TEST_CASE("Th prefers input-relevant leftovers") {
    // K = 64 leaves (K,2)x2 after Ti=16; C = 512 leaves (C,2) after To=256.
    auto t = generate_tiles(th::layer("a", 64, 512), th::arch(16, 256, 2, 1));
    CHECK(t.th_lpfs == LpfSet{{Dim::C, 2}});
    CHECK(t.th_accumulate() == 2);
    CHECK(t.th_gather() == 1);
    CHECK(t.Tm == 4);
    CHECK(t.accumulation_depth() == 1);
    auto t4 = generate_tiles(th::layer("a", 64, 512), th::arch(16, 256, 4, 1));
    CHECK(t4.th_lpfs == LpfSet{{Dim::K, 2}, {Dim::C, 2}});
    CHECK(t4.Tm == 2);
}

TEST_CASE("tile invariants on random layers") {
    std::mt19937_64 rng(5);
    const std::vector<std::array<std::uint64_t, 3>> archs{{16, 256, 1}, {16, 256, 4}, {32, 64, 2}, {8, 8, 3}};
    for (int i = 0; i < 200; ++i) {
        auto w = th::random_workload(rng, 1, 1, 512, "r");
        const auto& l = w.layers[0];
        for (auto [di, dout, dh] : archs) {
            auto t = generate_tiles(l, th::arch(di, dout, dh, 1));
            CHECK(t.Ti <= di);
            CHECK(t.To <= dout);
            CHECK(t.Th <= dh);
            CHECK(t.Ti * t.To * t.Th * t.Tm == l.weight_volume());
            for (const auto& f : t.ti_lpfs) CHECK(f.dim == Dim::K);
            for (const auto& f : t.to_lpfs) CHECK(f.dim != Dim::K);
            CHECK(product(t.ti_lpfs) == t.Ti);
            CHECK(product(t.to_lpfs) == t.To);
            CHECK(product(t.th_lpfs) == t.Th);
            CHECK(product(t.tm_lpfs) == t.Tm);
            // Ti and To are optimal over their own factor pools.
            std::vector<std::uint64_t> kf, rf;
            for (const auto& f : lpf_decompose(l)) (f.dim == Dim::K ? kf : rf).push_back(f.prime);
            CHECK(t.Ti == oracle::subset_product(kf, di).product);
            if (rf.size() <= 16) CHECK(t.To == oracle::subset_product(rf, dout).product);
        }
    }
}

namespace {

Tile tile_with_tm(std::size_t layer, std::uint64_t tm, std::uint64_t ti = 4, std::uint64_t to = 4) {
    Tile t;
    t.layer = layer;
    t.layer_id = "l" + std::to_string(layer);
    t.Ti = ti;
    t.To = to;
    t.Tm = tm;
    return t;
}

}  // namespace

TEST_CASE("supertiles of a single layer") {
    std::vector<Tile> pool{tile_with_tm(0, 3)};
    auto st = generate_supertiles(pool, th::arch(16, 16, 1, 8));
    REQUIRE(st.size() == 1);
    CHECK(st[0].tiles == std::vector<std::size_t>{0});
    CHECK(st[0].STm == 3);
}

TEST_CASE("supertiles respect the max pool Tm") {
    std::vector<Tile> pool{tile_with_tm(0, 4), tile_with_tm(1, 2)};
    auto st = generate_supertiles(pool, th::arch(16, 16, 1, 64));
    CHECK(st.size() == 2);
    for (const auto& s : st) CHECK(s.tiles.size() == 1);
}

TEST_CASE("supertiles of Tm 2,1,1 keep singletons and {1+1}") {
    std::vector<Tile> pool{tile_with_tm(0, 2, 4, 4), tile_with_tm(1, 1, 2, 8), tile_with_tm(2, 1, 8, 2)};
    auto st = generate_supertiles(pool, th::arch(16, 16, 1, 64));
    REQUIRE(st.size() == 4);
    std::set<std::vector<std::size_t>> got;
    for (const auto& s : st) got.insert(s.tiles);
    CHECK(got == std::set<std::vector<std::size_t>>{{0}, {1}, {2}, {1, 2}});
    for (const auto& s : st)
        if (s.tiles.size() == 2) {
            CHECK(s.STi == 8);
            CHECK(s.STo == 8);
            CHECK(s.STm == 2);
            CHECK(s.tile_volume == 32);
        }
}

TEST_CASE("supertile enumeration matches a brute-force subset oracle") {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<std::uint64_t> tm(1, 6), ext(1, 8);
    for (int c = 0; c < 60; ++c) {
        const std::size_t n = 1 + c % 6;
        std::vector<Tile> pool;
        for (std::size_t i = 0; i < n; ++i) pool.push_back(tile_with_tm(i, tm(rng), ext(rng), ext(rng)));
        const std::uint64_t dm = 3 + c % 5;
        SupertileOptions opt;
        opt.max_stacks = 1000;
        auto st = generate_supertiles(pool, th::arch(8, 8, 1, dm), opt);

        std::uint64_t max_tm = 0;
        for (const auto& t : pool) max_tm = std::max(max_tm, t.Tm);
        std::set<std::vector<std::size_t>> want;
        for (std::uint64_t mask = 1; mask < (1u << n); ++mask) {
            std::vector<std::size_t> members;
            std::uint64_t sum = 0;
            for (std::size_t i = 0; i < n; ++i)
                if (mask >> i & 1) {
                    members.push_back(i);
                    sum += pool[i].Tm;
                }
            if (members.size() == 1 || (sum <= std::min(max_tm, dm) && members.size() <= opt.max_stack))
                want.insert(members);
        }
        std::set<std::vector<std::size_t>> got;
        for (const auto& s : st) {
            auto m = s.tiles;
            std::sort(m.begin(), m.end());
            got.insert(m);
            std::uint64_t sum = 0, wi = 0, wo = 0, vol = 0;
            for (auto t : s.tiles) {
                sum += pool[t].Tm;
                wi = std::max(wi, pool[t].Ti);
                wo = std::max(wo, pool[t].To);
                vol += pool[t].volume();
            }
            CHECK(s.STm == sum);
            CHECK(s.STi == wi);
            CHECK(s.STo == wo);
            CHECK(s.tile_volume == vol);
        }
        CHECK(got == want);
        CHECK(got.size() == st.size());
        for (std::size_t i = 1; i < st.size(); ++i)
            CHECK(st[i - 1].bounding_volume() >= st[i].bounding_volume());
    }
}
