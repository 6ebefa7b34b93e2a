#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "imcpack/baselines.hpp"
#include "imcpack/error.hpp"

using namespace imcpack;

TEST_CASE("stacked: layers pile up in workload order") {
    // Tm 2 and 3 on a 4x4 plane.
    Workload w{"s", {th::layer("a", 4, 8), th::layer("b", 4, 12)}};
    auto out = map_stacked(w, th::arch(4, 4, 1, 5));
    REQUIRE(out.ok());
    REQUIRE(out.allocation.entries.size() == 2);
    CHECK(out.allocation.entries[0].dm == 0);
    CHECK(out.allocation.entries[1].dm == 2);
    CHECK(out.allocation.entries[0].di == 0);
    CHECK(out.allocation.entries[1].do_ == 0);
    CHECK(validate_allocation(out.allocation, w, {4, 4, 1, 5}).empty());

    auto fail = map_stacked(w, th::arch(4, 4, 1, 4));
    CHECK_FALSE(fail.ok());
    CHECK(fail.allocation.entries.empty());
    CHECK(fail.allocation.layers.size() == 2);
}

TEST_CASE("stacked min Dm is the sum of Tm for a single macro") {
    std::mt19937_64 rng(51);
    for (int c = 0; c < 40; ++c) {
        auto w = th::random_workload(rng, 1, 8, 512, "s");
        const auto arch = th::arch(16, 256, 1, 1);
        std::uint64_t sum = 0;
        for (const auto& l : w.layers) sum += generate_tiles(l, arch).Tm;
        CHECK(min_dm_for_fit(w, arch, Strategy::stacked) == sum);
    }
}

TEST_CASE("stacked spreads Th copies across macros") {
    Workload w{"h", {th::layer("a", 64, 256), th::layer("b", 32, 256)}};
    auto arch = th::arch(16, 256, 4, 8);
    auto out = map_stacked(w, arch);
    REQUIRE(out.ok());
    CHECK(validate_allocation(out.allocation, w, geometry_of(arch)).empty());
}

TEST_CASE("flattened slices") {
    Workload exact{"e", {th::layer("a", 16, 256)}};
    auto o1 = map_flattened(exact, th::arch(16, 256, 1, 1));
    REQUIRE(o1.ok());
    CHECK(o1.allocation.entries.size() == 1);
    CHECK(o1.allocation.layers[0].Tm == 1);

    // 2.5 planes.
    Workload half{"h", {th::layer("a", 40, 256)}};
    auto o2 = map_flattened(half, th::arch(16, 256, 1, 3));
    REQUIRE(o2.ok());
    REQUIRE(o2.allocation.entries.size() == 3);
    CHECK(o2.allocation.entries[2].dm == 2);
    CHECK(o2.allocation.entries[2].weights == 2048);
    CHECK(o2.allocation.layers[0].Tm == 3);
    CHECK(validate_allocation(o2.allocation, half, {16, 256, 1, 3}).empty());
    CHECK_FALSE(map_flattened(half, th::arch(16, 256, 1, 2)).ok());
    CHECK(min_dm_for_fit(half, th::arch(16, 256, 1, 1), Strategy::flattened) == 3);
}

TEST_CASE("flattened non-terminal slices fill the plane") {
    std::mt19937_64 rng(53);
    for (int c = 0; c < 20; ++c) {
        auto w = th::random_workload(rng, 1, 6, 512, "f");
        auto arch = th::arch(16, 256, 1 + c % 3, 4096);
        auto out = map_flattened(w, arch);
        REQUIRE(out.ok());
        CHECK(validate_allocation(out.allocation, w, geometry_of(arch)).empty());
        for (std::size_t i = 0; i + 1 < out.allocation.entries.size(); ++i) {
            const auto& e = out.allocation.entries[i];
            const auto& n = out.allocation.entries[i + 1];
            if (e.layer_id == n.layer_id) CHECK(e.weights == arch.plane());
        }
    }
}

TEST_CASE("single-layer min Dm meets the volume bound") {
    Workload w{"v", {th::layer("a", 16, 256 * 6)}};
    const auto arch = th::arch(16, 256, 2, 1);
    for (auto s : {Strategy::packed, Strategy::stacked, Strategy::flattened})
        CHECK(min_dm_for_fit(w, arch, s) == 3);
}

TEST_CASE("min Dm: fit at the minimum, not one below, and the ceiling errors") {
    std::mt19937_64 rng(57);
    for (int c = 0; c < 15; ++c) {
        auto w = th::random_workload(rng, 2, 6, 128, "m");
        auto arch = th::arch(16, 64, 1 + c % 2, 1);
        for (auto s : {Strategy::packed, Strategy::stacked, Strategy::flattened}) {
            const auto dm = min_dm_for_fit(w, arch, s);
            arch.Dm = dm;
            CHECK(map_workload(w, arch, s).ok());
            if (dm > 1) {
                arch.Dm = dm - 1;
                CHECK_FALSE(map_workload(w, arch, s).ok());
            }
        }
        const auto packed = min_dm_for_fit(w, arch, Strategy::packed);
        if (arch.Dh == 1) CHECK(packed <= min_dm_for_fit(w, arch, Strategy::stacked));
    }
    Workload big{"b", {th::layer("a", 512, 512)}};
    MinDmOptions o;
    o.ceiling = 4;
    CHECK_THROWS_AS(min_dm_for_fit(big, th::arch(16, 256, 1, 1), Strategy::packed, o), Error);
}

TEST_CASE("bundled FC-heavy workload: flattened needs no more Dm than stacked") {
    auto w = th::bundled_workload("autoencoder");
    const auto arch = bundled_architecture("dimc22").arch;
    CHECK(min_dm_for_fit(w, arch, Strategy::flattened) <= min_dm_for_fit(w, arch, Strategy::stacked));
}
