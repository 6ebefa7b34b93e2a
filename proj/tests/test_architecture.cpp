#include <doctest.h>

#include "helpers.hpp"
#include "imcpack/error.hpp"

using namespace imcpack;

TEST_CASE("bundled dimc22 matches the published baseline") {
    auto c = bundled_architecture("dimc22");
    CHECK(c.arch.Do == 256);
    CHECK(c.arch.Di == 16);
    CHECK(c.arch.Dh == 1);
    CHECK(c.arch.Dm == 1);
    CHECK(c.arch.weight_bits == 4);
    CHECK(c.arch.input_bits == 4);
    CHECK(c.arch.voltage_v == doctest::Approx(0.9));
    CHECK(c.arch.clock_hz == doctest::Approx(200e6));
    CHECK(c.arch.kind == ImcKind::digital);
    CHECK(c.cost.cell_area_um2 == doctest::Approx(0.379));
    CHECK(c.cost.periph_area_um2 == doctest::Approx(44290));
    CHECK(c.cost.nd2_cap_F == doctest::Approx(0.3e-15));
    CHECK(*c.arch.reported_macro_area_mm2 == doctest::Approx(0.202));
}

TEST_CASE("bundled aimc28 matches the published baseline") {
    auto c = bundled_architecture("aimc28");
    CHECK(c.arch.kind == ImcKind::analog);
    CHECK(c.arch.Do == 256);
    CHECK(c.arch.Di == 16);
    CHECK(c.cost.cell_area_um2 == doctest::Approx(1.2));
    CHECK(c.cost.periph_area_um2 == doctest::Approx(15400));
    CHECK(c.cost.e_adc_J == doctest::Approx(190e-15).epsilon(1e-12));
    CHECK(*c.arch.reported_macro_area_mm2 == doctest::Approx(0.035));
}

TEST_CASE("bundled memories") {
    for (auto n : {"dimc22", "aimc28"}) {
        auto c = bundled_architecture(n);
        CHECK(c.cost.e_dram_J_per_bit == doctest::Approx(4e-12).epsilon(1e-12));
        CHECK(c.cost.dram_bw_bits_per_s == doctest::Approx(12.8e9));
        CHECK(c.cost.e_buf_J_per_bit == doctest::Approx(0.009e-12).epsilon(1e-12));
        CHECK(c.cost.buf_bytes == 256 * 1024);
    }
}

TEST_CASE("bundled architecture files equal the built-in configs") {
    for (auto n : {"dimc22", "aimc28"}) CHECK(load_architecture_file(th::data_path(std::string("arch/") + n + ".json")) ==
                                              bundled_architecture(n));
}

TEST_CASE("digital MAC energy derivation") {
    // 50 gates * 0.3 fF * 0.81 V^2 over 16 bit products.
    CHECK(digital_mac_energy(50, 0.3e-15, 0.9, 4, 4) == doctest::Approx(50 * 0.3e-15 * 0.81 / 16).epsilon(1e-12));
    auto c = bundled_architecture("dimc22");
    CHECK(c.cost.e_mac_J == doctest::Approx(50 * 0.3e-15 * 0.81 / 16).epsilon(1e-12));
}

TEST_CASE("load_architecture fills missing fields from the baseline") {
    auto c = load_architecture(R"({"imc_kind":"analog","Dm":8,"costs":{"e_periph_J":1e-12}})");
    CHECK(c.baseline == "aimc28");
    CHECK(c.arch.Dm == 8);
    CHECK(c.arch.Di == 16);
    CHECK(c.cost.e_periph_J == doctest::Approx(1e-12));
    CHECK(c.cost.e_adc_J == doctest::Approx(190e-15));
    CHECK(load_architecture(serialize_architecture(c)) == c);
}

TEST_CASE("load_architecture errors") {
    CHECK_THROWS_AS(load_architecture(R"({"imc_kind":"optical"})"), ParseError);
    CHECK_THROWS_AS(load_architecture(R"({"imc_kind":"digital","Di":0})"), ValidationError);
    CHECK_THROWS_AS(load_architecture(R"({"imc_kind":"digital","Dh":-2})"), ValidationError);
}

TEST_CASE("area of dimc22 at Dh=1, Dm=1") {
    auto c = bundled_architecture("dimc22");
    auto a = compute_area(c.arch, c.cost);
    const double expect_um2 = 44290 + 0.379 * 16 * 256 * 1 * 4;
    CHECK(a.macro_area_mm2 == doctest::Approx(expect_um2 * 1e-6).epsilon(1e-12));
    CHECK(a.macro_area_mm2 == doctest::Approx(0.0505).epsilon(0.002));
    CHECK(a.total_imc_area_mm2 == doctest::Approx(a.macro_area_mm2));
}

TEST_CASE("area is linear in Dh and affine in Dm") {
    auto c = bundled_architecture("aimc28");
    auto base = compute_area(c.arch, c.cost);
    auto a = c.arch;
    a.Dm = 2;
    auto dm2 = compute_area(a, c.cost);
    const double cell1 = base.macro_area_mm2 - c.cost.periph_area_um2 * 1e-6;
    const double cell2 = dm2.macro_area_mm2 - c.cost.periph_area_um2 * 1e-6;
    CHECK(cell2 == doctest::Approx(2 * cell1));
    a.Dh = 4;
    auto dh4 = compute_area(a, c.cost);
    CHECK(dh4.total_imc_area_mm2 == doctest::Approx(4 * dh4.macro_area_mm2));
    CHECK(dh4.macro_area_mm2 == doctest::Approx(dm2.macro_area_mm2));
}

TEST_CASE("memory density increases strictly with Dm") {
    for (auto n : {"dimc22", "aimc28"}) {
        auto c = bundled_architecture(n);
        double prev = 0;
        for (std::uint64_t dm = 1; dm <= 512; dm *= 2) {
            c.arch.Dm = dm;
            auto a = compute_area(c.arch, c.cost);
            CHECK(a.density_bits_per_mm2 > prev);
            const double bits = 16.0 * 256 * dm * 4;
            CHECK(a.density_bits_per_mm2 == doctest::Approx(bits / a.total_imc_area_mm2));
            prev = a.density_bits_per_mm2;
        }
    }
}
