// architecture.hpp — IMC design points and their unit costs.
//
// An IMC system has D_h macros, each an array of D_i x D_o multipliers with
// D_m weight cells (of weight_bits bitcells each) time-multiplexed onto every
// multiplier. K unrolls along D_i, C/FX/FY along D_o.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace imcpack {

enum class ImcKind { digital, analog };

std::string_view to_string(ImcKind kind);

struct ImcArchitecture {
    std::string name;
    std::uint64_t Di = 1;
    std::uint64_t Do = 1;
    std::uint64_t Dh = 1;
    std::uint64_t Dm = 1;
    unsigned weight_bits = 4;
    unsigned input_bits = 4;
    double clock_hz = 200e6;
    double voltage_v = 0.9;
    ImcKind kind = ImcKind::digital;
    // Published macro area, kept for reference only; the area model below
    // does not use it.
    std::optional<double> reported_macro_area_mm2;

    std::uint64_t plane() const { return Di * Do; }
    std::uint64_t capacity_weights() const { return Di * Do * Dh * Dm; }

    bool operator==(const ImcArchitecture&) const = default;
};

struct CostParams {
    // Energy of one 1b x 1b MAC-equivalent. Digital designs derive it from
    // n_nd2_per_mac * nd2_cap_F * V^2, spread over the native
    // weight_bits x input_bits bit products.
    double e_mac_J = 0.0;
    double e_adc_J = 0.0;
    // Per active macro per compute cycle.
    double e_periph_J = 0.0;
    double e_buf_J_per_bit = 0.0;
    double e_dram_J_per_bit = 0.0;
    double dram_bw_bits_per_s = 1.0;
    double cell_area_um2 = 0.0;
    double periph_area_um2 = 0.0;
    std::uint64_t buf_bytes = 0;

    // Derivation inputs for e_mac_J on digital designs (calibration knobs).
    double n_nd2_per_mac = 50.0;
    double nd2_cap_F = 0.3e-15;

    bool operator==(const CostParams&) const = default;
};

struct ArchConfig {
    ImcArchitecture arch;
    CostParams cost;
    std::string baseline;  // bundled design the defaults came from
    std::string dram = "lpddr4";
    std::string buffer = "sram256k";

    bool operator==(const ArchConfig&) const = default;
};

void validate(const ImcArchitecture& arch);
void validate(const CostParams& cost);

// Per 1b x 1b energy of a digital MAC built from n_nd2 NAND2-equivalents.
double digital_mac_energy(double n_nd2_per_mac, double nd2_cap_F, double voltage_v,
                          unsigned weight_bits, unsigned input_bits);

// Bundled designs: "dimc22" (22nm digital) and "aimc28" (28nm analog), both
// with an LPDDR4 weight memory and a 256 kB SRAM activation buffer.
ArchConfig bundled_architecture(std::string_view name);

// Missing cost fields are filled from the bundled baseline named by
// "baseline" (or by imc_kind when absent).
ArchConfig load_architecture(std::string_view text);
ArchConfig load_architecture_file(const std::filesystem::path& path);
std::string serialize_architecture(const ArchConfig& config);

struct AreaReport {
    double macro_area_mm2 = 0.0;
    double total_imc_area_mm2 = 0.0;
    double density_bits_per_mm2 = 0.0;
};

// macro = periph + cell * Di * Do * Dm * weight_bits; total = Dh * macro.
AreaReport compute_area(const ImcArchitecture& arch, const CostParams& cost);

}  // namespace imcpack
