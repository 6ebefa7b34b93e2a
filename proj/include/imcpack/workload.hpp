// workload.hpp — DNN layers as 6-nested loops and their loop prime factors.
//
// A layer is described by K (output channels), C (input channels), FX/FY
// (filter) and OX/OY (output pixels). Only K, C, FX, FY carry weights and can
// be unrolled spatially in an IMC macro; OX, OY always stay temporal.
// Fully-connected layers use FX = FY = OX = OY = 1, depthwise convolutions use
// C = 1 with K equal to the channel count.
#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace imcpack {

// Weight loop dimensions that can be decomposed into prime factors.
enum class Dim : std::uint8_t { K = 0, C = 1, FX = 2, FY = 3 };

std::string_view to_string(Dim d);
std::optional<Dim> parse_dim(std::string_view s);

// C, FX and FY are irrelevant for the outputs: they unroll along D_o and
// their partial sums accumulate. K is irrelevant for the inputs.
constexpr bool is_input_relevant(Dim d) { return d != Dim::K; }

// One loop prime factor, tagged with the loop it came from.
struct Lpf {
    Dim dim = Dim::K;
    std::uint64_t prime = 1;

    auto operator<=>(const Lpf&) const = default;
};

// Sorted by (dim, prime).
using LpfSet = std::vector<Lpf>;

std::uint64_t product(std::span<const Lpf> lpfs);
std::uint64_t product(std::span<const Lpf> lpfs, Dim d);
std::string format_lpfs(std::span<const Lpf> lpfs);

struct Layer {
    std::string id;
    std::uint64_t K = 1;
    std::uint64_t C = 1;
    std::uint64_t FX = 1;
    std::uint64_t FY = 1;
    std::uint64_t OX = 1;
    std::uint64_t OY = 1;
    unsigned weight_bits = 8;
    unsigned act_bits = 8;

    std::uint64_t dim(Dim d) const;
    // C * FX * FY, the extent mapped along D_o.
    std::uint64_t reduction_size() const { return C * FX * FY; }
    std::uint64_t weight_volume() const { return K * C * FX * FY; }
    std::uint64_t macs() const { return weight_volume() * OX * OY; }
    std::uint64_t weight_storage_bits() const { return weight_volume() * weight_bits; }

    bool operator==(const Layer&) const = default;
};

struct Workload {
    std::string name;
    std::vector<Layer> layers;

    std::uint64_t total_weight_volume() const;
    std::uint64_t total_weight_bits() const;
    std::optional<std::size_t> index_of(std::string_view layer_id) const;

    bool operator==(const Workload&) const = default;
};

// Throw ValidationError on the first violated invariant.
void validate(const Layer& layer);
void validate(const Workload& workload);

Workload parse_workload(std::string_view text);
Workload load_workload(const std::filesystem::path& path);
std::string serialize_workload(const Workload& workload);

std::vector<std::uint64_t> prime_factors(std::uint64_t n);

// Prime factors of K, C, FX and FY, ordered by (dim, prime).
LpfSet lpf_decompose(const Layer& layer);

}  // namespace imcpack
