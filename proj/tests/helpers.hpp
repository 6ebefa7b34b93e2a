#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "imcpack/architecture.hpp"
#include "imcpack/workload.hpp"

#ifndef IMCPACK_TEST_DATA_DIR
#define IMCPACK_TEST_DATA_DIR "data"
#endif

namespace th {

using namespace imcpack;

inline Layer layer(std::string id, std::uint64_t K, std::uint64_t C, std::uint64_t FX = 1, std::uint64_t FY = 1,
                   std::uint64_t OX = 1, std::uint64_t OY = 1, unsigned bits = 4) {
    Layer l;
    l.id = std::move(id);
    l.K = K;
    l.C = C;
    l.FX = FX;
    l.FY = FY;
    l.OX = OX;
    l.OY = OY;
    l.weight_bits = bits;
    l.act_bits = bits;
    return l;
}

inline ImcArchitecture arch(std::uint64_t Di, std::uint64_t Do, std::uint64_t Dh, std::uint64_t Dm) {
    ImcArchitecture a;
    a.name = "test";
    a.Di = Di;
    a.Do = Do;
    a.Dh = Dh;
    a.Dm = Dm;
    return a;
}

inline std::string data_path(const std::string& rel) { return std::string(IMCPACK_TEST_DATA_DIR) + "/" + rel; }

inline const std::vector<std::string>& bundled_workloads() {
    static const std::vector<std::string> names{"resnet8", "ds_cnn", "mobilenet_v1_025", "autoencoder"};
    return names;
}

inline Workload bundled_workload(const std::string& name) {
    return load_workload(data_path("workloads/" + name + ".json"));
}

// Numbers up to `max` whose prime factors are all <= 7: the channel counts
// real networks use.
inline std::vector<std::uint64_t> smooth_numbers(std::uint64_t max) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = 1; n <= max; ++n) {
        auto m = n;
        for (std::uint64_t p : {2, 3, 5, 7})
            while (m % p == 0) m /= p;
        if (m == 1) out.push_back(n);
    }
    return out;
}

// Random layer stack. Channel counts are log-uniform over smooth numbers up
// to max_ch; filters are 1x1 or 3x3 mostly.
inline Workload random_workload(std::mt19937_64& rng, std::size_t min_layers, std::size_t max_layers,
                                std::uint64_t max_ch, const std::string& name) {
    static const auto pick_from = [](std::mt19937_64& r, const std::vector<std::uint64_t>& v) {
        std::uniform_real_distribution<double> u(0.0, std::log(static_cast<double>(v.back()) + 1.0));
        const double target = std::exp(u(r));
        auto it = std::lower_bound(v.begin(), v.end(), static_cast<std::uint64_t>(target));
        if (it == v.end()) --it;
        return *it;
    };
    const auto smooth = smooth_numbers(max_ch);
    std::uniform_int_distribution<std::size_t> nl(min_layers, max_layers);
    std::discrete_distribution<int> filt{5, 0, 4, 0, 1};
    std::uniform_int_distribution<std::uint64_t> ox(1, 32);
    Workload w;
    w.name = name;
    const auto n = nl(rng);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t f = static_cast<std::uint64_t>(filt(rng)) + 1;
        const auto o = ox(rng);
        w.layers.push_back(layer("l" + std::to_string(i), pick_from(rng, smooth), pick_from(rng, smooth), f, f, o, o));
    }
    return w;
}

}  // namespace th
