// costmodel.hpp — energy, latency, EDP and area of a mapped workload.
//
// Per layer l with mapping (Ti, To, Th, Tm):
//   cycles      = Tm * OX * OY
//   MAC energy  = MACs * wbits * abits * e_mac               (digital)
//               = cycles * Ti * Th * e_adc                    (analog)
//   periph      = cycles * Th * e_periph
//   act buffer  = [cycles * To * Th_acc * abits                      inputs
//                + cycles * Ti * Th_gather * abits / acc_depth       outputs
//                + 2 * (Th_acc - 1) * that output term]            cross-macro psums
//                 * e_buf
//   weight load = V * wbits bits, once (cold, resident), never (steady,
//                 resident) or every inference (not resident)
//   delay       = sum cycles / clock + load bits / DRAM bandwidth
// Weight loads never overlap compute.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "imcpack/allocation.hpp"
#include "imcpack/architecture.hpp"
#include "imcpack/baselines.hpp"
#include "imcpack/exec.hpp"
#include "imcpack/tiling.hpp"
#include "imcpack/workload.hpp"

namespace imcpack {

enum class LoadMode { cold, steady };

std::string_view to_string(LoadMode m);
LoadMode parse_load_mode(std::string_view s);

std::uint64_t layer_cycles(const Layer& layer, const Tile& tile);
std::uint64_t layer_cycles(const Layer& layer, const LayerMapping& mapping);

struct LayerCost {
    std::string layer_id;
    std::uint64_t compute_cycles = 0;
    double compute_seconds = 0.0;
    double mac_energy_J = 0.0;
    double periph_energy_J = 0.0;
    double act_buffer_energy_J = 0.0;
    std::uint64_t weight_load_bits = 0;
    double weight_load_energy_J = 0.0;
    double weight_load_seconds = 0.0;
    double spatial_utilization = 0.0;
};

struct Breakdown {
    double mac = 0.0;
    double periph = 0.0;
    double act = 0.0;
    double weight_load = 0.0;

    double total() const { return mac + periph + act + weight_load; }
};

struct CostReport {
    std::vector<LayerCost> per_layer;
    Breakdown energy;  // J
    Breakdown delay;   // s; compute time is booked under mac
    double energy_total_J = 0.0;
    double delay_total_s = 0.0;
    double edp_Js = 0.0;  // energy_total * delay_total
    // EDP of (MAC + periph + activation) over compute time plus EDP of the
    // weight loading over load time, for comparison with the product form.
    double edp_additive_Js = 0.0;
    std::uint64_t cycles_total = 0;
    std::uint64_t weight_load_bits = 0;
    double mean_spatial_utilization = 0.0;
    AreaReport area;
    bool steady_state = false;
    bool fit_on_chip = false;
};

// Throws ValidationError if some layer's input plus output activations do not
// fit in the activation buffer. Input channels are taken as C, or K for
// C = 1 layers with a spatial filter (depthwise), which overestimates the
// first layer of single-channel networks.
void check_activation_buffer(const Workload& workload, const CostParams& cost);

// Throws ValidationError when the allocation does not map every layer of the
// workload.
CostReport estimate_cost(const Workload& workload, const Allocation& allocation, const ImcArchitecture& arch,
                         const CostParams& cost, LoadMode mode);

std::string cost_report_json(const CostReport& report, std::string_view workload, std::string_view strategy);
// One row per layer plus a trailing "total" row.
std::string cost_report_csv(const CostReport& report, std::string_view workload, std::string_view strategy);

struct ComparisonRow {
    Strategy strategy = Strategy::packed;
    bool found = false;  // some Dm up to the ceiling fits
    std::uint64_t min_dm = 0;
    bool fits_given_dm = false;  // fits at the architecture's own Dm
    std::size_t folds = 0;
    CostReport report;  // evaluated at min_dm, or at the given Dm when !found
};

// One row per strategy, each costed at its own minimum Dm.
std::vector<ComparisonRow> compare_mappings(const Workload& workload, const ImcArchitecture& arch,
                                            const CostParams& cost, LoadMode mode, const MinDmOptions& options = {});

struct SweepPoint {
    std::string workload;
    Strategy strategy = Strategy::packed;
    LoadMode mode = LoadMode::steady;
    std::uint64_t Dh = 1;
    std::uint64_t Dm = 1;
    bool fit = false;
    std::size_t folds = 0;
    CostReport report;
    std::string error;  // per-point failure other than not fitting
};

struct SweepSpec {
    std::vector<std::uint64_t> dh_values;
    std::vector<std::uint64_t> dm_values;
    std::vector<Strategy> strategies{Strategy::packed, Strategy::stacked, Strategy::flattened};
    LoadMode mode = LoadMode::steady;
    PackOptions pack;
    ExecPolicy policy = ExecPolicy::parallel;
};

// Rows ordered by strategy, then Dh, then Dm. Points that do not fit are
// costed with per-inference weight reloads.
std::vector<SweepPoint> sweep(const Workload& workload, const ImcArchitecture& arch_template,
                              const CostParams& cost, const SweepSpec& spec);

}  // namespace imcpack
