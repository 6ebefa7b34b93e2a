#include "imcpack/costmodel.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "imcpack/error.hpp"
#include "imcpack/numfmt.hpp"

namespace imcpack {

std::string_view to_string(LoadMode m) { return m == LoadMode::cold ? "cold" : "steady"; }

LoadMode parse_load_mode(std::string_view s) {
    if (s == "cold") return LoadMode::cold;
    if (s == "steady") return LoadMode::steady;
    throw ParseError("unknown load mode '" + std::string(s) + "' (expected cold or steady)");
}

std::uint64_t layer_cycles(const Layer& layer, const Tile& tile) { return tile.Tm * layer.OX * layer.OY; }

std::uint64_t layer_cycles(const Layer& layer, const LayerMapping& mapping) {
    return mapping.Tm * layer.OX * layer.OY;
}

void check_activation_buffer(const Workload& workload, const CostParams& cost) {
    const auto cap_bits = cost.buf_bytes * 8;
    for (const auto& l : workload.layers) {
        const bool depthwise = l.C == 1 && l.FX * l.FY > 1;
        const auto in_ch = depthwise ? l.K : l.C;
        const auto in_bits = in_ch * (l.OX + l.FX - 1) * (l.OY + l.FY - 1) * l.act_bits;
        const auto out_bits = l.K * l.OX * l.OY * l.act_bits;
        if (in_bits + out_bits > cap_bits)
            throw ValidationError("layer '" + l.id + "' needs " + std::to_string(in_bits + out_bits) +
                                  " activation bits but the buffer holds " + std::to_string(cap_bits));
    }
}

CostReport estimate_cost(const Workload& workload, const Allocation& allocation, const ImcArchitecture& arch,
                         const CostParams& cost, LoadMode mode) {
    CostReport r;
    r.fit_on_chip = allocation.fit_on_chip;
    r.steady_state = mode == LoadMode::steady && allocation.fit_on_chip;
    r.area = compute_area(arch, cost);

    const bool load = !(mode == LoadMode::steady && allocation.fit_on_chip);
    const double spatial = static_cast<double>(arch.Di * arch.Do * arch.Dh);
    double compute_s = 0.0;
    double util_sum = 0.0;

    for (const auto& l : workload.layers) {
        const auto* m = allocation.find_layer(l.id);
        if (!m) throw ValidationError("allocation has no mapping for layer '" + l.id + "'");
        if (m->Ti * m->To * m->Th * m->Tm < l.weight_volume())
            throw ValidationError("mapping of layer '" + l.id + "' covers fewer weights than the layer holds");

        LayerCost c;
        c.layer_id = l.id;
        c.compute_cycles = layer_cycles(l, *m);
        const auto cyc = static_cast<double>(c.compute_cycles);
        c.compute_seconds = cyc / arch.clock_hz;

        if (arch.kind == ImcKind::digital)
            c.mac_energy_J = static_cast<double>(l.macs()) * l.weight_bits * l.act_bits * cost.e_mac_J;
        else
            c.mac_energy_J = cyc * static_cast<double>(m->Ti * m->Th) * cost.e_adc_J;
        c.periph_energy_J = cyc * static_cast<double>(m->Th) * cost.e_periph_J;

        const auto th_acc = m->Th / std::max<std::uint64_t>(1, m->th_gather);
        const double in_bits = cyc * static_cast<double>(m->To * th_acc) * l.act_bits;
        const double out_bits = cyc * static_cast<double>(m->Ti * m->th_gather) * l.act_bits /
                                static_cast<double>(std::max<std::uint64_t>(1, m->accumulation_depth));
        const double psum_bits = 2.0 * static_cast<double>(th_acc - 1) * out_bits;
        c.act_buffer_energy_J = (in_bits + out_bits + psum_bits) * cost.e_buf_J_per_bit;

        if (load) c.weight_load_bits = l.weight_storage_bits();
        c.weight_load_energy_J = static_cast<double>(c.weight_load_bits) * cost.e_dram_J_per_bit;
        c.weight_load_seconds = static_cast<double>(c.weight_load_bits) / cost.dram_bw_bits_per_s;
        c.spatial_utilization = static_cast<double>(std::min(m->Ti * m->To * m->Th, arch.Di * arch.Do * arch.Dh)) /
                                spatial;

        r.cycles_total += c.compute_cycles;
        r.weight_load_bits += c.weight_load_bits;
        r.energy.mac += c.mac_energy_J;
        r.energy.periph += c.periph_energy_J;
        r.energy.act += c.act_buffer_energy_J;
        r.energy.weight_load += c.weight_load_energy_J;
        compute_s += c.compute_seconds;
        util_sum += c.spatial_utilization;
        r.per_layer.push_back(std::move(c));
    }

    // Compute time is booked under mac; weight loading is serialized after it.
    r.delay.mac = compute_s;
    r.delay.weight_load = static_cast<double>(r.weight_load_bits) / cost.dram_bw_bits_per_s;
    r.energy_total_J = r.energy.total();
    r.delay_total_s = r.delay.total();
    r.edp_Js = r.energy_total_J * r.delay_total_s;
    const double e_compute = r.energy.mac + r.energy.periph + r.energy.act;
    r.edp_additive_Js = e_compute * r.delay.mac + r.energy.weight_load * r.delay.weight_load;
    if (!workload.layers.empty()) r.mean_spatial_utilization = util_sum / static_cast<double>(workload.layers.size());
    return r;
}

namespace {

nlohmann::ordered_json breakdown_json(const Breakdown& b) {
    nlohmann::ordered_json j;
    j["mac"] = b.mac;
    j["periph"] = b.periph;
    j["act"] = b.act;
    j["weight_load"] = b.weight_load;
    return j;
}

}  // namespace

std::string cost_report_json(const CostReport& r, std::string_view workload, std::string_view strategy) {
    nlohmann::ordered_json j;
    j["schema"] = "imcpack.cost_report";
    j["version"] = 1;
    j["workload"] = workload;
    j["strategy"] = strategy;
    j["fit_on_chip"] = r.fit_on_chip;
    j["steady_state"] = r.steady_state;
    j["cycles_total"] = r.cycles_total;
    j["weight_load_bits"] = r.weight_load_bits;
    j["energy_total_J"] = r.energy_total_J;
    j["delay_total_s"] = r.delay_total_s;
    j["edp_Js"] = r.edp_Js;
    j["edp_additive_Js"] = r.edp_additive_Js;
    j["mean_spatial_utilization"] = r.mean_spatial_utilization;
    j["energy_J"] = breakdown_json(r.energy);
    j["delay_s"] = breakdown_json(r.delay);
    j["area"] = {{"macro_area_mm2", r.area.macro_area_mm2},
                 {"total_imc_area_mm2", r.area.total_imc_area_mm2},
                 {"density_bits_per_mm2", r.area.density_bits_per_mm2}};
    auto& layers = j["layers"] = nlohmann::ordered_json::array();
    for (const auto& c : r.per_layer) {
        nlohmann::ordered_json l;
        l["layer"] = c.layer_id;
        l["compute_cycles"] = c.compute_cycles;
        l["compute_s"] = c.compute_seconds;
        l["mac_energy_J"] = c.mac_energy_J;
        l["periph_energy_J"] = c.periph_energy_J;
        l["act_buffer_energy_J"] = c.act_buffer_energy_J;
        l["weight_load_bits"] = c.weight_load_bits;
        l["weight_load_energy_J"] = c.weight_load_energy_J;
        l["weight_load_s"] = c.weight_load_seconds;
        l["spatial_utilization"] = c.spatial_utilization;
        layers.push_back(std::move(l));
    }
    return j.dump(2) + "\n";
}

std::string cost_report_csv(const CostReport& r, std::string_view workload, std::string_view strategy) {
    std::ostringstream os;
    os << "workload,strategy,layer,compute_cycles,compute_s,mac_energy_J,periph_energy_J,act_buffer_energy_J,"
          "weight_load_bits,weight_load_energy_J,weight_load_s,spatial_utilization\n";
    for (const auto& c : r.per_layer) {
        os << workload << ',' << strategy << ',' << c.layer_id << ',' << c.compute_cycles << ','
           << fmt_double(c.compute_seconds) << ',' << fmt_double(c.mac_energy_J) << ','
           << fmt_double(c.periph_energy_J) << ',' << fmt_double(c.act_buffer_energy_J) << ','
           << c.weight_load_bits << ',' << fmt_double(c.weight_load_energy_J) << ','
           << fmt_double(c.weight_load_seconds) << ',' << fmt_double(c.spatial_utilization) << '\n';
    }
    os << workload << ',' << strategy << ",total," << r.cycles_total << ',' << fmt_double(r.delay.mac) << ','
       << fmt_double(r.energy.mac) << ',' << fmt_double(r.energy.periph) << ',' << fmt_double(r.energy.act) << ','
       << r.weight_load_bits << ',' << fmt_double(r.energy.weight_load) << ',' << fmt_double(r.delay.weight_load)
       << ',' << fmt_double(r.mean_spatial_utilization) << '\n';
    return os.str();
}

std::vector<ComparisonRow> compare_mappings(const Workload& workload, const ImcArchitecture& arch,
                                            const CostParams& cost, LoadMode mode, const MinDmOptions& options) {
    std::vector<ComparisonRow> rows;
    for (auto s : {Strategy::packed, Strategy::stacked, Strategy::flattened}) {
        ComparisonRow row;
        row.strategy = s;
        auto at = arch;
        try {
            row.min_dm = min_dm_for_fit(workload, arch, s, options);
            row.found = true;
            row.fits_given_dm = row.min_dm <= arch.Dm;
            at.Dm = row.min_dm;
        } catch (const ValidationError&) {
            throw;
        } catch (const Error&) {
            row.found = false;
        }
        auto out = map_workload(workload, at, s, options.pack);
        row.folds = out.fold_count();
        row.report = estimate_cost(workload, out.allocation, at, cost, mode);
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

SweepPoint run_point(const Workload& workload, const ImcArchitecture& arch, const CostParams& cost,
                     Strategy s, LoadMode mode, const PackOptions& pack) {
    SweepPoint p;
    p.workload = workload.name;
    p.strategy = s;
    p.mode = mode;
    p.Dh = arch.Dh;
    p.Dm = arch.Dm;
    try {
        auto out = map_workload(workload, arch, s, pack);
        p.fit = out.ok();
        p.folds = out.fold_count();
        p.report = estimate_cost(workload, out.allocation, arch, cost, mode);
    } catch (const std::exception& e) {
        p.error = e.what();
    }
    return p;
}

}  // namespace

std::vector<SweepPoint> sweep(const Workload& workload, const ImcArchitecture& arch_template, const CostParams& cost,
                              const SweepSpec& spec) {
    if (spec.dh_values.empty() || spec.dm_values.empty() || spec.strategies.empty())
        throw ValidationError("sweep needs at least one Dh, one Dm and one strategy");
    validate(workload);

    struct Job {
        Strategy s;
        ImcArchitecture arch;
    };
    std::vector<Job> jobs;
    for (auto s : spec.strategies)
        for (auto dh : spec.dh_values)
            for (auto dm : spec.dm_values) {
                auto a = arch_template;
                a.Dh = dh;
                a.Dm = dm;
                jobs.push_back({s, a});
            }

    std::vector<SweepPoint> out(jobs.size());
    const auto n = static_cast<std::ptrdiff_t>(jobs.size());
    if (spec.policy == ExecPolicy::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t i = 0; i < n; ++i)
            out[i] = run_point(workload, jobs[i].arch, cost, jobs[i].s, spec.mode, spec.pack);
    } else {
        for (std::ptrdiff_t i = 0; i < n; ++i)
            out[i] = run_point(workload, jobs[i].arch, cost, jobs[i].s, spec.mode, spec.pack);
    }
    return out;
}

}  // namespace imcpack
