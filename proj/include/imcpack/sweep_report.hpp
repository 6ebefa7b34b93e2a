// sweep_report.hpp — flat CSV for sweep points and Pareto filtering.
//
// Columns (fixed order):
//   workload,strategy,mode,Dh,Dm,fit,folds,area_mm2,energy_J,delay_s,edp_Js,
//   edp_additive_Js,e_mac_J,e_periph_J,e_act_J,e_weight_load_J,t_compute_s,
//   t_weight_load_s,weight_load_bits,cycles,utilization,error
// Reals use shortest round-trip formatting, so reading a file back gives the
// same doubles. `error` is empty unless the point itself failed; it never
// contains commas or newlines.
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "imcpack/costmodel.hpp"

namespace imcpack {

struct SweepRow {
    std::string workload;
    std::string strategy;
    std::string mode;
    std::uint64_t Dh = 0;
    std::uint64_t Dm = 0;
    bool fit = false;
    std::size_t folds = 0;
    double area_mm2 = 0.0;
    double energy_J = 0.0;
    double delay_s = 0.0;
    double edp_Js = 0.0;
    double edp_additive_Js = 0.0;
    double e_mac_J = 0.0;
    double e_periph_J = 0.0;
    double e_act_J = 0.0;
    double e_weight_load_J = 0.0;
    double t_compute_s = 0.0;
    double t_weight_load_s = 0.0;
    std::uint64_t weight_load_bits = 0;
    std::uint64_t cycles = 0;
    double utilization = 0.0;
    std::string error;

    bool operator==(const SweepRow&) const = default;
};

extern const char* const kSweepCsvHeader;

SweepRow to_row(const SweepPoint& p);
std::string write_sweep_csv(const std::vector<SweepRow>& rows);
// Throws ParseError on a wrong header, column count or malformed number.
std::vector<SweepRow> read_sweep_csv(std::string_view text);

// Rows not dominated in (area_mm2, edp_Js), both minimized. Points that
// failed with an error are dropped. Input order is kept.
std::vector<SweepRow> pareto_front(const std::vector<SweepRow>& rows);

}  // namespace imcpack
