#include "imcpack/sweep_report.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "imcpack/error.hpp"
#include "imcpack/numfmt.hpp"

namespace imcpack {

double parse_double(std::string_view s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument("not a number: " + std::string(s));
    return v;
}

const char* const kSweepCsvHeader =
    "workload,strategy,mode,Dh,Dm,fit,folds,area_mm2,energy_J,delay_s,edp_Js,edp_additive_Js,e_mac_J,e_periph_J,"
    "e_act_J,e_weight_load_J,t_compute_s,t_weight_load_s,weight_load_bits,cycles,utilization,error";

namespace {

std::string clean(std::string s) {
    for (auto& ch : s)
        if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
    return s;
}

std::uint64_t parse_u64(std::string_view s) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument("not an integer: " + std::string(s));
    return v;
}

}  // namespace

SweepRow to_row(const SweepPoint& p) {
    const auto& r = p.report;
    SweepRow row;
    row.workload = p.workload;
    row.strategy = std::string(to_string(p.strategy));
    row.mode = std::string(to_string(p.mode));
    row.Dh = p.Dh;
    row.Dm = p.Dm;
    row.fit = p.fit;
    row.folds = p.folds;
    row.area_mm2 = r.area.total_imc_area_mm2;
    row.energy_J = r.energy_total_J;
    row.delay_s = r.delay_total_s;
    row.edp_Js = r.edp_Js;
    row.edp_additive_Js = r.edp_additive_Js;
    row.e_mac_J = r.energy.mac;
    row.e_periph_J = r.energy.periph;
    row.e_act_J = r.energy.act;
    row.e_weight_load_J = r.energy.weight_load;
    row.t_compute_s = r.delay.mac;
    row.t_weight_load_s = r.delay.weight_load;
    row.weight_load_bits = r.weight_load_bits;
    row.cycles = r.cycles_total;
    row.utilization = r.mean_spatial_utilization;
    row.error = clean(p.error);
    return row;
}

std::string write_sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << kSweepCsvHeader << '\n';
    for (const auto& r : rows) {
        os << r.workload << ',' << r.strategy << ',' << r.mode << ',' << r.Dh << ',' << r.Dm << ','
           << (r.fit ? "true" : "false") << ',' << r.folds << ',' << fmt_double(r.area_mm2) << ','
           << fmt_double(r.energy_J) << ',' << fmt_double(r.delay_s) << ',' << fmt_double(r.edp_Js) << ','
           << fmt_double(r.edp_additive_Js) << ',' << fmt_double(r.e_mac_J) << ',' << fmt_double(r.e_periph_J)
           << ',' << fmt_double(r.e_act_J) << ',' << fmt_double(r.e_weight_load_J) << ','
           << fmt_double(r.t_compute_s) << ',' << fmt_double(r.t_weight_load_s) << ',' << r.weight_load_bits << ','
           << r.cycles << ',' << fmt_double(r.utilization) << ',' << clean(r.error) << '\n';
    }
    return os.str();
}

std::vector<SweepRow> read_sweep_csv(std::string_view text) {
    std::vector<SweepRow> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line != kSweepCsvHeader) throw ParseError("sweep CSV: unexpected header");
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        if (!line.empty() && line.back() == ',') f.emplace_back();
        if (f.size() != 22)
            throw ParseError("sweep CSV line " + std::to_string(lineno) + ": expected 22 fields, got " +
                             std::to_string(f.size()));
        try {
            SweepRow r;
            r.workload = f[0];
            r.strategy = f[1];
            r.mode = f[2];
            r.Dh = parse_u64(f[3]);
            r.Dm = parse_u64(f[4]);
            if (f[5] != "true" && f[5] != "false") throw std::invalid_argument("fit must be true or false");
            r.fit = f[5] == "true";
            r.folds = parse_u64(f[6]);
            r.area_mm2 = parse_double(f[7]);
            r.energy_J = parse_double(f[8]);
            r.delay_s = parse_double(f[9]);
            r.edp_Js = parse_double(f[10]);
            r.edp_additive_Js = parse_double(f[11]);
            r.e_mac_J = parse_double(f[12]);
            r.e_periph_J = parse_double(f[13]);
            r.e_act_J = parse_double(f[14]);
            r.e_weight_load_J = parse_double(f[15]);
            r.t_compute_s = parse_double(f[16]);
            r.t_weight_load_s = parse_double(f[17]);
            r.weight_load_bits = parse_u64(f[18]);
            r.cycles = parse_u64(f[19]);
            r.utilization = parse_double(f[20]);
            r.error = f[21];
            rows.push_back(std::move(r));
        } catch (const std::invalid_argument& e) {
            throw ParseError("sweep CSV line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return rows;
}

std::vector<SweepRow> pareto_front(const std::vector<SweepRow>& rows) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i].error.empty()) idx.push_back(i);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return std::pair(rows[a].area_mm2, rows[a].edp_Js) < std::pair(rows[b].area_mm2, rows[b].edp_Js);
    });
    // Walk groups of equal area; within a group only the lowest EDP can
    // survive, and only if it beats every smaller-area point.
    std::vector<char> keep(rows.size(), 0);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < idx.size();) {
        auto e = g;
        while (e < idx.size() && rows[idx[e]].area_mm2 == rows[idx[g]].area_mm2) ++e;
        const double lo = rows[idx[g]].edp_Js;
        if (lo < best) {
            for (auto k = g; k < e && rows[idx[k]].edp_Js == lo; ++k) keep[idx[k]] = 1;
            best = lo;
        }
        g = e;
    }
    std::vector<SweepRow> out;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (keep[i]) out.push_back(rows[i]);
    return out;
}

}  // namespace imcpack
