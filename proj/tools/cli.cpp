#include "imcpack/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "imcpack/baselines.hpp"
#include "imcpack/costmodel.hpp"
#include "imcpack/error.hpp"
#include "imcpack/numfmt.hpp"
#include "imcpack/sweep_report.hpp"

#ifndef IMCPACK_DATA_DIR
#define IMCPACK_DATA_DIR "data"
#endif

namespace fs = std::filesystem;

namespace imcpack {

namespace {

fs::path data_dir() {
    if (const char* env = std::getenv("IMCPACK_DATA_DIR")) return env;
    return IMCPACK_DATA_DIR;
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path.string());
    f << text;
}

std::string read_file(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot read " + path.string());
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

std::vector<Strategy> strategies_of(const std::string& s) {
    if (s == "all") return {Strategy::packed, Strategy::stacked, Strategy::flattened};
    return {parse_strategy(s)};
}

ArchConfig configured_arch(const RunConfig& cfg) {
    auto a = resolve_architecture(cfg.arch);
    if (cfg.dh) a.arch.Dh = *cfg.dh;
    if (cfg.dm) a.arch.Dm = *cfg.dm;
    validate(a.arch);
    return a;
}

MinDmOptions min_dm_options(const RunConfig& cfg) {
    MinDmOptions o;
    o.ceiling = cfg.dm_ceiling;
    return o;
}

void print_trace(const std::vector<TraceEvent>& trace, std::ostream& os) {
    for (const auto& e : trace) os << "  " << format_event(e) << '\n';
}

}  // namespace

Workload resolve_workload(const std::string& spec) {
    if (fs::exists(spec)) return load_workload(spec);
    auto p = data_dir() / "workloads" / (spec + ".json");
    if (fs::exists(p)) return load_workload(p);
    throw Error("no workload file or bundled workload named '" + spec + "'");
}

ArchConfig resolve_architecture(const std::string& spec) {
    if (fs::exists(spec)) return load_architecture_file(spec);
    auto p = data_dir() / "arch" / (spec + ".json");
    if (fs::exists(p)) return load_architecture_file(p);
    throw Error("no architecture file or bundled architecture named '" + spec + "'");
}

int cmd_pack(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto wl = resolve_workload(cfg.workload);
    const auto ac = configured_arch(cfg);
    const auto mode = parse_load_mode(cfg.mode);
    check_activation_buffer(wl, ac.cost);

    int status = kExitOk;
    out << std::left << std::setw(10) << "strategy" << std::right << std::setw(5) << "fit" << std::setw(7) << "folds"
        << std::setw(12) << "cycles" << std::setw(14) << "energy_J" << std::setw(14) << "delay_s" << std::setw(14)
        << "edp_Js" << std::setw(11) << "area_mm2" << '\n';
    for (auto s : strategies_of(cfg.strategy)) {
        auto res = map_workload(wl, ac.arch, s);
        const auto name = std::string(to_string(s));
        if (!res.ok()) {
            err << name << ": " << wl.name << " does not fit in Di=" << ac.arch.Di << " Do=" << ac.arch.Do
                << " Dh=" << ac.arch.Dh << " Dm=" << ac.arch.Dm << "\n";
            print_trace(res.fold_trace, err);
            out << std::left << std::setw(10) << name << std::right << std::setw(5) << "no" << std::setw(7)
                << res.fold_count() << '\n';
            status = kExitInfeasible;
            continue;
        }
        if (cfg.verbosity > 0) print_trace(res.fold_trace, out);
        const auto rep = estimate_cost(wl, res.allocation, ac.arch, ac.cost, mode);
        const auto stem = fs::path(cfg.out_dir) / (wl.name + "." + name);
        write_file(stem.string() + ".allocation.json", export_allocation(res.allocation, wl.name));
        write_file(stem.string() + ".cost.json", cost_report_json(rep, wl.name, name));
        write_file(stem.string() + ".cost.csv", cost_report_csv(rep, wl.name, name));
        out << std::left << std::setw(10) << name << std::right << std::setw(5) << "yes" << std::setw(7)
            << res.fold_count() << std::setw(12) << rep.cycles_total << std::setw(14) << std::setprecision(4)
            << rep.energy_total_J << std::setw(14) << rep.delay_total_s << std::setw(14) << rep.edp_Js
            << std::setw(11) << rep.area.total_imc_area_mm2 << '\n';
    }
    return status;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    const auto wl = resolve_workload(cfg.workload);
    const auto ac = configured_arch(cfg);
    SweepSpec spec;
    spec.dh_values = cfg.dh_values.empty() ? std::vector<std::uint64_t>{ac.arch.Dh} : cfg.dh_values;
    spec.dm_values = cfg.dm_values.empty() ? std::vector<std::uint64_t>{ac.arch.Dm} : cfg.dm_values;
    spec.strategies = strategies_of(cfg.strategy);
    spec.mode = parse_load_mode(cfg.mode);
    check_activation_buffer(wl, ac.cost);

    std::vector<SweepRow> rows;
    for (const auto& p : sweep(wl, ac.arch, ac.cost, spec)) rows.push_back(to_row(p));
    if (cfg.pareto) rows = pareto_front(rows);
    const auto path = fs::path(cfg.out_dir) / (wl.name + ".sweep.csv");
    write_file(path, write_sweep_csv(rows));
    std::size_t fit = 0;
    for (const auto& r : rows) fit += r.fit;
    out << rows.size() << " points (" << fit << " fit) -> " << path.string() << '\n';
    return kExitOk;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto wl = resolve_workload(cfg.workload);
    const auto alloc = import_allocation(read_file(cfg.allocation));
    auto geometry = alloc.geometry;
    if (!cfg.arch.empty()) geometry = geometry_of(configured_arch(cfg).arch);
    const auto issues = validate_allocation(alloc, wl, geometry);
    if (issues.empty()) {
        out << "valid: " << alloc.entries.size() << " entries, " << alloc.layers.size() << " layers\n";
        return kExitOk;
    }
    for (const auto& i : issues) err << "violation: " << i << '\n';
    err << issues.size() << " violation(s)\n";
    return kExitInvalid;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    const auto wl = resolve_workload(cfg.workload);
    const auto ac = configured_arch(cfg);
    const auto mode = parse_load_mode(cfg.mode);
    check_activation_buffer(wl, ac.cost);
    const auto rows = compare_mappings(wl, ac.arch, ac.cost, mode, min_dm_options(cfg));

    std::ostringstream csv;
    csv << "workload,strategy,mode,found,min_dm,fits_given_dm,folds,cycles,energy_J,delay_s,edp_Js,utilization,"
           "area_mm2\n";
    out << std::left << std::setw(10) << "strategy" << std::right << std::setw(8) << "min_dm" << std::setw(7)
        << "folds" << std::setw(12) << "cycles" << std::setw(14) << "energy_J" << std::setw(14) << "delay_s"
        << std::setw(14) << "edp_Js" << std::setw(8) << "util" << std::setw(11) << "area_mm2" << '\n';
    for (const auto& r : rows) {
        const auto& c = r.report;
        const auto name = std::string(to_string(r.strategy));
        csv << wl.name << ',' << name << ',' << to_string(mode) << ',' << (r.found ? "true" : "false") << ','
            << r.min_dm << ',' << (r.fits_given_dm ? "true" : "false") << ',' << r.folds << ',' << c.cycles_total
            << ',' << fmt_double(c.energy_total_J) << ',' << fmt_double(c.delay_total_s) << ','
            << fmt_double(c.edp_Js) << ',' << fmt_double(c.mean_spatial_utilization) << ','
            << fmt_double(c.area.total_imc_area_mm2) << '\n';
        out << std::left << std::setw(10) << name << std::right << std::setw(8)
            << (r.found ? std::to_string(r.min_dm) : std::string(">ceil")) << std::setw(7) << r.folds
            << std::setw(12) << c.cycles_total << std::setprecision(4) << std::setw(14) << c.energy_total_J
            << std::setw(14) << c.delay_total_s << std::setw(14) << c.edp_Js << std::setw(8)
            << c.mean_spatial_utilization << std::setw(11) << c.area.total_imc_area_mm2 << '\n';
    }
    write_file(fs::path(cfg.out_dir) / (wl.name + ".compare.csv"), csv.str());
    return kExitOk;
}

int cmd_min_dm(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto wl = resolve_workload(cfg.workload);
    const auto ac = configured_arch(cfg);
    int status = kExitOk;
    for (auto s : strategies_of(cfg.strategy)) {
        try {
            out << to_string(s) << ' ' << min_dm_for_fit(wl, ac.arch, s, min_dm_options(cfg)) << '\n';
        } catch (const ValidationError&) {
            throw;
        } catch (const Error& e) {
            err << e.what() << '\n';
            status = kExitInfeasible;
        }
    }
    return status;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Pack DNN weights into IMC macros and estimate energy, latency and EDP"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto common = [&](CLI::App* sub, bool need_arch) {
        sub->add_option("-w,--workload", cfg.workload, "Workload file or bundled name")->required();
        auto* a = sub->add_option("-a,--arch", cfg.arch, "Architecture file or bundled name");
        if (need_arch) a->required();
        sub->add_option("--dh", cfg.dh, "Override Dh");
        sub->add_option("--dm", cfg.dm, "Override Dm");
        sub->add_option("-o,--out-dir", cfg.out_dir, "Output directory");
        sub->add_flag("-v,--verbose", cfg.verbosity, "Print fold traces");
    };
    auto strategy = [&](CLI::App* sub) {
        sub->add_option("-s,--strategy", cfg.strategy, "packed, stacked, flattened or all")
            ->check(CLI::IsMember({"packed", "stacked", "flattened", "all"}));
    };
    auto mode = [&](CLI::App* sub) {
        sub->add_option("-m,--mode", cfg.mode, "Weight loading: cold or steady")
            ->check(CLI::IsMember({"cold", "steady"}));
    };

    auto* pack = app.add_subcommand("pack", "Map a workload and write allocation and cost report");
    common(pack, true);
    strategy(pack);
    mode(pack);

    auto* sw = app.add_subcommand("sweep", "Evaluate a Dh x Dm grid and write a CSV");
    common(sw, true);
    strategy(sw);
    mode(sw);
    sw->add_option("--dh-values", cfg.dh_values, "Dh values")->delimiter(',');
    sw->add_option("--dm-values", cfg.dm_values, "Dm values")->delimiter(',');
    sw->add_flag("--pareto", cfg.pareto, "Keep only (area, EDP) non-dominated rows");

    auto* val = app.add_subcommand("validate", "Check an allocation file against a workload");
    common(val, false);
    val->add_option("--allocation", cfg.allocation, "Allocation file")->required();

    auto* cmp = app.add_subcommand("compare", "Compare strategies at their own minimum Dm");
    common(cmp, true);
    mode(cmp);
    cmp->add_option("--dm-ceiling", cfg.dm_ceiling, "Largest Dm tried");

    auto* mdm = app.add_subcommand("min-dm", "Smallest Dm at which each strategy fits");
    common(mdm, true);
    strategy(mdm);
    mdm->add_option("--dm-ceiling", cfg.dm_ceiling, "Largest Dm tried");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (*pack) return cmd_pack(cfg, out, err);
        if (*sw) return cmd_sweep(cfg, out, err);
        if (*val) return cmd_validate(cfg, out, err);
        if (*cmp) return cmd_compare(cfg, out, err);
        if (*mdm) return cmd_min_dm(cfg, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}

}  // namespace imcpack
