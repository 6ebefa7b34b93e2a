// cli.hpp — subcommands of the imcpack tool, callable in-process.
//
// Exit codes: 0 success, 1 other errors (bad input, I/O), 2 packing
// infeasible, 3 allocation validation failure.
//
// Files written to --out-dir (default "."):
//   pack     <wl>.<strategy>.allocation.json, <wl>.<strategy>.cost.json,
//            <wl>.<strategy>.cost.csv
//   sweep    <wl>.sweep.csv (only the Pareto rows with --pareto)
//   compare  <wl>.compare.csv
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "imcpack/architecture.hpp"
#include "imcpack/workload.hpp"

namespace imcpack {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitInvalid = 3;

struct RunConfig {
    std::string workload;  // file path or bundled name
    std::string arch;      // file path or bundled name
    std::string strategy = "packed";  // packed | stacked | flattened | all
    std::string mode = "steady";      // cold | steady
    std::optional<std::uint64_t> dh;  // override the architecture's Dh
    std::optional<std::uint64_t> dm;  // override the architecture's Dm
    std::vector<std::uint64_t> dh_values;
    std::vector<std::uint64_t> dm_values;
    std::string allocation;  // validate only
    std::string out_dir = ".";
    std::uint64_t dm_ceiling = 4096;
    bool pareto = false;
    int verbosity = 0;
};

// A path that exists is loaded as-is; otherwise the name is looked up in the
// bundled data directory.
Workload resolve_workload(const std::string& spec);
ArchConfig resolve_architecture(const std::string& spec);

int cmd_pack(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_min_dm(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Parses argv and dispatches to a subcommand.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace imcpack
