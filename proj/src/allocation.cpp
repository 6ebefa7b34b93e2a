#include "imcpack/allocation.hpp"

#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "imcpack/error.hpp"

namespace imcpack {

using ojson = nlohmann::ordered_json;

std::string_view to_string(Strategy s) {
    switch (s) {
        case Strategy::packed: return "packed";
        case Strategy::stacked: return "stacked";
        case Strategy::flattened: return "flattened";
    }
    return "?";
}

Strategy parse_strategy(std::string_view s) {
    if (s == "packed") return Strategy::packed;
    if (s == "stacked") return Strategy::stacked;
    if (s == "flattened") return Strategy::flattened;
    throw ParseError("unknown strategy '" + std::string(s) + "'");
}

Geometry geometry_of(const ImcArchitecture& a) { return {a.Di, a.Do, a.Dh, a.Dm}; }

const LayerMapping* Allocation::find_layer(std::string_view id) const {
    for (const auto& l : layers)
        if (l.layer_id == id) return &l;
    return nullptr;
}

std::string export_allocation(const Allocation& a, std::string_view workload_name) {
    ojson doc;
    doc["schema"] = "imcpack.allocation";
    doc["version"] = 1;
    doc["strategy"] = std::string(to_string(a.strategy));
    doc["workload"] = std::string(workload_name);
    doc["geometry"] = {{"Di", a.geometry.Di}, {"Do", a.geometry.Do}, {"Dh", a.geometry.Dh}, {"Dm", a.geometry.Dm}};
    doc["fit_on_chip"] = a.fit_on_chip;
    doc["layers"] = ojson::array();
    for (const auto& l : a.layers) {
        ojson j;
        j["layer"] = l.layer_id;
        j["Ti"] = l.Ti;
        j["To"] = l.To;
        j["Th"] = l.Th;
        j["Tm"] = l.Tm;
        j["th_gather"] = l.th_gather;
        j["accumulation_depth"] = l.accumulation_depth;
        j["folds"] = ojson::array();
        for (const auto& f : l.folds) j["folds"].push_back(ojson::array({std::string(to_string(f.dim)), f.prime}));
        doc["layers"].push_back(std::move(j));
    }
    doc["entries"] = ojson::array();
    for (const auto& e : a.entries) {
        ojson j;
        j["layer"] = e.layer_id;
        j["macro"] = e.macro;
        j["dm"] = e.dm;
        j["di"] = e.di;
        j["do"] = e.do_;
        j["Ti"] = e.Ti;
        j["To"] = e.To;
        j["Tm"] = e.Tm;
        j["weights"] = e.weights;
        doc["entries"].push_back(std::move(j));
    }
    return doc.dump(2) + "\n";
}

namespace {

std::uint64_t u64(const nlohmann::json& obj, const char* field, const std::string& where) {
    auto it = obj.find(field);
    if (it == obj.end() || !it->is_number_unsigned())
        throw ParseError(where + ": field '" + field + "' must be a non-negative integer");
    return it->get<std::uint64_t>();
}

std::string str(const nlohmann::json& obj, const char* field, const std::string& where) {
    auto it = obj.find(field);
    if (it == obj.end() || !it->is_string()) throw ParseError(where + ": field '" + field + "' must be a string");
    return it->get<std::string>();
}

}  // namespace

Allocation import_allocation(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("allocation: malformed document: ") + e.what());
    }
    if (!doc.is_object() || doc.value("schema", "") != "imcpack.allocation")
        throw ParseError("allocation: not an imcpack.allocation document");
    if (doc.value("version", 0) != 1) throw ParseError("allocation: unsupported schema version");

    Allocation a;
    a.strategy = parse_strategy(str(doc, "strategy", "allocation"));
    const auto& g = doc.at("geometry");
    a.geometry = {u64(g, "Di", "geometry"), u64(g, "Do", "geometry"), u64(g, "Dh", "geometry"),
                  u64(g, "Dm", "geometry")};
    if (!doc.contains("fit_on_chip") || !doc["fit_on_chip"].is_boolean())
        throw ParseError("allocation: field 'fit_on_chip' must be a boolean");
    a.fit_on_chip = doc["fit_on_chip"].get<bool>();

    std::size_t i = 0;
    for (const auto& j : doc.at("layers")) {
        std::string where = "allocation layer #" + std::to_string(i++);
        LayerMapping l;
        l.layer_id = str(j, "layer", where);
        l.Ti = u64(j, "Ti", where);
        l.To = u64(j, "To", where);
        l.Th = u64(j, "Th", where);
        l.Tm = u64(j, "Tm", where);
        l.th_gather = u64(j, "th_gather", where);
        l.accumulation_depth = u64(j, "accumulation_depth", where);
        for (const auto& f : j.at("folds")) {
            if (!f.is_array() || f.size() != 2 || !f[0].is_string() || !f[1].is_number_unsigned())
                throw ParseError(where + ": malformed fold");
            auto d = parse_dim(f[0].get<std::string>());
            if (!d) throw ParseError(where + ": unknown fold dimension");
            l.folds.push_back({*d, f[1].get<std::uint64_t>()});
        }
        a.layers.push_back(std::move(l));
    }
    i = 0;
    for (const auto& j : doc.at("entries")) {
        std::string where = "allocation entry #" + std::to_string(i++);
        AllocationEntry e;
        e.layer_id = str(j, "layer", where);
        e.macro = u64(j, "macro", where);
        e.dm = u64(j, "dm", where);
        e.di = u64(j, "di", where);
        e.do_ = u64(j, "do", where);
        e.Ti = u64(j, "Ti", where);
        e.To = u64(j, "To", where);
        e.Tm = u64(j, "Tm", where);
        e.weights = u64(j, "weights", where);
        a.entries.push_back(std::move(e));
    }
    return a;
}

std::vector<std::string> validate_allocation(const Allocation& a, const Workload& w, const Geometry& g) {
    std::vector<std::string> out;
    auto describe = [&](std::size_t i) {
        const auto& e = a.entries[i];
        std::ostringstream os;
        os << "entry #" << i << " (layer " << e.layer_id << ", macro " << e.macro << ", dm " << e.dm << ", di "
           << e.di << ", do " << e.do_ << ", " << e.Ti << "x" << e.To << "x" << e.Tm << ")";
        return os.str();
    };

    if (a.geometry.Di != g.Di || a.geometry.Do != g.Do || a.geometry.Dh != g.Dh)
        out.push_back("geometry mismatch: allocation is for a different Di x Do x Dh");
    for (const auto& l : w.layers)
        if (!a.find_layer(l.id)) out.push_back("layer " + l.id + " has no mapping");
    if (!a.fit_on_chip) {
        out.push_back("allocation is not resident on chip (fit_on_chip=false)");
        return out;
    }

    std::map<std::string, std::uint64_t> covered;
    std::map<std::string, std::uint64_t> count;
    std::map<std::pair<std::string, std::uint64_t>, std::size_t> per_macro;
    std::vector<bool> in_bounds(a.entries.size(), false);
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        const auto& e = a.entries[i];
        if (!w.index_of(e.layer_id)) {
            out.push_back(describe(i) + " references unknown layer");
            continue;
        }
        if (e.Ti == 0 || e.To == 0 || e.Tm == 0) {
            out.push_back(describe(i) + " has an empty extent");
            continue;
        }
        if (e.macro >= g.Dh || e.di + e.Ti > g.Di || e.do_ + e.To > g.Do || e.dm + e.Tm > g.Dm) {
            out.push_back(describe(i) + " is out of bounds");
        } else {
            in_bounds[i] = true;
        }
        if (e.weights == 0 || e.weights > e.Ti * e.To * e.Tm)
            out.push_back(describe(i) + " stores more weights than its extent");
        covered[e.layer_id] += e.weights;
        ++count[e.layer_id];
        ++per_macro[{e.layer_id, e.macro}];
    }

    if (a.strategy != Strategy::flattened) {
        for (const auto& [key, n] : per_macro)
            if (n > 1)
                out.push_back("layer " + key.first + " has " + std::to_string(n) + " tiles in macro " +
                              std::to_string(key.second));
        for (const auto& m : a.layers) {
            if (count[m.layer_id] != m.Th)
                out.push_back("layer " + m.layer_id + " has " + std::to_string(count[m.layer_id]) +
                              " entries, expected Th = " + std::to_string(m.Th));
        }
    }
    for (const auto& l : w.layers) {
        if (covered[l.id] != l.weight_volume())
            out.push_back("layer " + l.id + " covers " + std::to_string(covered[l.id]) + " of " +
                          std::to_string(l.weight_volume()) + " weights");
    }

    // Occupancy raster, one macro at a time.
    const std::uint64_t cells = g.Di * g.Do * g.Dm;
    std::set<std::pair<std::size_t, std::size_t>> collisions;
    std::vector<std::uint32_t> grid;
    for (std::uint64_t m = 0; m < g.Dh; ++m) {
        grid.assign(cells, 0);
        for (std::size_t i = 0; i < a.entries.size(); ++i) {
            const auto& e = a.entries[i];
            if (!in_bounds[i] || e.macro != m) continue;
            for (auto z = e.dm; z < e.dm + e.Tm; ++z)
                for (auto x = e.di; x < e.di + e.Ti; ++x)
                    for (auto y = e.do_; y < e.do_ + e.To; ++y) {
                        auto& c = grid[(z * g.Di + x) * g.Do + y];
                        if (c != 0) collisions.insert({c - 1, i});
                        c = static_cast<std::uint32_t>(i + 1);
                    }
        }
    }
    for (auto [a_idx, b_idx] : collisions) out.push_back(describe(a_idx) + " overlaps " + describe(b_idx));
    return out;
}

}  // namespace imcpack
