#include "imcpack/workload.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "imcpack/error.hpp"

namespace imcpack {

using nlohmann::json;

std::string_view to_string(Dim d) {
    switch (d) {
        case Dim::K: return "K";
        case Dim::C: return "C";
        case Dim::FX: return "FX";
        case Dim::FY: return "FY";
    }
    return "?";
}

std::optional<Dim> parse_dim(std::string_view s) {
    if (s == "K") return Dim::K;
    if (s == "C") return Dim::C;
    if (s == "FX") return Dim::FX;
    if (s == "FY") return Dim::FY;
    return std::nullopt;
}

std::uint64_t product(std::span<const Lpf> lpfs) {
    std::uint64_t p = 1;
    for (const auto& f : lpfs) p *= f.prime;
    return p;
}

std::uint64_t product(std::span<const Lpf> lpfs, Dim d) {
    std::uint64_t p = 1;
    for (const auto& f : lpfs)
        if (f.dim == d) p *= f.prime;
    return p;
}

std::string format_lpfs(std::span<const Lpf> lpfs) {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < lpfs.size(); ++i) {
        if (i) os << ',';
        os << '(' << to_string(lpfs[i].dim) << ',' << lpfs[i].prime << ')';
    }
    os << '}';
    return os.str();
}

std::uint64_t Layer::dim(Dim d) const {
    switch (d) {
        case Dim::K: return K;
        case Dim::C: return C;
        case Dim::FX: return FX;
        case Dim::FY: return FY;
    }
    return 1;
}

std::uint64_t Workload::total_weight_volume() const {
    std::uint64_t v = 0;
    for (const auto& l : layers) v += l.weight_volume();
    return v;
}

std::uint64_t Workload::total_weight_bits() const {
    std::uint64_t v = 0;
    for (const auto& l : layers) v += l.weight_storage_bits();
    return v;
}

std::optional<std::size_t> Workload::index_of(std::string_view layer_id) const {
    for (std::size_t i = 0; i < layers.size(); ++i)
        if (layers[i].id == layer_id) return i;
    return std::nullopt;
}

void validate(const Layer& layer) {
    auto check = [&](const char* field, std::uint64_t v) {
        if (v == 0)
            throw ValidationError("layer '" + layer.id + "': " + field + " must be >= 1");
    };
    if (layer.id.empty()) throw ValidationError("layer id must be non-empty");
    check("K", layer.K);
    check("C", layer.C);
    check("FX", layer.FX);
    check("FY", layer.FY);
    check("OX", layer.OX);
    check("OY", layer.OY);
    check("weight_bits", layer.weight_bits);
    check("act_bits", layer.act_bits);
}

void validate(const Workload& workload) {
    if (workload.layers.empty())
        throw ValidationError("workload '" + workload.name + "' has no layers");
    std::set<std::string> seen;
    for (const auto& l : workload.layers) {
        validate(l);
        if (!seen.insert(l.id).second)
            throw ValidationError("duplicate layer id '" + l.id + "'");
    }
}

namespace {

std::uint64_t positive_field(const json& obj, const char* field, const std::string& where) {
    auto it = obj.find(field);
    if (it == obj.end()) throw ParseError(where + ": missing field '" + field + "'");
    if (!it->is_number_integer())
        throw ParseError(where + ": field '" + field + "' must be an integer");
    auto v = it->get<std::int64_t>();
    if (v <= 0)
        throw ValidationError(where + ": field '" + field + "' must be >= 1, got " +
                              std::to_string(v));
    return static_cast<std::uint64_t>(v);
}

}  // namespace

Workload parse_workload(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("workload: malformed document: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("workload: top level must be an object");

    Workload w;
    auto name = doc.find("name");
    if (name == doc.end() || !name->is_string()) throw ParseError("workload: missing string field 'name'");
    w.name = name->get<std::string>();

    auto layers = doc.find("layers");
    if (layers == doc.end() || !layers->is_array()) throw ParseError("workload: missing array field 'layers'");

    std::size_t index = 0;
    for (const auto& entry : *layers) {
        std::string where = "layer #" + std::to_string(index);
        if (!entry.is_object()) throw ParseError(where + ": must be an object");
        auto id = entry.find("id");
        if (id == entry.end() || !id->is_string()) throw ParseError(where + ": missing string field 'id'");
        Layer l;
        l.id = id->get<std::string>();
        where = "layer '" + l.id + "'";
        l.K = positive_field(entry, "K", where);
        l.C = positive_field(entry, "C", where);
        l.FX = positive_field(entry, "FX", where);
        l.FY = positive_field(entry, "FY", where);
        l.OX = positive_field(entry, "OX", where);
        l.OY = positive_field(entry, "OY", where);
        l.weight_bits = static_cast<unsigned>(positive_field(entry, "weight_bits", where));
        l.act_bits = static_cast<unsigned>(positive_field(entry, "act_bits", where));
        w.layers.push_back(std::move(l));
        ++index;
    }
    validate(w);
    return w;
}

Workload load_workload(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open workload file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_workload(ss.str());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

std::string serialize_workload(const Workload& workload) {
    nlohmann::ordered_json doc;
    doc["name"] = workload.name;
    doc["layers"] = nlohmann::ordered_json::array();
    for (const auto& l : workload.layers) {
        nlohmann::ordered_json j;
        j["id"] = l.id;
        j["K"] = l.K;
        j["C"] = l.C;
        j["FX"] = l.FX;
        j["FY"] = l.FY;
        j["OX"] = l.OX;
        j["OY"] = l.OY;
        j["weight_bits"] = l.weight_bits;
        j["act_bits"] = l.act_bits;
        doc["layers"].push_back(std::move(j));
    }
    return doc.dump(2) + "\n";
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        while (n % p == 0) {
            out.push_back(p);
            n /= p;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

LpfSet lpf_decompose(const Layer& layer) {
    LpfSet out;
    for (Dim d : {Dim::K, Dim::C, Dim::FX, Dim::FY})
        for (auto p : prime_factors(layer.dim(d))) out.push_back({d, p});
    return out;
}

}  // namespace imcpack
