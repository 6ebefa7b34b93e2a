#include "imcpack/architecture.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "imcpack/error.hpp"

namespace imcpack {

using nlohmann::json;

std::string_view to_string(ImcKind kind) {
    return kind == ImcKind::digital ? "digital" : "analog";
}

void validate(const ImcArchitecture& a) {
    auto check = [&](const char* field, std::uint64_t v) {
        if (v == 0) throw ValidationError("architecture '" + a.name + "': " + field + " must be >= 1");
    };
    check("Di", a.Di);
    check("Do", a.Do);
    check("Dh", a.Dh);
    check("Dm", a.Dm);
    check("weight_bits", a.weight_bits);
    check("input_bits", a.input_bits);
    if (!(a.clock_hz > 0.0)) throw ValidationError("architecture '" + a.name + "': clock_hz must be > 0");
    if (!(a.voltage_v > 0.0)) throw ValidationError("architecture '" + a.name + "': voltage_v must be > 0");
}

void validate(const CostParams& c) {
    auto check = [](const char* field, double v) {
        if (!(v >= 0.0)) throw ValidationError(std::string("cost parameter ") + field + " must be >= 0");
    };
    check("e_mac_J", c.e_mac_J);
    check("e_adc_J", c.e_adc_J);
    check("e_periph_J", c.e_periph_J);
    check("e_buf_J_per_bit", c.e_buf_J_per_bit);
    check("e_dram_J_per_bit", c.e_dram_J_per_bit);
    check("cell_area_um2", c.cell_area_um2);
    check("periph_area_um2", c.periph_area_um2);
    check("n_nd2_per_mac", c.n_nd2_per_mac);
    check("nd2_cap_F", c.nd2_cap_F);
    if (!(c.dram_bw_bits_per_s > 0.0)) throw ValidationError("cost parameter dram_bw_bits_per_s must be > 0");
}

double digital_mac_energy(double n_nd2_per_mac, double nd2_cap_F, double voltage_v,
                          unsigned weight_bits, unsigned input_bits) {
    return n_nd2_per_mac * nd2_cap_F * voltage_v * voltage_v /
           (static_cast<double>(weight_bits) * static_cast<double>(input_bits));
}

namespace {

struct DramPreset {
    double e_J_per_bit;
    double bw_bits_per_s;
};

struct BufferPreset {
    double e_J_per_bit;
    std::uint64_t bytes;
};

DramPreset dram_preset(std::string_view name) {
    if (name == "lpddr4") return {4e-12, 12.8e9};
    throw ParseError("unknown DRAM preset '" + std::string(name) + "'");
}

BufferPreset buffer_preset(std::string_view name) {
    if (name == "sram256k") return {0.009e-12, 256 * 1024};
    throw ParseError("unknown buffer preset '" + std::string(name) + "'");
}

void apply_memory(ArchConfig& c) {
    auto d = dram_preset(c.dram);
    c.cost.e_dram_J_per_bit = d.e_J_per_bit;
    c.cost.dram_bw_bits_per_s = d.bw_bits_per_s;
    auto b = buffer_preset(c.buffer);
    c.cost.e_buf_J_per_bit = b.e_J_per_bit;
    c.cost.buf_bytes = b.bytes;
}

ImcKind parse_kind(const std::string& s) {
    if (s == "digital") return ImcKind::digital;
    if (s == "analog") return ImcKind::analog;
    throw ParseError("architecture: unknown imc_kind '" + s + "'");
}

}  // namespace

ArchConfig bundled_architecture(std::string_view name) {
    ArchConfig c;
    c.baseline = std::string(name);
    auto& a = c.arch;
    a.name = std::string(name);
    a.Do = 256;
    a.Di = 16;
    a.Dh = 1;
    a.Dm = 1;
    a.weight_bits = 4;
    a.input_bits = 4;
    a.clock_hz = 200e6;
    a.voltage_v = 0.9;
    if (name == "dimc22") {
        a.kind = ImcKind::digital;
        a.reported_macro_area_mm2 = 0.202;
        c.cost.cell_area_um2 = 0.379;
        c.cost.periph_area_um2 = 44290.0;
        c.cost.n_nd2_per_mac = 50.0;
        c.cost.nd2_cap_F = 0.3e-15;
        c.cost.e_mac_J = digital_mac_energy(c.cost.n_nd2_per_mac, c.cost.nd2_cap_F, a.voltage_v,
                                            a.weight_bits, a.input_bits);
        c.cost.e_adc_J = 0.0;
        c.cost.e_periph_J = 5e-12;
    } else if (name == "aimc28") {
        a.kind = ImcKind::analog;
        a.reported_macro_area_mm2 = 0.035;
        c.cost.cell_area_um2 = 1.2;
        c.cost.periph_area_um2 = 15400.0;
        c.cost.e_mac_J = 0.0;
        c.cost.e_adc_J = 190e-15;
        c.cost.e_periph_J = 3e-12;
    } else {
        throw Error("unknown bundled architecture '" + std::string(name) + "'");
    }
    apply_memory(c);
    return c;
}

namespace {

template <class T>
std::optional<T> opt_field(const json& obj, const char* field) {
    auto it = obj.find(field);
    if (it == obj.end()) return std::nullopt;
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw ParseError(std::string("architecture: field '") + field + "' has the wrong type");
    }
}

std::uint64_t dim_field(const json& obj, const char* field, std::uint64_t fallback) {
    auto it = obj.find(field);
    if (it == obj.end()) return fallback;
    if (!it->is_number_integer()) throw ParseError(std::string("architecture: field '") + field + "' must be an integer");
    auto v = it->get<std::int64_t>();
    if (v <= 0) throw ValidationError(std::string("architecture: field '") + field + "' must be >= 1");
    return static_cast<std::uint64_t>(v);
}

}  // namespace

ArchConfig load_architecture(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("architecture: malformed document: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("architecture: top level must be an object");

    auto kind_name = opt_field<std::string>(doc, "imc_kind");
    std::optional<ImcKind> kind;
    if (kind_name) kind = parse_kind(*kind_name);

    std::string baseline = opt_field<std::string>(doc, "baseline").value_or(
        kind.value_or(ImcKind::digital) == ImcKind::analog ? "aimc28" : "dimc22");
    ArchConfig c;
    try {
        c = bundled_architecture(baseline);
    } catch (const Error&) {
        throw ParseError("architecture: unknown baseline '" + baseline + "'");
    }

    auto& a = c.arch;
    a.name = opt_field<std::string>(doc, "name").value_or(baseline);
    a.Di = dim_field(doc, "Di", a.Di);
    a.Do = dim_field(doc, "Do", a.Do);
    a.Dh = dim_field(doc, "Dh", a.Dh);
    a.Dm = dim_field(doc, "Dm", a.Dm);
    a.weight_bits = static_cast<unsigned>(dim_field(doc, "weight_bits", a.weight_bits));
    a.input_bits = static_cast<unsigned>(dim_field(doc, "input_bits", a.input_bits));
    a.clock_hz = opt_field<double>(doc, "clock_hz").value_or(a.clock_hz);
    a.voltage_v = opt_field<double>(doc, "voltage_v").value_or(a.voltage_v);
    if (kind) a.kind = *kind;
    if (auto r = opt_field<double>(doc, "reported_macro_area_mm2")) a.reported_macro_area_mm2 = r;

    if (auto mem = doc.find("memory"); mem != doc.end()) {
        if (!mem->is_object()) throw ParseError("architecture: 'memory' must be an object");
        c.dram = opt_field<std::string>(*mem, "dram").value_or(c.dram);
        c.buffer = opt_field<std::string>(*mem, "buffer").value_or(c.buffer);
    }
    apply_memory(c);

    bool explicit_e_mac = false;
    if (auto costs = doc.find("costs"); costs != doc.end()) {
        if (!costs->is_object()) throw ParseError("architecture: 'costs' must be an object");
        auto& k = c.cost;
        auto take = [&](const char* f, double& dst) {
            if (auto v = opt_field<double>(*costs, f)) dst = *v;
        };
        explicit_e_mac = costs->contains("e_mac_J");
        take("e_mac_J", k.e_mac_J);
        take("e_adc_J", k.e_adc_J);
        take("e_periph_J", k.e_periph_J);
        take("e_buf_J_per_bit", k.e_buf_J_per_bit);
        take("e_dram_J_per_bit", k.e_dram_J_per_bit);
        take("dram_bw_bits_per_s", k.dram_bw_bits_per_s);
        take("cell_area_um2", k.cell_area_um2);
        take("periph_area_um2", k.periph_area_um2);
        take("n_nd2_per_mac", k.n_nd2_per_mac);
        take("nd2_cap_F", k.nd2_cap_F);
        if (auto b = opt_field<std::uint64_t>(*costs, "buf_bytes")) k.buf_bytes = *b;
    }
    if (!explicit_e_mac) {
        c.cost.e_mac_J = a.kind == ImcKind::digital
                             ? digital_mac_energy(c.cost.n_nd2_per_mac, c.cost.nd2_cap_F, a.voltage_v,
                                                  a.weight_bits, a.input_bits)
                             : 0.0;
    }

    validate(a);
    validate(c.cost);
    return c;
}

ArchConfig load_architecture_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open architecture file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return load_architecture(ss.str());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

std::string serialize_architecture(const ArchConfig& c) {
    const auto& a = c.arch;
    nlohmann::ordered_json doc;
    doc["name"] = a.name;
    doc["baseline"] = c.baseline;
    doc["Di"] = a.Di;
    doc["Do"] = a.Do;
    doc["Dh"] = a.Dh;
    doc["Dm"] = a.Dm;
    doc["weight_bits"] = a.weight_bits;
    doc["input_bits"] = a.input_bits;
    doc["clock_hz"] = a.clock_hz;
    doc["voltage_v"] = a.voltage_v;
    doc["imc_kind"] = std::string(to_string(a.kind));
    if (a.reported_macro_area_mm2) doc["reported_macro_area_mm2"] = *a.reported_macro_area_mm2;
    doc["memory"] = {{"dram", c.dram}, {"buffer", c.buffer}};
    const auto& k = c.cost;
    nlohmann::ordered_json costs;
    costs["e_mac_J"] = k.e_mac_J;
    costs["e_adc_J"] = k.e_adc_J;
    costs["e_periph_J"] = k.e_periph_J;
    costs["e_buf_J_per_bit"] = k.e_buf_J_per_bit;
    costs["e_dram_J_per_bit"] = k.e_dram_J_per_bit;
    costs["dram_bw_bits_per_s"] = k.dram_bw_bits_per_s;
    costs["cell_area_um2"] = k.cell_area_um2;
    costs["periph_area_um2"] = k.periph_area_um2;
    costs["buf_bytes"] = k.buf_bytes;
    costs["n_nd2_per_mac"] = k.n_nd2_per_mac;
    costs["nd2_cap_F"] = k.nd2_cap_F;
    doc["costs"] = std::move(costs);
    return doc.dump(2) + "\n";
}

AreaReport compute_area(const ImcArchitecture& a, const CostParams& c) {
    const double cells = static_cast<double>(a.Di) * static_cast<double>(a.Do) *
                         static_cast<double>(a.Dm) * static_cast<double>(a.weight_bits);
    AreaReport r;
    const double macro_um2 = c.periph_area_um2 + c.cell_area_um2 * cells;
    r.macro_area_mm2 = macro_um2 * 1e-6;
    r.total_imc_area_mm2 = static_cast<double>(a.Dh) * r.macro_area_mm2;
    r.density_bits_per_mm2 = cells * static_cast<double>(a.Dh) / r.total_imc_area_mm2;
    return r;
}

}  // namespace imcpack
