#include "posers/design_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "posers/error.hpp"

namespace posers {

using nlohmann::ordered_json;

std::string encode_design(const Design& design) {
    ordered_json j;
    j["version"] = kDesignFormatVersion;
    j["id"] = design.id;
    j["L"] = design.length;
    j["rules"] = ordered_json::array();
    for (const auto& rule : design.rules)
        j["rules"].push_back({{"position", rule.position}, {"allowed", std::string(1, iupac_code_of(rule.allowed))}});
    j["flank5"] = design.flank5;
    j["flank3"] = design.flank3;
    if (design.ratios) j["ratios"] = *design.ratios;
    j["seed"] = design.seed;
    return j.dump(2) + "\n";
}

namespace {

const ordered_json& field(const ordered_json& obj, const char* name, const std::string& where) {
    auto it = obj.find(name);
    if (it == obj.end()) throw ParseError("design file: missing field '" + where + name + "'");
    return *it;
}

template <typename T>
T get_as(const ordered_json& value, const std::string& name) {
    try {
        return value.get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("design file: field '" + name + "' has the wrong type (" + e.what() + ")");
    }
}

}  // namespace

Design decode_design(std::string_view text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("design file: malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    if (!j.is_object()) throw ParseError("design file: top level must be an object");

    const auto version = get_as<int>(field(j, "version", ""), "version");
    if (version != kDesignFormatVersion)
        throw VersionError("design file: unsupported version " + std::to_string(version) + " (expected " +
                           std::to_string(kDesignFormatVersion) + ")");

    Design d;
    d.id = get_as<std::string>(field(j, "id", ""), "id");
    d.length = get_as<std::size_t>(field(j, "L", ""), "L");
    const auto& rules = field(j, "rules", "");
    if (!rules.is_array()) throw ParseError("design file: field 'rules' must be an array");
    for (std::size_t i = 0; i < rules.size(); ++i) {
        const std::string where = "rules[" + std::to_string(i) + "].";
        const auto pos = get_as<std::size_t>(field(rules[i], "position", where), where + "position");
        const auto code = get_as<std::string>(field(rules[i], "allowed", where), where + "allowed");
        if (code.size() != 1) throw ParseError("design file: field '" + where + "allowed' must be one IUPAC code");
        try {
            d.rules.push_back({pos, allowed_set_of(code[0])});
        } catch (const InvalidCodeError& e) {
            throw ParseError("design file: field '" + where + "allowed': " + e.what());
        }
    }
    d.flank5 = get_as<std::string>(field(j, "flank5", ""), "flank5");
    d.flank3 = get_as<std::string>(field(j, "flank3", ""), "flank3");
    if (auto it = j.find("ratios"); it != j.end() && !it->is_null())
        d.ratios = get_as<std::vector<double>>(*it, "ratios");
    d.seed = get_as<std::uint64_t>(field(j, "seed", ""), "seed");
    require_valid(d);
    return d;
}

Design load_design(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open design file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return decode_design(buf.str());
}

void save_design(const std::filesystem::path& path, const Design& design) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write design file " + path.string());
    out << encode_design(design);
    if (!out) throw Error("write failed: " + path.string());
}

}  // namespace posers
