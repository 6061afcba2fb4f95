#include "oscres/param_path.hpp"

#include <array>
#include <charconv>
#include <cstring>
#include <vector>

#include "oscres/errors.hpp"

namespace oscres {

namespace {

constexpr std::array<OscillatorFieldDef, 7> kOscillatorFields{{
    {"capacitance_nF", 1e-9, &OscillatorParams::capacitance},
    {"supply_current_uA", 1e-6, &OscillatorParams::supply_current},
    {"threshold_voltage_V", 1.0, &OscillatorParams::threshold_voltage},
    {"hold_voltage_V", 1.0, &OscillatorParams::hold_voltage},
    {"on_resistance_ohm", 1.0, &OscillatorParams::on_resistance},
    {"noise_sigma_mV", 1e-3, &OscillatorParams::noise_sigma},
    {"initial_voltage_V", 1.0, &OscillatorParams::initial_voltage},
}};

std::vector<std::string> split_dots(const std::string& s) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t dot = s.find('.', start);
        if (dot == std::string::npos) {
            parts.push_back(s.substr(start));
            break;
        }
        parts.push_back(s.substr(start, dot - start));
        start = dot + 1;
    }
    return parts;
}

std::size_t parse_index(const std::string& token, const std::string& path) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        throw ConfigError("parameter path '" + path + "': '" + token + "' is not an index");
    return value;
}

} // namespace

std::span<const OscillatorFieldDef> oscillator_fields() { return kOscillatorFields; }

ParamPath ParamPath::parse(const std::string& path, const NetworkConfig& config) {
    const auto parts = split_dots(path);
    ParamPath out;
    out.text = path;
    if (parts.size() == 3 && parts[0] == "oscillators") {
        out.kind = Kind::oscillator_field;
        out.index_a = parse_index(parts[1], path);
        if (out.index_a >= config.oscillators.size())
            throw ConfigError("parameter path '" + path + "': oscillator index out of range");
        for (const auto& def : kOscillatorFields)
            if (parts[2] == def.name) {
                out.field = &def;
                return out;
            }
        throw ConfigError("parameter path '" + path + "': unknown field '" + parts[2] + "'");
    }
    if (parts.size() == 3 && parts[0] == "coupling_V") {
        out.kind = Kind::coupling_entry;
        out.index_a = parse_index(parts[1], path);
        out.index_b = parse_index(parts[2], path);
        if (out.index_a >= config.coupling.n || out.index_b >= config.coupling.n)
            throw ConfigError("parameter path '" + path + "': coupling index out of range");
        if (out.index_a == out.index_b)
            throw ConfigError("parameter path '" + path + "': coupling diagonal is fixed at 0");
        return out;
    }
    throw ConfigError("parameter path '" + path +
                      "': expected oscillators.<k>.<field> or coupling_V.<i>.<j>");
}

void ParamPath::apply(NetworkConfig& config, double value) const {
    if (kind == Kind::oscillator_field)
        config.oscillators[index_a].*(field->member) = value * field->to_si;
    else
        config.coupling.at(index_a, index_b) = value;
}

bool ParamPath::is_supply_current() const {
    return kind == Kind::oscillator_field && field != nullptr &&
           std::strcmp(field->name, "supply_current_uA") == 0;
}

} // namespace oscres
