#pragma once

#include <span>
#include <string>

#include "oscres/params.hpp"

namespace oscres {

// Scalar oscillator fields addressable from config files and sweep axes.
// Names carry the unit used on the file side; to_si converts file values to
// the SI values stored in OscillatorParams.
struct OscillatorFieldDef {
    const char* name;
    double to_si;
    double OscillatorParams::* member;
};

std::span<const OscillatorFieldDef> oscillator_fields();

// Dotted path to one scalar inside a NetworkConfig:
//   oscillators.<k>.<field>   e.g. oscillators.0.supply_current_uA
//   coupling_V.<i>.<j>        threshold-reduction entry in volts
struct ParamPath {
    enum class Kind { oscillator_field, coupling_entry };

    Kind kind = Kind::oscillator_field;
    std::size_t index_a = 0;
    std::size_t index_b = 0;  // coupling column; unused for oscillator fields
    const OscillatorFieldDef* field = nullptr;
    std::string text;

    // Parses and bounds-checks against the given config. Throws ConfigError.
    static ParamPath parse(const std::string& path, const NetworkConfig& config);

    // value is in the path's file units (e.g. uA for supply_current_uA).
    void apply(NetworkConfig& config, double value) const;

    bool is_supply_current() const;
};

} // namespace oscres
