#include "oscres/params.hpp"

#include <string>

#include "oscres/errors.hpp"

namespace oscres {

namespace {

[[noreturn]] void reject(const std::string& what) {
    throw ConfigError("invalid parameters: " + what);
}

} // namespace

void validate(const OscillatorParams& p) {
    if (!(p.capacitance > 0.0)) reject("capacitance must be > 0");
    if (!(p.supply_current > 0.0)) reject("supply_current must be > 0");
    if (!(p.on_resistance > 0.0)) reject("on_resistance must be > 0");
    if (!(p.noise_sigma >= 0.0)) reject("noise_sigma must be >= 0");
    if (!(p.threshold_voltage > p.hold_voltage))
        reject("threshold_voltage must exceed hold_voltage");
    if (!(p.hold_voltage > p.supply_current * p.on_resistance))
        reject("hold_voltage must exceed I_p * R_on (" +
               std::to_string(p.supply_current * p.on_resistance) +
               " V), otherwise the switch never turns off");
    if (!(p.initial_voltage >= 0.0) || !(p.initial_voltage < p.threshold_voltage))
        reject("initial_voltage must lie in [0, threshold_voltage)");
}

void validate(const NetworkConfig& config) {
    const std::size_t n = config.oscillators.size();
    if (n == 0) reject("at least one oscillator is required");
    for (const auto& p : config.oscillators) validate(p);

    if (config.coupling.n != n) reject("coupling matrix size must equal oscillator count");
    if (config.coupling.delta.size() != n * n) reject("coupling matrix storage is malformed");
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double d = config.coupling.at(i, j);
            if (i == j && d != 0.0) reject("coupling diagonal must be zero");
            if (d < 0.0) reject("coupling entries must be >= 0");
        }
    }

    for (std::size_t k = 0; k < config.drives.size(); ++k) {
        const auto& drive = config.drives[k];
        if (!(drive.pulse_width > 0.0))
            reject("drive " + std::to_string(k) + ": pulse_width must be > 0");
        if (drive.delta_ext.size() != n)
            reject("drive " + std::to_string(k) + ": delta_ext needs one entry per oscillator");
        for (double d : drive.delta_ext)
            if (d < 0.0) reject("drive " + std::to_string(k) + ": delta_ext must be >= 0");
        for (std::size_t s = 1; s < drive.spike_times.size(); ++s)
            if (!(drive.spike_times[s] > drive.spike_times[s - 1]))
                reject("drive " + std::to_string(k) + ": spike times must be strictly increasing");
    }

    // Worst case: every neighbor on, every drive pulsing, jitter at -4 sigma.
    // The effective threshold must still sit above the hold voltage or the
    // oscillator could re-fire the instant its switch opens.
    for (std::size_t j = 0; j < n; ++j) {
        double reduction = 0.0;
        for (std::size_t i = 0; i < n; ++i) reduction += config.coupling.at(i, j);
        for (const auto& drive : config.drives) reduction += drive.delta_ext[j];
        const auto& p = config.oscillators[j];
        if (!(p.threshold_voltage - reduction - 4.0 * p.noise_sigma > p.hold_voltage))
            reject("oscillator " + std::to_string(j) +
                   ": worst-case effective threshold drops to or below the hold voltage");
    }
}

} // namespace oscres
