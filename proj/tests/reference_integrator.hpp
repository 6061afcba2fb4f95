#pragma once

#include <cstddef>
#include <vector>

#include "oscres/params.hpp"

// Fixed-step explicit-Euler reference for a single noiseless oscillator.
// Deliberately naive; exists only to cross-check the event-driven solver's
// closed forms. Global error is O(dt / tau), so dt = 1 ns gives ~1e-5
// relative accuracy on the default time constants.
inline std::vector<double> reference_spike_times(const oscres::OscillatorParams& p,
                                                 std::size_t n_spikes, double dt) {
    std::vector<double> spikes;
    spikes.reserve(n_spikes);
    double v = p.initial_voltage;
    double t = 0.0;
    bool on = false;
    while (spikes.size() < n_spikes) {
        if (!on) {
            v += dt * p.supply_current / p.capacitance;
            t += dt;
            if (v >= p.threshold_voltage) {
                spikes.push_back(t);
                on = true;
            }
        } else {
            v += dt * (p.supply_current - v / p.on_resistance) / p.capacitance;
            t += dt;
            if (v <= p.hold_voltage) on = false;
        }
    }
    return spikes;
}
