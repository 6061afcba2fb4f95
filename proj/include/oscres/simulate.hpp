#pragma once

#include <cstdint>
#include <vector>

#include "oscres/params.hpp"
#include "oscres/rng.hpp"

namespace oscres {

// Steady-state charge ramp duration, U_h -> U_th under constant current.
double steady_charge_time(const OscillatorParams& p);

// Discharge duration from v_start down to U_h through R_on; the capacitor
// voltage decays exponentially toward the asymptote I_p * R_on.
double discharge_time_from(const OscillatorParams& p, double v_start);

// Nominal discharge duration (switch-on at exactly U_th).
double discharge_time(const OscillatorParams& p);

// Free-running spike frequency, noise ignored:
// 1 / (steady_charge_time + discharge_time).
double own_frequency(const OscillatorParams& p);

// U_th - coupling_reduction - drive_reduction + jitter. Pure helper; the
// engine applies it with its bookkeeping of on-switches and active pulses.
inline double effective_threshold_value(const OscillatorParams& p,
                                        double coupling_reduction,
                                        double drive_reduction,
                                        double jitter) {
    return p.threshold_voltage - coupling_reduction - drive_reduction + jitter;
}

struct SimBudget {
    double max_sim_seconds = 0.0;   // <= 0: derived from the config
    std::uint64_t max_events = 0;   // 0: derived from the config
};

// Event-driven integrator. Phases have closed-form solutions (linear charge
// ramp, exponential discharge), so event times are solved exactly rather
// than stepped. Threshold crossings are re-solved from the phase anchor
// whenever a neighbor or drive changes the effective threshold mid-charge.
//
// Event ordering at one timestamp: drive pulse edges first (ends before
// starts, then by drive order), then oscillator events in ascending index;
// cascaded same-time fires are picked up in ascending index on repeated
// passes. All ties are exact floating-point equality, which makes runs
// bit-reproducible for a fixed config.
class Simulation {
public:
    Simulation(NetworkConfig config, std::size_t warmup_spikes,
               std::size_t record_spikes, SimBudget budget = {});

    // Run until every oscillator has recorded record_spikes spikes past its
    // own warmup count. Each returned train holds exactly record_spikes
    // entries. Throws SimulationError if the budget trips first.
    std::vector<SpikeTrain> run();

    // Process all events with time <= t, then hold the clock at t.
    void advance_until(double t);

    double time() const { return now_; }
    bool switch_on(std::size_t i) const { return osc_[i].on; }
    double capacitor_voltage(std::size_t i) const;

    // Current effective threshold of oscillator j, including the jitter
    // sampled for its present charging cycle.
    double effective_threshold(std::size_t j) const;

    const NetworkConfig& config() const { return config_; }

private:
    struct OscState {
        bool on = false;
        double t0 = 0.0;        // phase start time
        double v0 = 0.0;        // phase start voltage
        double jitter = 0.0;    // threshold jitter for the current charging cycle
        double next_time = 0.0; // next self event: fire (charging) or off (discharging)
        std::uint64_t fired = 0;
        SplitMix64 rng;

        explicit OscState(std::uint64_t seed) : rng(seed) {}
    };

    struct DriveEdge {
        double time;
        std::size_t drive;
        bool is_end;
    };

    double coupling_reduction(std::size_t j) const;
    double drive_reduction(std::size_t j) const;
    void refresh_fire_time(std::size_t i);
    void process_fire(std::size_t i, double t);
    void process_off(std::size_t i, double t);
    bool step_one_batch(double t_stop);  // returns false when no event <= t_stop
    bool all_recorded() const;
    [[noreturn]] void throw_stalled() const;

    NetworkConfig config_;
    std::size_t warmup_ = 0;
    std::size_t record_ = 0;
    double now_ = 0.0;
    double t_limit_ = 0.0;
    std::uint64_t max_events_ = 0;
    std::uint64_t events_ = 0;
    std::vector<OscState> osc_;
    std::vector<SpikeTrain> trains_;
    std::vector<DriveEdge> drive_edges_;
    std::size_t drive_cursor_ = 0;
    std::vector<std::uint32_t> active_pulses_;  // per drive
};

// One-shot convenience wrapper around Simulation::run().
std::vector<SpikeTrain> simulate(const NetworkConfig& config,
                                 std::size_t warmup_spikes,
                                 std::size_t record_spikes,
                                 SimBudget budget = {});

} // namespace oscres
