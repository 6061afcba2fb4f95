#include "oscres/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "oscres/errors.hpp"

namespace oscres {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double steady_charge_time(const OscillatorParams& p) {
    return p.capacitance * (p.threshold_voltage - p.hold_voltage) / p.supply_current;
}

double discharge_time_from(const OscillatorParams& p, double v_start) {
    const double asymptote = p.supply_current * p.on_resistance;
    return p.on_resistance * p.capacitance *
           std::log((v_start - asymptote) / (p.hold_voltage - asymptote));
}

double discharge_time(const OscillatorParams& p) {
    return discharge_time_from(p, p.threshold_voltage);
}

double own_frequency(const OscillatorParams& p) {
    validate(p);
    return 1.0 / (steady_charge_time(p) + discharge_time(p));
}

Simulation::Simulation(NetworkConfig config, std::size_t warmup_spikes,
                       std::size_t record_spikes, SimBudget budget)
    : config_(std::move(config)), warmup_(warmup_spikes), record_(record_spikes) {
    validate(config_);
    const std::size_t n = config_.oscillators.size();

    osc_.reserve(n);
    trains_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        // Independent stream per oscillator so that uncoupled network runs
        // reproduce isolated single-oscillator runs draw for draw.
        osc_.emplace_back(derive_stream(config_.seed, i));
        auto& s = osc_[i];
        const auto& p = config_.oscillators[i];
        s.v0 = p.initial_voltage;
        s.jitter = s.rng.next_truncated_normal(p.noise_sigma);
        trains_[i].oscillator_index = i;
        trains_[i].times.reserve(record_);
    }

    for (std::size_t d = 0; d < config_.drives.size(); ++d) {
        const auto& drive = config_.drives[d];
        for (double t : drive.spike_times) {
            drive_edges_.push_back({t, d, false});
            drive_edges_.push_back({t + drive.pulse_width, d, true});
        }
    }
    std::sort(drive_edges_.begin(), drive_edges_.end(),
              [](const DriveEdge& a, const DriveEdge& b) {
                  if (a.time != b.time) return a.time < b.time;
                  if (a.is_end != b.is_end) return a.is_end;  // ends first
                  return a.drive < b.drive;
              });
    active_pulses_.assign(config_.drives.size(), 0);

    // Budget defaults: a generous multiple of the worst-case cycle length.
    double slowest = 0.0;
    for (const auto& p : config_.oscillators) {
        const double v_top = p.threshold_voltage + 4.0 * p.noise_sigma;
        const double cycle = p.capacitance * (v_top - p.hold_voltage) / p.supply_current +
                             discharge_time_from(p, v_top);
        slowest = std::max(slowest, cycle);
    }
    const double want = static_cast<double>(warmup_ + record_ + 2) * slowest;
    t_limit_ = budget.max_sim_seconds > 0.0 ? budget.max_sim_seconds : 20.0 * want;
    const std::uint64_t n_cycles = static_cast<std::uint64_t>(warmup_ + record_ + 2);
    max_events_ = budget.max_events ? budget.max_events
                                    : std::max<std::uint64_t>(1'000'000, 200 * n * n_cycles) +
                                          2 * drive_edges_.size();

    for (std::size_t i = 0; i < n; ++i) refresh_fire_time(i);
}

double Simulation::coupling_reduction(std::size_t j) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < osc_.size(); ++i)
        if (osc_[i].on) sum += config_.coupling.at(i, j);
    return sum;
}

double Simulation::drive_reduction(std::size_t j) const {
    double sum = 0.0;
    for (std::size_t d = 0; d < config_.drives.size(); ++d)
        if (active_pulses_[d] > 0)
            sum += static_cast<double>(active_pulses_[d]) * config_.drives[d].delta_ext[j];
    return sum;
}

double Simulation::effective_threshold(std::size_t j) const {
    return effective_threshold_value(config_.oscillators[j], coupling_reduction(j),
                                     drive_reduction(j), osc_[j].jitter);
}

double Simulation::capacitor_voltage(std::size_t i) const {
    const auto& s = osc_[i];
    const auto& p = config_.oscillators[i];
    if (!s.on) return s.v0 + p.supply_current / p.capacitance * (now_ - s.t0);
    const double asymptote = p.supply_current * p.on_resistance;
    return asymptote + (s.v0 - asymptote) *
                           std::exp(-(now_ - s.t0) / (p.on_resistance * p.capacitance));
}

// Solve the charge ramp against the current effective threshold. The ramp
// anchor (t0, v0) is fixed for the whole charging phase, so recomputing
// after a threshold change is exact and independent of how many changes
// happened before.
void Simulation::refresh_fire_time(std::size_t i) {
    auto& s = osc_[i];
    if (s.on) return;
    const auto& p = config_.oscillators[i];
    const double eff = effective_threshold(i);
    if (eff <= s.v0) {
        s.next_time = std::max(s.t0, now_);
        return;
    }
    const double t_cross = s.t0 + (eff - s.v0) * p.capacitance / p.supply_current;
    s.next_time = std::max(t_cross, now_);
}

void Simulation::process_fire(std::size_t i, double t) {
    auto& s = osc_[i];
    const auto& p = config_.oscillators[i];
    const double eff = effective_threshold(i);
    const double v_ramp = s.v0 + p.supply_current / p.capacitance * (t - s.t0);
    const double v_fire = std::max(v_ramp, eff);

    s.fired += 1;
    if (s.fired > warmup_ && trains_[i].times.size() < record_)
        trains_[i].times.push_back(t);

    s.on = true;
    s.t0 = t;
    s.v0 = v_fire;
    s.next_time = t + discharge_time_from(p, v_fire);
}

void Simulation::process_off(std::size_t i, double t) {
    auto& s = osc_[i];
    s.on = false;
    s.t0 = t;
    s.v0 = config_.oscillators[i].hold_voltage;
    s.jitter = s.rng.next_truncated_normal(config_.oscillators[i].noise_sigma);
    s.next_time = kInf;  // refreshed by the caller
}

bool Simulation::all_recorded() const {
    for (const auto& t : trains_)
        if (t.times.size() < record_) return false;
    return true;
}

void Simulation::throw_stalled() const {
    std::string detail = "stalled network: no progress within budget (t=" +
                         std::to_string(now_) + " s, limit=" + std::to_string(t_limit_) +
                         " s, events=" + std::to_string(events_) + "); spike counts:";
    for (const auto& s : osc_) detail += " " + std::to_string(s.fired);
    detail += "; check supply currents against the effective thresholds";
    throw SimulationError(detail);
}

// Process the earliest event batch, if it occurs at or before t_stop.
bool Simulation::step_one_batch(double t_stop) {
    const std::size_t n = osc_.size();

    double t_next = kInf;
    if (drive_cursor_ < drive_edges_.size()) t_next = drive_edges_[drive_cursor_].time;
    for (const auto& s : osc_) t_next = std::min(t_next, s.next_time);
    if (t_next > t_stop) return false;
    if (t_next > t_limit_) throw_stalled();

    now_ = t_next;

    bool thresholds_changed = false;
    while (drive_cursor_ < drive_edges_.size() &&
           drive_edges_[drive_cursor_].time == t_next) {
        const auto& e = drive_edges_[drive_cursor_++];
        if (e.is_end)
            active_pulses_[e.drive] -= 1;
        else
            active_pulses_[e.drive] += 1;
        thresholds_changed = true;
        ++events_;
    }
    if (thresholds_changed)
        for (std::size_t i = 0; i < n; ++i) refresh_fire_time(i);

    // Oscillator events in ascending index; a fire can pull neighbors down
    // to an immediate fire at the same timestamp, so rescan until quiet.
    bool any = true;
    while (any) {
        any = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (osc_[i].next_time != t_next) continue;
            any = true;
            ++events_;
            if (osc_[i].on)
                process_off(i, t_next);
            else
                process_fire(i, t_next);
            for (std::size_t j = 0; j < n; ++j) refresh_fire_time(j);
        }
        if (events_ > max_events_) throw_stalled();
    }
    return true;
}

void Simulation::advance_until(double t) {
    while (step_one_batch(t)) {
    }
    now_ = std::max(now_, t);
}

std::vector<SpikeTrain> Simulation::run() {
    if (record_ < 1) throw ConfigError("record_spikes must be >= 1");
    while (!all_recorded()) {
        if (!step_one_batch(t_limit_)) throw_stalled();
    }
    return trains_;
}

std::vector<SpikeTrain> simulate(const NetworkConfig& config, std::size_t warmup_spikes,
                                 std::size_t record_spikes, SimBudget budget) {
    Simulation sim(config, warmup_spikes, record_spikes, budget);
    return sim.run();
}

} // namespace oscres
