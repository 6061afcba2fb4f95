#include "oscres/metrics.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

#include "oscres/errors.hpp"

namespace oscres {

void validate(const MetricConfig& cfg) {
    if (!(cfg.mu_threshold > 0.0) || !(cfg.mu_threshold <= 100.0))
        throw ConfigError("metrics: mu_threshold must lie in (0, 100]");
    if (cfg.min_oscillations < 2)
        throw ConfigError("metrics: min_oscillations must be >= 2");
    if (cfg.max_oscillations < cfg.min_oscillations)
        throw ConfigError("metrics: max_oscillations must be >= min_oscillations");
}

std::vector<std::pair<std::size_t, std::size_t>>
detect_synchronous_events(const std::vector<double>& train_i,
                          const std::vector<double>& train_j, double epsilon) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::size_t a = 0, b = 0;
    while (a < train_i.size() && b < train_j.size()) {
        const double d = train_i[a] - train_j[b];
        if (std::abs(d) <= epsilon) {
            pairs.emplace_back(a, b);
            ++a;
            ++b;
        } else if (d < 0.0) {
            ++a;
        } else {
            ++b;
        }
    }
    return pairs;
}

namespace {

std::vector<double> tail_window(const std::vector<double>& times, std::size_t max_count) {
    if (times.size() <= max_count) return times;
    return {times.end() - static_cast<std::ptrdiff_t>(max_count), times.end()};
}

double mean_isi(const std::vector<double>& times) {
    return (times.back() - times.front()) / static_cast<double>(times.size() - 1);
}

} // namespace

double resolve_epsilon(const std::vector<double>& window_i,
                       const std::vector<double>& window_j, const MetricConfig& cfg) {
    if (cfg.epsilon > 0.0) return cfg.epsilon;
    return 0.05 * std::min(mean_isi(window_i), mean_isi(window_j));
}

SyncMetrics compute_shr_mu(const std::vector<double>& train_i,
                           const std::vector<double>& train_j, const MetricConfig& cfg) {
    validate(cfg);
    if (train_i.size() < cfg.min_oscillations || train_j.size() < cfg.min_oscillations)
        throw ConfigError("insufficient data: trains hold " + std::to_string(train_i.size()) +
                          " and " + std::to_string(train_j.size()) + " spikes, need " +
                          std::to_string(cfg.min_oscillations));

    const std::vector<double> wi = tail_window(train_i, cfg.max_oscillations);
    const std::vector<double> wj = tail_window(train_j, cfg.max_oscillations);
    const double epsilon = resolve_epsilon(wi, wj, cfg);

    const auto pairs = detect_synchronous_events(wi, wj, epsilon);

    SyncMetrics out;
    if (pairs.size() < 2) return out;  // unsynchronized sentinel

    struct PatternStats {
        std::uint64_t intervals = 0;
        std::uint64_t covered_spikes = 0;
        std::size_t first_interval = 0;
    };
    std::map<std::pair<std::uint64_t, std::uint64_t>, PatternStats> stats;

    for (std::size_t k = 0; k + 1 < pairs.size(); ++k) {
        const std::uint64_t mi = pairs[k + 1].first - pairs[k].first;
        const std::uint64_t mj = pairs[k + 1].second - pairs[k].second;
        const std::uint64_t g = std::gcd(mi, mj);
        const std::pair<std::uint64_t, std::uint64_t> key{mi / g, mj / g};
        auto [it, inserted] = stats.try_emplace(key);
        if (inserted) it->second.first_interval = k;
        it->second.intervals += 1;
        it->second.covered_spikes += mi + mj;
    }

    auto best = stats.begin();
    for (auto it = std::next(stats.begin()); it != stats.end(); ++it) {
        const auto& a = it->second;
        const auto& b = best->second;
        if (a.intervals != b.intervals) {
            if (a.intervals > b.intervals) best = it;
        } else if (a.covered_spikes != b.covered_spikes) {
            if (a.covered_spikes > b.covered_spikes) best = it;
        } else if (a.first_interval < b.first_interval) {
            best = it;
        }
    }

    // Every spike of either train strictly after the first coincidence and
    // no later than the last one; the interval counts telescope to this.
    const std::uint64_t total = (pairs.back().first - pairs.front().first) +
                                (pairs.back().second - pairs.front().second);

    out.m_i = best->first.first;
    out.m_j = best->first.second;
    out.mu = 100.0 * static_cast<double>(best->second.covered_spikes) /
             static_cast<double>(total);
    out.synchronized = out.mu >= cfg.mu_threshold;
    out.shr_value = out.synchronized
                        ? static_cast<double>(out.m_j) / static_cast<double>(out.m_i)
                        : 0.0;
    for (const auto& [key, s] : stats) out.pattern_histogram[key] = s.intervals;
    return out;
}

} // namespace oscres
