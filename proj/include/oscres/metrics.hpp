#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "oscres/params.hpp"

namespace oscres {

struct MetricConfig {
    double epsilon = 0.0;            // coincidence half-window, seconds; <= 0 selects
                                     // 5% of the smaller mean inter-spike interval
    double mu_threshold = 90.0;      // percent
    std::size_t min_oscillations = 50;
    std::size_t max_oscillations = 1000;  // analysis window: most recent spikes
};

void validate(const MetricConfig& cfg);

using PatternHistogram = std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t>;

// High-order synchronization readout for an ordered pair of trains (i, j).
//
// Convention: SHR_{i,j} = m_j : m_i where (m_i, m_j) is the reduced modal
// count of periods per synchronization interval. Counting periods this way
// ties the locked rates together as F_j / F_i = m_j / m_i = SHR_{i,j}; e.g.
// a pair locked with three j-spikes per two i-spikes reads SHR_{i,j} = 3:2.
struct SyncMetrics {
    std::uint64_t m_i = 0;        // reduced modal pattern; (0, 0) when the
    std::uint64_t m_j = 0;        // trains show fewer than two coincidences
    double shr_value = 0.0;       // m_j / m_i when synchronized, else 0 (sentinel)
    double mu = 0.0;              // percent of analyzed spikes in modal intervals
    bool synchronized = false;    // mu >= mu_threshold
    PatternHistogram pattern_histogram;
};

// Greedy earliest-first matching of spikes within |t_i - t_j| <= epsilon.
// Returns chronologically ordered index pairs; every spike joins at most one
// pair. Trains must be sorted ascending.
std::vector<std::pair<std::size_t, std::size_t>>
detect_synchronous_events(const std::vector<double>& train_i,
                          const std::vector<double>& train_j, double epsilon);

// The value detect_synchronous_events/compute_shr_mu will use for epsilon
// after windowing: cfg.epsilon if positive, otherwise the 5% auto rule.
double resolve_epsilon(const std::vector<double>& window_i,
                       const std::vector<double>& window_j, const MetricConfig& cfg);

// Full metric:
//  1. trim each train to its most recent max_oscillations spikes;
//  2. match coincidences (greedy earliest-first, resolve_epsilon window);
//  3. between consecutive coincidences count periods (M_i, M_j), reduce by
//     gcd, and histogram the reduced patterns;
//  4. modal pattern: most intervals, then most covered spikes, then earliest
//     first occurrence;
//  5. mu = 100 * spikes covered by modal intervals / all spikes of both
//     trains strictly after the first coincidence up to the last one.
// Fewer than two coincidences yields the unsynchronized sentinel. Throws
// ConfigError("insufficient data ...") if a train has fewer than
// min_oscillations spikes.
SyncMetrics compute_shr_mu(const std::vector<double>& train_i,
                           const std::vector<double>& train_j, const MetricConfig& cfg);

inline SyncMetrics compute_shr_mu(const SpikeTrain& train_i, const SpikeTrain& train_j,
                                  const MetricConfig& cfg) {
    return compute_shr_mu(train_i.times, train_j.times, cfg);
}

inline bool is_synchronized(const SyncMetrics& metrics, double mu_threshold) {
    return metrics.mu >= mu_threshold;
}

} // namespace oscres
