#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "oscres/rng.hpp"

// Synthetic locked spike-train pairs for metric testing: p spikes of train i
// and q of train j per 1-second synchronization interval, optional uniform
// jitter and random dropout.
struct SynthSpec {
    std::uint64_t p = 1;
    std::uint64_t q = 1;
    std::size_t intervals = 60;
    double jitter = 0.0;        // uniform in [-jitter, +jitter]
    double dropout = 0.0;       // per-spike removal probability
};

struct SynthPair {
    std::vector<double> train_i;
    std::vector<double> train_j;
};

inline SynthPair make_locked_pair(const SynthSpec& spec, std::uint64_t seed) {
    oscres::SplitMix64 rng(oscres::splitmix64_mix(seed));
    auto build = [&](std::uint64_t per_interval) {
        std::vector<double> times;
        times.reserve(spec.intervals * per_interval);
        for (std::size_t k = 0; k < spec.intervals; ++k) {
            for (std::uint64_t r = 0; r < per_interval; ++r) {
                double t = static_cast<double>(k) +
                           static_cast<double>(r) / static_cast<double>(per_interval);
                if (spec.jitter > 0.0)
                    t += spec.jitter * (2.0 * rng.next_unit() - 1.0);
                if (spec.dropout > 0.0 && rng.next_unit() < spec.dropout) continue;
                times.push_back(t);
            }
        }
        return times;
    };
    return SynthPair{build(spec.p), build(spec.q)};
}
