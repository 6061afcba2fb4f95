#pragma once

#include <cmath>
#include <cstdint>

namespace oscres {

// Deterministic, platform-stable random primitives. All stochastic draws in
// the project flow through these so that runs are reproducible from a single
// 64-bit seed and sub-streams can be derived without consuming shared state.

// Finalizer of the splitmix64 generator (Steele, Lea, Vigna).
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Per-oscillator stream seeds sit at a fixed odd stride from the config
// seed, then pass through the mixer. Oscillator k of a network seeded S
// draws exactly like oscillator 0 of a network seeded S + k * stride, so
// uncoupled oscillators can be reproduced by isolated runs.
inline constexpr std::uint64_t kStreamStride = 0xd1342543de82ef95ULL;

inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) {
    return splitmix64_mix(seed + index * kStreamStride);
}

// Per-cell sweep seeds: mix of the base seed and the two cell indices.
// This exact function is part of the reproducibility contract: maps are
// identical across worker counts and across machines for a fixed spec.
inline std::uint64_t derive_cell_seed(std::uint64_t base_seed,
                                      std::uint64_t cell_x, std::uint64_t cell_y) {
    std::uint64_t h = splitmix64_mix(base_seed);
    h = splitmix64_mix(h ^ (cell_x + 0x665d2bd1cbbd4acbULL));
    h = splitmix64_mix(h ^ (cell_y + 0x9f4a7c15665d2bd1ULL));
    return h;
}

// Minimal counter-based generator: splitmix64 over an incrementing counter.
// Statistical quality is ample for threshold jitter, and the draw sequence
// is a pure function of the stream seed.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in (0, 1]; never returns 0 so log() below is safe.
    double next_unit() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller. One value per call; the partner value
    // is discarded to keep the draw count predictable.
    double next_normal() {
        const double u1 = next_unit();
        const double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    // Normal(0, sigma) truncated to [-4 sigma, 4 sigma] by rejection.
    double next_truncated_normal(double sigma) {
        if (sigma <= 0.0) return 0.0;
        double z = next_normal();
        while (std::abs(z) > 4.0) z = next_normal();
        return z * sigma;
    }

private:
    std::uint64_t state_;
};

} // namespace oscres
