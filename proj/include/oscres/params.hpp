#pragma once

#include <cstdint>
#include <vector>

namespace oscres {

// All quantities are SI: farads, amperes, volts, ohms, seconds.

struct OscillatorParams {
    double capacitance = 100e-9;       // C
    double supply_current = 500e-6;    // I_p, charges C while the switch is off
    double threshold_voltage = 5.0;    // U_th, switch turns on when V_C reaches it
    double hold_voltage = 1.5;         // U_h, switch turns off when V_C decays to it
    double on_resistance = 1000.0;     // R_on, discharge path while the switch is on
    double noise_sigma = 20e-3;        // std. dev. of per-cycle threshold jitter
    double initial_voltage = 0.0;      // V_C at t = 0
};

// delta[i][j] = threshold reduction applied to oscillator j while oscillator
// i's switch is on. Row-major, diagonal forced to zero.
struct CouplingMatrix {
    std::size_t n = 0;
    std::vector<double> delta;  // n*n entries

    double at(std::size_t i, std::size_t j) const { return delta[i * n + j]; }
    double& at(std::size_t i, std::size_t j) { return delta[i * n + j]; }

    static CouplingMatrix zero(std::size_t n) {
        return CouplingMatrix{n, std::vector<double>(n * n, 0.0)};
    }
    static CouplingMatrix symmetric_pair(double d) {
        CouplingMatrix m = zero(2);
        m.at(0, 1) = d;
        m.at(1, 0) = d;
        return m;
    }
};

// Dynamic spike-sequence input: each spike lowers the threshold of target
// oscillator j by delta_ext[j] for pulse_width seconds.
struct ExternalDrive {
    std::vector<double> spike_times;   // strictly increasing, seconds
    double pulse_width = 0.0;
    std::vector<double> delta_ext;     // one entry per oscillator, volts
};

struct NetworkConfig {
    std::vector<OscillatorParams> oscillators;
    CouplingMatrix coupling;
    std::vector<ExternalDrive> drives;
    std::uint64_t seed = 0;
};

// One switch-on event per entry, strictly increasing.
struct SpikeTrain {
    std::size_t oscillator_index = 0;
    std::vector<double> times;
};

// Throw ConfigError when an invariant is violated:
//  - capacitance, I_p, R_on > 0; noise_sigma >= 0; U_th > U_h > I_p * R_on
//  - 0 <= initial_voltage < U_th
//  - coupling: square of matching size, delta >= 0, zero diagonal
//  - worst-case effective threshold stays above U_h:
//      U_th_j - sum_i delta[i][j] - sum_d delta_ext_d[j] - 4 * noise_sigma_j > U_h_j
//  - drives: strictly increasing spike times, pulse_width > 0, delta_ext >= 0
void validate(const OscillatorParams& p);
void validate(const NetworkConfig& config);

} // namespace oscres
