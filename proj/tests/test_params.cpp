#include <doctest.h>

#include "oscres/errors.hpp"
#include "oscres/params.hpp"

using namespace oscres;

namespace {

NetworkConfig two_osc(double delta = 0.0) {
    NetworkConfig config;
    config.oscillators.resize(2);
    config.coupling = CouplingMatrix::symmetric_pair(delta);
    return config;
}

} // namespace

TEST_CASE("default oscillator parameters are valid") {
    CHECK_NOTHROW(validate(OscillatorParams{}));
    CHECK_NOTHROW(validate(two_osc(0.3)));
}

TEST_CASE("oscillator invariants are rejected at construction") {
    OscillatorParams p;

    p = OscillatorParams{};
    p.capacitance = 0.0;
    CHECK_THROWS_AS(validate(p), ConfigError);

    p = OscillatorParams{};
    p.supply_current = -1e-6;
    CHECK_THROWS_AS(validate(p), ConfigError);

    p = OscillatorParams{};
    p.on_resistance = 0.0;
    CHECK_THROWS_AS(validate(p), ConfigError);

    p = OscillatorParams{};
    p.noise_sigma = -1e-3;
    CHECK_THROWS_AS(validate(p), ConfigError);

    // U_th <= U_h: capacitor can never fire after turning off
    p = OscillatorParams{};
    p.threshold_voltage = 1.0;
    p.hold_voltage = 1.5;
    CHECK_THROWS_AS(validate(p), ConfigError);

    // U_h <= I_p * R_on: the switch never turns off
    p = OscillatorParams{};
    p.supply_current = 2e-3;  // 2 mA * 1 kOhm = 2 V > U_h
    CHECK_THROWS_AS(validate(p), ConfigError);

    p = OscillatorParams{};
    p.initial_voltage = 5.0;  // must be < U_th
    CHECK_THROWS_AS(validate(p), ConfigError);
    p.initial_voltage = -0.1;
    CHECK_THROWS_AS(validate(p), ConfigError);
}

TEST_CASE("coupling matrix invariants") {
    NetworkConfig config = two_osc(0.3);

    SUBCASE("size mismatch") {
        config.coupling = CouplingMatrix::zero(3);
        CHECK_THROWS_AS(validate(config), ConfigError);
    }
    SUBCASE("negative entry") {
        config.coupling.at(0, 1) = -0.1;
        CHECK_THROWS_AS(validate(config), ConfigError);
    }
    SUBCASE("nonzero diagonal") {
        config.coupling.at(1, 1) = 0.2;
        CHECK_THROWS_AS(validate(config), ConfigError);
    }
    SUBCASE("worst-case reduction reaching the hold voltage") {
        // U_th - delta - 4*sigma must stay above U_h = 1.5 V
        config.coupling.at(0, 1) = 3.5;
        CHECK_THROWS_AS(validate(config), ConfigError);
        config.coupling.at(0, 1) = 3.42;  // 5 - 3.42 - 0.08 = 1.5 exactly, still rejected
        CHECK_THROWS_AS(validate(config), ConfigError);
        config.coupling.at(0, 1) = 3.0;
        CHECK_NOTHROW(validate(config));
    }
}

TEST_CASE("drive invariants") {
    NetworkConfig config = two_osc(0.0);
    ExternalDrive drive;
    drive.spike_times = {0.0, 1.0, 2.0};
    drive.pulse_width = 1e-4;
    drive.delta_ext = {0.2, 0.0};
    config.drives.push_back(drive);
    CHECK_NOTHROW(validate(config));

    SUBCASE("pulse width must be positive") {
        config.drives[0].pulse_width = 0.0;
        CHECK_THROWS_AS(validate(config), ConfigError);
    }
    SUBCASE("delta_ext arity") {
        config.drives[0].delta_ext = {0.2};
        CHECK_THROWS_AS(validate(config), ConfigError);
    }
    SUBCASE("delta_ext sign") {
        config.drives[0].delta_ext = {-0.2, 0.0};
        CHECK_THROWS_AS(validate(config), ConfigError);
    }
    SUBCASE("spike times strictly increasing") {
        config.drives[0].spike_times = {0.0, 1.0, 1.0};
        CHECK_THROWS_AS(validate(config), ConfigError);
    }
    SUBCASE("drives participate in the worst-case threshold check") {
        config.drives[0].delta_ext = {3.45, 0.0};  // 5 - 3.45 - 0.08 < 1.5
        CHECK_THROWS_AS(validate(config), ConfigError);
    }
}

TEST_CASE("empty network is rejected") {
    NetworkConfig config;
    config.coupling = CouplingMatrix::zero(0);
    CHECK_THROWS_AS(validate(config), ConfigError);
}
