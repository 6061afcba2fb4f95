#include <doctest.h>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "oscres/errors.hpp"
#include "oscres/io.hpp"
#include "oscres/rng.hpp"

using namespace oscres;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("oscres_test_" + std::to_string(splitmix64_mix(
                                     static_cast<std::uint64_t>(::getpid()) ^
                                     reinterpret_cast<std::uintptr_t>(this))));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

NetworkConfig sample_network() {
    NetworkConfig config;
    config.oscillators.resize(2);
    config.oscillators[0].supply_current = 638e-6;
    config.oscillators[1].supply_current = 574e-6;
    config.oscillators[1].noise_sigma = 15e-3;
    config.coupling = CouplingMatrix::symmetric_pair(0.45);
    ExternalDrive drive;
    drive.spike_times = {0.001, 0.0025, 0.004};
    drive.pulse_width = 1e-4;
    drive.delta_ext = {0.2, 0.1};
    config.drives.push_back(drive);
    config.seed = 987654321;
    return config;
}

ArnoldMap sample_map() {
    ArnoldMap map;
    map.nx = 3;
    map.ny = 2;
    map.cells.resize(6);
    for (std::size_t iy = 0; iy < 2; ++iy)
        for (std::size_t ix = 0; ix < 3; ++ix) {
            MapCell& cell = map.at(ix, iy);
            cell.x_value = 600.0 + 10.0 * static_cast<double>(ix);
            cell.y_value = 700.0 + 11.0 * static_cast<double>(iy);
            cell.metrics.m_i = 1 + ix;
            cell.metrics.m_j = 1 + iy;
            cell.metrics.mu = 35.0 + 20.0 * static_cast<double>(ix + iy);
            cell.metrics.synchronized = cell.metrics.mu >= 90.0;
            cell.metrics.shr_value =
                cell.metrics.synchronized
                    ? static_cast<double>(cell.metrics.m_j) / static_cast<double>(1 + ix)
                    : 0.0;
        }
    map.at(1, 1).error = "boom";
    return map;
}

} // namespace

TEST_CASE("format_double round-trips arbitrary doubles") {
    SplitMix64 rng(2024);
    for (int k = 0; k < 2000; ++k) {
        double v = (rng.next_unit() - 0.5) * std::pow(10.0, double(int(rng.next_u64() % 37)) - 18.0);
        const std::string s = format_double(v);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        CHECK(back == v);
    }
    CHECK(format_double(638.0) == "638");
    CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("network config JSON round-trip preserves every field") {
    const NetworkConfig config = sample_network();
    const auto j = network_to_json(config);
    const NetworkConfig back = network_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back.seed == config.seed);
    REQUIRE(back.oscillators.size() == config.oscillators.size());
    for (std::size_t k = 0; k < config.oscillators.size(); ++k) {
        CHECK(back.oscillators[k].capacitance == config.oscillators[k].capacitance);
        CHECK(back.oscillators[k].supply_current == config.oscillators[k].supply_current);
        CHECK(back.oscillators[k].threshold_voltage ==
              config.oscillators[k].threshold_voltage);
        CHECK(back.oscillators[k].hold_voltage == config.oscillators[k].hold_voltage);
        CHECK(back.oscillators[k].on_resistance == config.oscillators[k].on_resistance);
        CHECK(back.oscillators[k].noise_sigma == config.oscillators[k].noise_sigma);
        CHECK(back.oscillators[k].initial_voltage ==
              config.oscillators[k].initial_voltage);
    }
    CHECK(back.coupling.delta == config.coupling.delta);
    REQUIRE(back.drives.size() == 1);
    CHECK(back.drives[0].spike_times == config.drives[0].spike_times);
    CHECK(back.drives[0].pulse_width == config.drives[0].pulse_width);
    CHECK(back.drives[0].delta_ext == config.drives[0].delta_ext);
}

TEST_CASE("config parsing rejects unknown keys and bad types") {
    auto j = nlohmann::json::parse(R"({
        "oscillators": [{"supply_current_uA": 500}, {"supply_current_uA": 600}],
        "coupling_V": [[0, 0.1], [0.1, 0]],
        "typo_key": 1
    })");
    CHECK_THROWS_WITH_AS(network_from_json(j), doctest::Contains("typo_key"), ConfigError);

    j = nlohmann::json::parse(R"({
        "oscillators": [{"supply_current_uA": "fast"}]
    })");
    CHECK_THROWS_AS(network_from_json(j), ConfigError);

    j = nlohmann::json::parse(R"({
        "oscillators": [{"supply_current_uAmps": 500}]
    })");
    CHECK_THROWS_WITH_AS(network_from_json(j), doctest::Contains("supply_current_uAmps"),
                         ConfigError);
}

TEST_CASE("validation failures name the violated invariant") {
    auto j = nlohmann::json::parse(R"({
        "oscillators": [{"supply_current_uA": 2000}]
    })");
    CHECK_THROWS_WITH_AS(network_from_json(j), doctest::Contains("hold_voltage"),
                         ConfigError);
}

TEST_CASE("malformed JSON reports the parse position") {
    TempDir tmp;
    const fs::path bad = tmp.path / "bad.json";
    std::ofstream(bad) << "{\n  \"oscillators\": [\n";
    CHECK_THROWS_WITH_AS(load_json_file(bad), doctest::Contains("line"), IoError);
    CHECK_THROWS_AS(load_json_file(tmp.path / "missing.json"), IoError);
}

TEST_CASE("pipeline JSON round-trip") {
    nlohmann::json root;
    root["network"] = network_to_json(sample_network());
    root["simulation"] = {{"warmup_spikes", 25}, {"record_spikes", 300}};
    root["metrics"] = {{"mu_threshold_percent", 85.0}, {"max_oscillations", 500}};
    root["encoding"] = {{"offsets_uA", {638.0, 574.0}}, {"gains_uA", {343.0, 416.0}}};
    root["observed_pair"] = {0, 1};
    root["readout"] = {{"bias_weight", 1.12},
                       {"input_weights", {-0.8, 0.78}},
                       {"feature_weights", {-1.0}}};
    const LoadedPipeline loaded = pipeline_from_json(root);
    CHECK(loaded.has_readout);
    CHECK(loaded.config.warmup_spikes == 25);
    CHECK(loaded.config.record_spikes == 300);
    CHECK(loaded.config.metrics.mu_threshold == 85.0);
    CHECK(loaded.config.encoding.offsets[0] == doctest::Approx(638e-6).epsilon(1e-12));
    CHECK(loaded.config.readout.feature_weights[0] == -1.0);

    const auto echoed = pipeline_to_json(loaded.config, true);
    const LoadedPipeline again = pipeline_from_json(nlohmann::json::parse(echoed.dump()));
    CHECK(again.config.encoding.offsets == loaded.config.encoding.offsets);
    CHECK(again.config.readout.bias_weight == loaded.config.readout.bias_weight);

    nlohmann::json no_readout = root;
    no_readout.erase("readout");
    CHECK_FALSE(pipeline_from_json(no_readout).has_readout);
}

TEST_CASE("sweep JSON round-trip") {
    nlohmann::json root;
    root["network"] = network_to_json(sample_network());
    root["metrics"] = {{"max_oscillations", 400}};
    root["simulation"] = {{"record_spikes", 400}};
    root["sweep"] = {
        {"axis_x", {{"path", "oscillators.0.supply_current_uA"},
                    {"min", 638.0},
                    {"max", 981.0},
                    {"steps", 50}}},
        {"axis_y", {{"path", "oscillators.1.supply_current_uA"},
                    {"min", 574.0},
                    {"max", 990.0},
                    {"steps", 50}}},
        {"observed_pair", {0, 1}},
        {"base_seed", 4242},
    };
    const SweepSpec spec = sweep_from_json(root);
    CHECK(spec.axis_x.steps == 50);
    CHECK(spec.base_seed == 4242);
    CHECK(spec.record_spikes == 400);
    const SweepSpec back = sweep_from_json(nlohmann::json::parse(sweep_to_json(spec).dump()));
    CHECK(back.axis_x.path == spec.axis_x.path);
    CHECK(back.axis_x.min == spec.axis_x.min);
    CHECK(back.axis_y.max == spec.axis_y.max);
    CHECK(back.base_seed == spec.base_seed);
}

TEST_CASE("spike train files round-trip bit-exactly") {
    TempDir tmp;
    SpikeTrain train;
    train.oscillator_index = 1;
    SplitMix64 rng(7);
    double t = 0.0;
    for (int k = 0; k < 500; ++k) {
        t += 1e-4 * (0.5 + rng.next_unit());
        train.times.push_back(t);
    }
    const fs::path path = tmp.path / "train.txt";
    write_spike_train_file(path, train, {"extra: header"});
    const auto back = read_spike_times_file(path);
    CHECK(back == train.times);
}

TEST_CASE("spike train parser reports the offending line") {
    TempDir tmp;
    const fs::path path = tmp.path / "bad.txt";
    std::ofstream(path) << "# header\n0.001\n0.002\nnot_a_number\n";
    CHECK_THROWS_WITH_AS(read_spike_times_file(path), doctest::Contains(":4"), IoError);

    const fs::path unsorted = tmp.path / "unsorted.txt";
    std::ofstream(unsorted) << "0.002\n0.001\n";
    CHECK_THROWS_WITH_AS(read_spike_times_file(unsorted), doctest::Contains(":2"), IoError);
}

TEST_CASE("map CSV round-trips every cell") {
    TempDir tmp;
    const ArnoldMap map = sample_map();
    const fs::path path = tmp.path / "map.csv";
    write_map_csv(path, map);
    const auto rows = read_map_csv(path);
    REQUIRE(rows.size() == map.cells.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const MapCell& cell = map.cells[k];
        const bool err = !cell.error.empty();
        CHECK(rows[k].x_value == cell.x_value);
        CHECK(rows[k].y_value == cell.y_value);
        CHECK(rows[k].error_flag == err);
        if (!err) {
            CHECK(rows[k].m_i == cell.metrics.m_i);
            CHECK(rows[k].m_j == cell.metrics.m_j);
            CHECK(rows[k].shr_value == cell.metrics.shr_value);
            CHECK(rows[k].mu_percent == cell.metrics.mu);
            CHECK(rows[k].synchronized == cell.metrics.synchronized);
        }
    }
    // Serialize -> parse -> serialize is byte-identical.
    const fs::path path2 = tmp.path / "map2.csv";
    write_map_csv(path2, map);
    CHECK(file_digest(path) == file_digest(path2));
}

TEST_CASE("PGM rendering agrees with the CSV cell for cell") {
    TempDir tmp;
    const ArnoldMap map = sample_map();
    const fs::path pgm_path = tmp.path / "map.pgm";
    write_map_pgm(pgm_path, map);

    std::ifstream in(pgm_path);
    std::string magic;
    in >> magic;
    REQUIRE(magic == "P2");
    std::string line;
    std::getline(in, line);
    std::size_t nx = 0, ny = 0, maxval = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        ss >> nx >> ny;
        break;
    }
    in >> maxval;
    REQUIRE(nx == map.nx);
    REQUIRE(ny == map.ny);
    REQUIRE(maxval == 255);
    for (std::size_t k = 0; k < map.cells.size(); ++k) {
        int gray = -1;
        in >> gray;
        CHECK(gray == pgm_gray(map.cells[k]));
    }

    // Gray levels: unsynchronized at 0, errors at 255, locked cells on the
    // documented monotone log2 scale.
    MapCell cell;
    cell.metrics.synchronized = true;
    cell.metrics.shr_value = 1.0;
    CHECK(pgm_gray(cell) == 1 + 127);  // midpoint of the clamped log range
    cell.metrics.shr_value = 8.0;
    CHECK(pgm_gray(cell) == 254);
    cell.metrics.shr_value = 100.0;  // clamped
    CHECK(pgm_gray(cell) == 254);
    cell.metrics.shr_value = 0.125;
    CHECK(pgm_gray(cell) == 1);
    cell.metrics.synchronized = false;
    CHECK(pgm_gray(cell) == 0);
    cell.error = "x";
    CHECK(pgm_gray(cell) == 255);
}

TEST_CASE("manifest lists artifacts with stable digests") {
    TempDir tmp;
    const fs::path artifact = tmp.path / "data.txt";
    std::ofstream(artifact) << "payload 123\n";
    write_manifest(tmp.path, "simulate", nlohmann::ordered_json{{"k", 1}}, 42, {artifact});

    const auto j = load_json_file(tmp.path / "manifest.json");
    CHECK(j["tool"] == "oscres");
    CHECK(j["command"] == "simulate");
    CHECK(j["seed"] == 42);
    CHECK(j["config"]["k"] == 1);
    REQUIRE(j["outputs"].size() == 1);
    CHECK(j["outputs"][0]["path"] == "data.txt");
    CHECK(j["outputs"][0]["bytes"].get<std::size_t>() == 12);

    // Digest is a pure function of the bytes.
    const std::string digest = j["outputs"][0]["fnv1a64"].get<std::string>();
    write_manifest(tmp.path, "simulate", nlohmann::ordered_json{{"k", 1}}, 42, {artifact});
    const auto j2 = load_json_file(tmp.path / "manifest.json");
    CHECK(j2["outputs"][0]["fnv1a64"].get<std::string>() == digest);

    std::ofstream(artifact, std::ios::app) << "more\n";
    write_manifest(tmp.path, "simulate", nlohmann::ordered_json{{"k", 1}}, 42, {artifact});
    const auto j3 = load_json_file(tmp.path / "manifest.json");
    CHECK(j3["outputs"][0]["fnv1a64"].get<std::string>() != digest);
}

TEST_CASE("fnv1a64 reference vectors") {
    CHECK(fnv1a64("", 0) == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a", 1) == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar", 6) == 0x85944171f73967e8ULL);
}
