#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "oscres/metrics.hpp"
#include "oscres/params.hpp"
#include "oscres/reservoir.hpp"
#include "oscres/simulate.hpp"
#include "oscres/sweep.hpp"

namespace oscres {

inline constexpr const char* kToolName = "oscres";
inline constexpr const char* kToolVersion = "0.1.0";

// Shortest decimal form that parses back to the same double; used for every
// floating-point value we serialize so round trips are bit-exact.
std::string format_double(double v);

struct SimSettings {
    std::size_t warmup_spikes = 50;
    std::size_t record_spikes = 1000;
    SimBudget budget;
};

// ---- JSON configuration ------------------------------------------------

// Parse errors carry nlohmann's line/column diagnostics; validation errors
// name the offending field.
nlohmann::json load_json_file(const std::filesystem::path& path);

NetworkConfig network_from_json(const nlohmann::json& j);
nlohmann::ordered_json network_to_json(const NetworkConfig& config);

SimSettings sim_settings_from_json(const nlohmann::json& root);  // "simulation" section
nlohmann::ordered_json sim_settings_to_json(const SimSettings& settings);

MetricConfig metrics_from_json(const nlohmann::json& root);  // "metrics" section
nlohmann::ordered_json metrics_to_json(const MetricConfig& cfg);

struct LoadedPipeline {
    PipelineConfig config;
    bool has_readout = false;  // false: weights must be trained before use
};

LoadedPipeline pipeline_from_json(const nlohmann::json& root);
nlohmann::ordered_json pipeline_to_json(const PipelineConfig& config, bool include_readout);

SweepSpec sweep_from_json(const nlohmann::json& root);
nlohmann::ordered_json sweep_to_json(const SweepSpec& spec);

nlohmann::ordered_json readout_to_json(const ReadoutNeuron& neuron);
ReadoutNeuron readout_from_json(const nlohmann::json& j);

// ---- Spike-train files ---------------------------------------------------

// One ASCII decimal timestamp (seconds) per line, sorted ascending; header
// comment lines start with '#'.
void write_spike_train_file(const std::filesystem::path& path, const SpikeTrain& train,
                            const std::vector<std::string>& header_comments = {});

// Skips comments and blank lines; rejects non-numeric or unsorted content
// with the offending line number.
std::vector<double> read_spike_times_file(const std::filesystem::path& path);

// ---- Arnold map serialization ---------------------------------------------

struct MapCsvRow {
    double x_value = 0.0;
    double y_value = 0.0;
    std::uint64_t m_i = 0;
    std::uint64_t m_j = 0;
    double shr_value = 0.0;
    double mu_percent = 0.0;
    bool synchronized = false;
    bool error_flag = false;
};

void write_map_csv(const std::filesystem::path& path, const ArnoldMap& map);
std::vector<MapCsvRow> read_map_csv(const std::filesystem::path& path);

// 8-bit grayscale view of a map: 0 = unsynchronized, 255 = cell error,
// otherwise 1 + round(253 * (log2(clamp(shr, 1/8, 8)) + 3) / 6). The scale is
// repeated in the PGM header comment.
int pgm_gray(const MapCell& cell);
void write_map_pgm(const std::filesystem::path& path, const ArnoldMap& map);

// ---- Run manifest -----------------------------------------------------

std::uint64_t fnv1a64(const void* data, std::size_t size);
std::uint64_t file_digest(const std::filesystem::path& path);

// Writes <out_dir>/manifest.json listing every artifact with its digest; a
// rerun with the manifest's embedded config must reproduce the digests.
void write_manifest(const std::filesystem::path& out_dir, const std::string& command,
                    const nlohmann::ordered_json& resolved_config, std::uint64_t seed,
                    const std::vector<std::filesystem::path>& artifacts);

} // namespace oscres
