#include "oscres/io.hpp"

#include <charconv>
#include <chrono>
#include <fstream>
#include <sstream>

#include "oscres/errors.hpp"
#include "oscres/param_path.hpp"

namespace oscres {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

namespace {

double parse_double_token(const std::string& token, const std::string& where) {
    double value = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw IoError(where + ": '" + token + "' is not a number");
    return value;
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* name : allowed)
            if (key == name) {
                ok = true;
                break;
            }
        if (!ok) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

double get_number(const json& obj, const char* key, double fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number())
        throw ConfigError(where + "." + key + ": expected a number");
    return obj[key].get<double>();
}

bool is_nonnegative_integer(const json& v) {
    return v.is_number_unsigned() ||
           (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

std::size_t get_count(const json& obj, const char* key, std::size_t fallback,
                      const std::string& where) {
    if (!obj.contains(key)) return fallback;
    if (!is_nonnegative_integer(obj[key]))
        throw ConfigError(where + "." + key + ": expected a non-negative integer");
    return obj[key].get<std::size_t>();
}

std::vector<double> get_number_array(const json& j, const std::string& where) {
    if (!j.is_array()) throw ConfigError(where + ": expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number()) throw ConfigError(where + ": expected an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

} // namespace

json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

NetworkConfig network_from_json(const json& j) {
    const std::string where = "network";
    check_keys(j, {"seed", "oscillators", "coupling_V", "drives"}, where);
    NetworkConfig config;

    if (j.contains("seed")) {
        if (!is_nonnegative_integer(j["seed"]))
            throw ConfigError("network.seed: expected an unsigned integer");
        config.seed = j["seed"].get<std::uint64_t>();
    }

    if (!j.contains("oscillators") || !j["oscillators"].is_array() || j["oscillators"].empty())
        throw ConfigError("network.oscillators: expected a non-empty array");
    for (std::size_t k = 0; k < j["oscillators"].size(); ++k) {
        const json& o = j["oscillators"][k];
        const std::string ow = "network.oscillators[" + std::to_string(k) + "]";
        if (!o.is_object()) throw ConfigError(ow + ": expected an object");
        OscillatorParams p;
        for (const auto& [key, value] : o.items()) {
            bool known = false;
            for (const auto& def : oscillator_fields())
                if (key == def.name) {
                    if (!value.is_number())
                        throw ConfigError(ow + "." + key + ": expected a number");
                    p.*(def.member) = value.get<double>() * def.to_si;
                    known = true;
                    break;
                }
            if (!known) throw ConfigError(ow + ": unknown key '" + key + "'");
        }
        config.oscillators.push_back(p);
    }
    const std::size_t n = config.oscillators.size();

    config.coupling = CouplingMatrix::zero(n);
    if (j.contains("coupling_V")) {
        const json& m = j["coupling_V"];
        if (!m.is_array() || m.size() != n)
            throw ConfigError("network.coupling_V: expected an " + std::to_string(n) + "x" +
                              std::to_string(n) + " matrix");
        for (std::size_t i = 0; i < n; ++i) {
            const auto row = get_number_array(m[i], "network.coupling_V[" + std::to_string(i) + "]");
            if (row.size() != n)
                throw ConfigError("network.coupling_V[" + std::to_string(i) +
                                  "]: expected " + std::to_string(n) + " entries");
            for (std::size_t col = 0; col < n; ++col) config.coupling.at(i, col) = row[col];
        }
    }

    if (j.contains("drives")) {
        if (!j["drives"].is_array()) throw ConfigError("network.drives: expected an array");
        for (std::size_t d = 0; d < j["drives"].size(); ++d) {
            const json& dj = j["drives"][d];
            const std::string dw = "network.drives[" + std::to_string(d) + "]";
            check_keys(dj, {"spike_times_s", "pulse_width_s", "delta_ext_V"}, dw);
            ExternalDrive drive;
            if (dj.contains("spike_times_s"))
                drive.spike_times = get_number_array(dj["spike_times_s"], dw + ".spike_times_s");
            drive.pulse_width = get_number(dj, "pulse_width_s", 0.0, dw);
            if (dj.contains("delta_ext_V"))
                drive.delta_ext = get_number_array(dj["delta_ext_V"], dw + ".delta_ext_V");
            config.drives.push_back(std::move(drive));
        }
    }

    validate(config);
    return config;
}

ordered_json network_to_json(const NetworkConfig& config) {
    ordered_json j;
    j["seed"] = config.seed;
    j["oscillators"] = ordered_json::array();
    for (const auto& p : config.oscillators) {
        ordered_json o;
        for (const auto& def : oscillator_fields()) o[def.name] = p.*(def.member) / def.to_si;
        j["oscillators"].push_back(std::move(o));
    }
    const std::size_t n = config.coupling.n;
    j["coupling_V"] = ordered_json::array();
    for (std::size_t i = 0; i < n; ++i) {
        ordered_json row = ordered_json::array();
        for (std::size_t col = 0; col < n; ++col) row.push_back(config.coupling.at(i, col));
        j["coupling_V"].push_back(std::move(row));
    }
    if (!config.drives.empty()) {
        j["drives"] = ordered_json::array();
        for (const auto& d : config.drives) {
            ordered_json dj;
            dj["spike_times_s"] = d.spike_times;
            dj["pulse_width_s"] = d.pulse_width;
            dj["delta_ext_V"] = d.delta_ext;
            j["drives"].push_back(std::move(dj));
        }
    }
    return j;
}

SimSettings sim_settings_from_json(const json& root) {
    SimSettings s;
    if (!root.contains("simulation")) return s;
    const json& j = root["simulation"];
    const std::string where = "simulation";
    check_keys(j, {"warmup_spikes", "record_spikes", "max_sim_seconds", "max_events"}, where);
    s.warmup_spikes = get_count(j, "warmup_spikes", s.warmup_spikes, where);
    s.record_spikes = get_count(j, "record_spikes", s.record_spikes, where);
    s.budget.max_sim_seconds = get_number(j, "max_sim_seconds", 0.0, where);
    s.budget.max_events = get_count(j, "max_events", 0, where);
    if (s.record_spikes < 1) throw ConfigError("simulation.record_spikes: must be >= 1");
    return s;
}

ordered_json sim_settings_to_json(const SimSettings& s) {
    ordered_json j;
    j["warmup_spikes"] = s.warmup_spikes;
    j["record_spikes"] = s.record_spikes;
    j["max_sim_seconds"] = s.budget.max_sim_seconds;
    j["max_events"] = s.budget.max_events;
    return j;
}

MetricConfig metrics_from_json(const json& root) {
    MetricConfig cfg;
    if (!root.contains("metrics")) return cfg;
    const json& j = root["metrics"];
    const std::string where = "metrics";
    check_keys(j, {"epsilon_s", "mu_threshold_percent", "min_oscillations", "max_oscillations"},
               where);
    cfg.epsilon = get_number(j, "epsilon_s", 0.0, where);
    cfg.mu_threshold = get_number(j, "mu_threshold_percent", cfg.mu_threshold, where);
    cfg.min_oscillations = get_count(j, "min_oscillations", cfg.min_oscillations, where);
    cfg.max_oscillations = get_count(j, "max_oscillations", cfg.max_oscillations, where);
    validate(cfg);
    return cfg;
}

ordered_json metrics_to_json(const MetricConfig& cfg) {
    ordered_json j;
    j["epsilon_s"] = cfg.epsilon;
    j["mu_threshold_percent"] = cfg.mu_threshold;
    j["min_oscillations"] = cfg.min_oscillations;
    j["max_oscillations"] = cfg.max_oscillations;
    return j;
}

ReadoutNeuron readout_from_json(const json& j) {
    const std::string where = "readout";
    check_keys(j, {"bias_weight", "input_weights", "feature_weights"}, where);
    ReadoutNeuron neuron;
    neuron.bias_weight = get_number(j, "bias_weight", 0.0, where);
    if (j.contains("input_weights"))
        neuron.input_weights = get_number_array(j["input_weights"], where + ".input_weights");
    if (j.contains("feature_weights"))
        neuron.feature_weights =
            get_number_array(j["feature_weights"], where + ".feature_weights");
    return neuron;
}

ordered_json readout_to_json(const ReadoutNeuron& neuron) {
    ordered_json j;
    j["bias_weight"] = neuron.bias_weight;
    j["input_weights"] = neuron.input_weights;
    j["feature_weights"] = neuron.feature_weights;
    return j;
}

namespace {

std::pair<std::size_t, std::size_t> observed_pair_from_json(const json& root,
                                                            std::size_t n_osc) {
    std::pair<std::size_t, std::size_t> pair{0, 1};
    if (root.contains("observed_pair")) {
        const json& p = root["observed_pair"];
        if (!p.is_array() || p.size() != 2 || !is_nonnegative_integer(p[0]) ||
            !is_nonnegative_integer(p[1]))
            throw ConfigError("observed_pair: expected [i, j]");
        pair = {p[0].get<std::size_t>(), p[1].get<std::size_t>()};
    }
    if (pair.first >= n_osc || pair.second >= n_osc || pair.first == pair.second)
        throw ConfigError("observed_pair: must name two distinct oscillators in range");
    return pair;
}

} // namespace

LoadedPipeline pipeline_from_json(const json& root) {
    check_keys(root,
               {"network", "simulation", "metrics", "encoding", "observed_pair", "readout",
                "sweep"},
               "config");
    if (!root.contains("network")) throw ConfigError("config: missing 'network' section");
    LoadedPipeline loaded;
    PipelineConfig& p = loaded.config;
    p.network = network_from_json(root["network"]);
    const SimSettings sim = sim_settings_from_json(root);
    p.warmup_spikes = sim.warmup_spikes;
    p.record_spikes = sim.record_spikes;
    p.metrics = metrics_from_json(root);
    p.observed_pair = observed_pair_from_json(root, p.network.oscillators.size());

    if (!root.contains("encoding")) throw ConfigError("config: missing 'encoding' section");
    const json& enc = root["encoding"];
    check_keys(enc, {"offsets_uA", "gains_uA"}, "encoding");
    if (!enc.contains("offsets_uA") || !enc.contains("gains_uA"))
        throw ConfigError("encoding: offsets_uA and gains_uA are required");
    for (double v : get_number_array(enc["offsets_uA"], "encoding.offsets_uA"))
        p.encoding.offsets.push_back(v * 1e-6);
    for (double v : get_number_array(enc["gains_uA"], "encoding.gains_uA"))
        p.encoding.gains.push_back(v * 1e-6);
    if (p.encoding.offsets.size() != p.encoding.gains.size())
        throw ConfigError("encoding: offsets_uA and gains_uA must have equal length");
    if (p.encoding.offsets.size() > p.network.oscillators.size())
        throw ConfigError("encoding: more channels than oscillators");

    if (root.contains("readout")) {
        p.readout = readout_from_json(root["readout"]);
        loaded.has_readout = true;
    }
    return loaded;
}

ordered_json pipeline_to_json(const PipelineConfig& config, bool include_readout) {
    ordered_json j;
    j["network"] = network_to_json(config.network);
    SimSettings sim;
    sim.warmup_spikes = config.warmup_spikes;
    sim.record_spikes = config.record_spikes;
    j["simulation"] = sim_settings_to_json(sim);
    j["metrics"] = metrics_to_json(config.metrics);
    ordered_json enc;
    enc["offsets_uA"] = ordered_json::array();
    enc["gains_uA"] = ordered_json::array();
    for (double v : config.encoding.offsets) enc["offsets_uA"].push_back(v / 1e-6);
    for (double v : config.encoding.gains) enc["gains_uA"].push_back(v / 1e-6);
    j["encoding"] = std::move(enc);
    j["observed_pair"] = {config.observed_pair.first, config.observed_pair.second};
    if (include_readout) j["readout"] = readout_to_json(config.readout);
    return j;
}

SweepSpec sweep_from_json(const json& root) {
    if (!root.contains("network")) throw ConfigError("config: missing 'network' section");
    if (!root.contains("sweep")) throw ConfigError("config: missing 'sweep' section");
    SweepSpec spec;
    spec.template_config = network_from_json(root["network"]);
    const SimSettings sim = sim_settings_from_json(root);
    spec.warmup_spikes = sim.warmup_spikes;
    spec.record_spikes = sim.record_spikes;
    spec.metric_cfg = metrics_from_json(root);

    const json& s = root["sweep"];
    check_keys(s, {"axis_x", "axis_y", "observed_pair", "base_seed"}, "sweep");
    auto parse_axis = [&](const char* key) {
        if (!s.contains(key)) throw ConfigError(std::string("sweep: missing '") + key + "'");
        const json& a = s[key];
        const std::string where = std::string("sweep.") + key;
        check_keys(a, {"path", "min", "max", "steps"}, where);
        AxisSpec axis;
        if (!a.contains("path") || !a["path"].is_string())
            throw ConfigError(where + ".path: expected a string");
        axis.path = a["path"].get<std::string>();
        axis.min = get_number(a, "min", 0.0, where);
        axis.max = get_number(a, "max", 0.0, where);
        axis.steps = get_count(a, "steps", 0, where);
        return axis;
    };
    spec.axis_x = parse_axis("axis_x");
    spec.axis_y = parse_axis("axis_y");
    spec.observed_pair =
        observed_pair_from_json(s, spec.template_config.oscillators.size());
    spec.base_seed = spec.template_config.seed;
    if (s.contains("base_seed")) {
        if (!is_nonnegative_integer(s["base_seed"]))
            throw ConfigError("sweep.base_seed: expected an unsigned integer");
        spec.base_seed = s["base_seed"].get<std::uint64_t>();
    }
    validate(spec);
    return spec;
}

ordered_json sweep_to_json(const SweepSpec& spec) {
    ordered_json j;
    j["network"] = network_to_json(spec.template_config);
    SimSettings sim;
    sim.warmup_spikes = spec.warmup_spikes;
    sim.record_spikes = spec.record_spikes;
    j["simulation"] = sim_settings_to_json(sim);
    j["metrics"] = metrics_to_json(spec.metric_cfg);
    auto axis_json = [](const AxisSpec& a) {
        ordered_json out;
        out["path"] = a.path;
        out["min"] = a.min;
        out["max"] = a.max;
        out["steps"] = a.steps;
        return out;
    };
    j["sweep"]["axis_x"] = axis_json(spec.axis_x);
    j["sweep"]["axis_y"] = axis_json(spec.axis_y);
    j["sweep"]["observed_pair"] = {spec.observed_pair.first, spec.observed_pair.second};
    j["sweep"]["base_seed"] = spec.base_seed;
    return j;
}

// ---- Spike-train files ---------------------------------------------------

void write_spike_train_file(const std::filesystem::path& path, const SpikeTrain& train,
                            const std::vector<std::string>& header_comments) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write spike train file: " + path.string());
    out << "# " << kToolName << " spike train (seconds, one timestamp per line)\n";
    out << "# oscillator: " << train.oscillator_index << "\n";
    for (const auto& line : header_comments) out << "# " << line << "\n";
    for (double t : train.times) out << format_double(t) << "\n";
    if (!out) throw IoError("failed writing spike train file: " + path.string());
}

std::vector<double> read_spike_times_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open spike train file: " + path.string());
    std::vector<double> times;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        if (line[begin] == '#') continue;
        std::size_t end = line.find_last_not_of(" \t\r");
        const std::string token = line.substr(begin, end - begin + 1);
        const double t = parse_double_token(
            token, path.string() + ":" + std::to_string(line_no));
        if (!times.empty() && !(t > times.back()))
            throw IoError(path.string() + ":" + std::to_string(line_no) +
                          ": timestamps must be strictly increasing");
        times.push_back(t);
    }
    return times;
}

// ---- Arnold map serialization ---------------------------------------------

void write_map_csv(const std::filesystem::path& path, const ArnoldMap& map) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write map CSV: " + path.string());
    out << "x_value,y_value,m_i,m_j,shr_value,mu_percent,synchronized,error_flag\n";
    for (const auto& cell : map.cells) {
        const bool err = !cell.error.empty();
        out << format_double(cell.x_value) << ',' << format_double(cell.y_value) << ','
            << (err ? 0 : cell.metrics.m_i) << ',' << (err ? 0 : cell.metrics.m_j) << ','
            << format_double(err ? 0.0 : cell.metrics.shr_value) << ','
            << format_double(err ? 0.0 : cell.metrics.mu) << ','
            << (err ? 0 : (cell.metrics.synchronized ? 1 : 0)) << ',' << (err ? 1 : 0)
            << "\n";
    }
    if (!out) throw IoError("failed writing map CSV: " + path.string());
}

std::vector<MapCsvRow> read_map_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open map CSV: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw IoError(path.string() + ": empty file");
    if (line != "x_value,y_value,m_i,m_j,shr_value,mu_percent,synchronized,error_flag")
        throw IoError(path.string() + ":1: unexpected header");
    std::vector<MapCsvRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 8)
            throw IoError(path.string() + ":" + std::to_string(line_no) +
                          ": expected 8 fields");
        const std::string where = path.string() + ":" + std::to_string(line_no);
        MapCsvRow row;
        row.x_value = parse_double_token(fields[0], where);
        row.y_value = parse_double_token(fields[1], where);
        row.m_i = static_cast<std::uint64_t>(parse_double_token(fields[2], where));
        row.m_j = static_cast<std::uint64_t>(parse_double_token(fields[3], where));
        row.shr_value = parse_double_token(fields[4], where);
        row.mu_percent = parse_double_token(fields[5], where);
        row.synchronized = parse_double_token(fields[6], where) != 0.0;
        row.error_flag = parse_double_token(fields[7], where) != 0.0;
        rows.push_back(row);
    }
    return rows;
}

int pgm_gray(const MapCell& cell) {
    if (!cell.error.empty()) return 255;
    if (!cell.metrics.synchronized) return 0;
    const double clamped = std::min(8.0, std::max(0.125, cell.metrics.shr_value));
    const double level = (std::log2(clamped) + 3.0) / 6.0;
    return 1 + static_cast<int>(std::lround(253.0 * level));
}

void write_map_pgm(const std::filesystem::path& path, const ArnoldMap& map) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write map PGM: " + path.string());
    out << "P2\n";
    out << "# " << kToolName << " arnold map; rows in ascending y, columns in ascending x\n";
    out << "# gray 0 = unsynchronized, 255 = cell error\n";
    out << "# synchronized: gray = 1 + round(253 * (log2(clamp(shr, 1/8, 8)) + 3) / 6)\n";
    out << map.nx << " " << map.ny << "\n255\n";
    for (std::size_t iy = 0; iy < map.ny; ++iy) {
        for (std::size_t ix = 0; ix < map.nx; ++ix) {
            out << pgm_gray(map.at(ix, iy));
            out << (ix + 1 == map.nx ? '\n' : ' ');
        }
    }
    if (!out) throw IoError("failed writing map PGM: " + path.string());
}

// ---- Run manifest -----------------------------------------------------

std::uint64_t fnv1a64(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < size; ++i) {
        hash ^= bytes[i];
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::uint64_t file_digest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read back artifact for digest: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();
    return fnv1a64(bytes.data(), bytes.size());
}

namespace {

std::string hex_u64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

void write_manifest(const std::filesystem::path& out_dir, const std::string& command,
                    const ordered_json& resolved_config, std::uint64_t seed,
                    const std::vector<std::filesystem::path>& artifacts) {
    ordered_json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["command"] = command;
    j["created_utc"] = utc_timestamp();
    j["seed"] = seed;
    j["config"] = resolved_config;
    j["outputs"] = ordered_json::array();
    for (const auto& artifact : artifacts) {
        ordered_json entry;
        entry["path"] = artifact.filename().string();
        entry["bytes"] = std::filesystem::file_size(artifact);
        entry["fnv1a64"] = hex_u64(file_digest(artifact));
        j["outputs"].push_back(std::move(entry));
    }
    const auto path = out_dir / "manifest.json";
    std::ofstream out(path);
    if (!out) throw IoError("cannot write manifest: " + path.string());
    out << j.dump(2) << "\n";
    if (!out) throw IoError("failed writing manifest: " + path.string());
}

} // namespace oscres
