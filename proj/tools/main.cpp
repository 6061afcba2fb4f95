// Command-line front end: simulate | metrics | sweep | xor | train.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oscres/errors.hpp"
#include "oscres/io.hpp"
#include "oscres/metrics.hpp"
#include "oscres/param_path.hpp"
#include "oscres/reservoir.hpp"
#include "oscres/simulate.hpp"
#include "oscres/sweep.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    unsigned workers = 1;
    std::optional<std::uint64_t> seed;
};

fs::path ensure_out_dir(const std::string& dir) {
    fs::path p(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw oscres::IoError("cannot create output directory: " + dir);
    return p;
}

int run_simulate(const CommonOpts& opts, std::optional<std::size_t> warmup,
                 std::optional<std::size_t> record) {
    const auto root = oscres::load_json_file(opts.config_path);
    if (!root.contains("network"))
        throw oscres::ConfigError("config: missing 'network' section");
    oscres::NetworkConfig config = oscres::network_from_json(root["network"]);
    oscres::SimSettings settings = oscres::sim_settings_from_json(root);
    if (opts.seed) config.seed = *opts.seed;
    if (warmup) settings.warmup_spikes = *warmup;
    if (record) settings.record_spikes = *record;

    const auto trains = oscres::simulate(config, settings.warmup_spikes,
                                         settings.record_spikes, settings.budget);

    const fs::path out = ensure_out_dir(opts.out_dir);
    std::vector<fs::path> artifacts;
    for (const auto& train : trains) {
        const fs::path path =
            out / ("spikes_osc" + std::to_string(train.oscillator_index) + ".txt");
        oscres::write_spike_train_file(path, train,
                                       {"seed: " + std::to_string(config.seed)});
        artifacts.push_back(path);
        const double span = train.times.back() - train.times.front();
        std::cout << "oscillator " << train.oscillator_index << ": " << train.times.size()
                  << " spikes, mean rate "
                  << static_cast<double>(train.times.size() - 1) / span << " Hz\n";
    }
    ordered_json resolved;
    resolved["network"] = oscres::network_to_json(config);
    resolved["simulation"] = oscres::sim_settings_to_json(settings);
    oscres::write_manifest(out, "simulate", resolved, config.seed, artifacts);
    return 0;
}

int run_metrics(const std::vector<std::string>& files, const CommonOpts& opts) {
    oscres::MetricConfig cfg;
    if (!opts.config_path.empty())
        cfg = oscres::metrics_from_json(oscres::load_json_file(opts.config_path));

    std::vector<std::vector<double>> trains;
    trains.reserve(files.size());
    for (const auto& f : files) trains.push_back(oscres::read_spike_times_file(f));

    const fs::path out = ensure_out_dir(opts.out_dir);
    const fs::path csv_path = out / "metrics.csv";
    std::ofstream csv(csv_path);
    if (!csv) throw oscres::IoError("cannot write " + csv_path.string());
    csv << "train_i,train_j,m_i,m_j,shr_value,mu_percent,synchronized\n";

    std::cout << std::left << std::setw(6) << "i" << std::setw(6) << "j" << std::setw(10)
              << "SHR(j:i)" << std::setw(12) << "shr_value" << std::setw(10) << "mu_%"
              << "synchronized\n";
    for (std::size_t i = 0; i < trains.size(); ++i) {
        for (std::size_t j = i + 1; j < trains.size(); ++j) {
            const auto m = oscres::compute_shr_mu(trains[i], trains[j], cfg);
            csv << i << ',' << j << ',' << m.m_i << ',' << m.m_j << ','
                << oscres::format_double(m.shr_value) << ',' << oscres::format_double(m.mu)
                << ',' << (m.synchronized ? 1 : 0) << "\n";
            std::ostringstream ratio;
            ratio << m.m_j << ":" << m.m_i;
            std::cout << std::left << std::setw(6) << i << std::setw(6) << j << std::setw(10)
                      << ratio.str() << std::setw(12) << m.shr_value << std::setw(10) << m.mu
                      << (m.synchronized ? "yes" : "no") << "\n";
        }
    }
    ordered_json resolved;
    resolved["metrics"] = oscres::metrics_to_json(cfg);
    resolved["inputs"] = files;
    oscres::write_manifest(out, "metrics", resolved, 0, {csv_path});
    return 0;
}

int run_sweep(const CommonOpts& opts) {
    oscres::SweepSpec spec = oscres::sweep_from_json(oscres::load_json_file(opts.config_path));
    if (opts.seed) spec.base_seed = *opts.seed;

    std::mutex io_mutex;
    const auto progress = [&](std::size_t done, std::size_t total) {
        const std::size_t step = std::max<std::size_t>(1, total / 20);
        if (done % step == 0 || done == total) {
            std::lock_guard<std::mutex> lock(io_mutex);
            std::cerr << "sweep: " << done << "/" << total << " cells\n";
        }
    };
    const oscres::ArnoldMap map = oscres::arnold_sweep(spec, opts.workers, progress);

    const fs::path out = ensure_out_dir(opts.out_dir);
    const fs::path csv_path = out / "map.csv";
    const fs::path pgm_path = out / "map.pgm";
    oscres::write_map_csv(csv_path, map);
    oscres::write_map_pgm(pgm_path, map);

    const auto tally = oscres::count_sync_states(map);
    std::cout << "synchronous states N_s = " << tally.n_s << "\n";
    for (const auto& [state, count] : tally.per_state)
        std::cout << "  " << state.second << ":" << state.first << "  (" << count
                  << " cells)\n";
    std::size_t failed = 0;
    for (const auto& cell : map.cells)
        if (!cell.error.empty()) ++failed;
    if (failed) std::cout << failed << " cells failed; see error_flag in map.csv\n";

    oscres::write_manifest(out, "sweep", oscres::sweep_to_json(spec), spec.base_seed,
                           {csv_path, pgm_path});
    return 0;
}

int run_xor(const CommonOpts& opts, bool force_train) {
    auto loaded = oscres::pipeline_from_json(oscres::load_json_file(opts.config_path));
    oscres::PipelineConfig& pipeline = loaded.config;
    if (opts.seed) pipeline.network.seed = *opts.seed;

    // Features are simulated once per case and reused for training/report.
    std::vector<oscres::XorRow> rows;
    for (const auto& xc : oscres::kXorTruthTable) {
        const std::vector<double> inputs{static_cast<double>(xc.x),
                                         static_cast<double>(xc.y)};
        const auto currents = oscres::encode_inputs(inputs, pipeline.encoding);
        oscres::NetworkConfig net = pipeline.network;
        for (std::size_t k = 0; k < currents.size(); ++k)
            net.oscillators[k].supply_current = currents[k];
        const double z =
            oscres::reservoir_feature(net, pipeline.observed_pair, pipeline.metrics,
                                      pipeline.warmup_spikes, pipeline.record_spikes);
        rows.push_back(oscres::XorRow{xc.x, xc.y, currents[0], currents[1], z, 0.0, 0});
    }

    const bool trained = force_train || !loaded.has_readout;
    if (trained) {
        std::vector<oscres::TrainingExample> dataset;
        for (std::size_t k = 0; k < rows.size(); ++k)
            dataset.push_back({{static_cast<double>(rows[k].x), static_cast<double>(rows[k].y)},
                               {rows[k].shr},
                               oscres::kXorTruthTable[k].expected_q});
        const auto report = oscres::train_readout(dataset);
        pipeline.readout = report.neuron;
        std::cout << "trained readout: " << report.correct << "/" << report.total
                  << " correct after " << report.epochs_run << " epochs\n";
    }

    std::size_t correct = 0;
    std::cout << std::left << std::setw(4) << "X" << std::setw(4) << "Y" << std::setw(12)
              << "I_p1_uA" << std::setw(12) << "I_p2_uA" << std::setw(12) << "SHR"
              << std::setw(12) << "sigma" << std::setw(4) << "Q" << "expected\n";
    for (std::size_t k = 0; k < rows.size(); ++k) {
        auto& row = rows[k];
        const std::vector<double> inputs{static_cast<double>(row.x),
                                         static_cast<double>(row.y)};
        row.sigma = oscres::readout_sum(inputs, {row.shr}, pipeline.readout);
        row.q = oscres::activation(row.sigma);
        if (row.q == oscres::kXorTruthTable[k].expected_q) ++correct;
        std::cout << std::left << std::setw(4) << row.x << std::setw(4) << row.y
                  << std::setw(12) << row.current_1 * 1e6 << std::setw(12)
                  << row.current_2 * 1e6 << std::setw(12) << row.shr << std::setw(12)
                  << row.sigma << std::setw(4) << row.q
                  << oscres::kXorTruthTable[k].expected_q << "\n";
    }
    std::cout << "truth table: " << correct << "/4 correct\n";

    const fs::path out = ensure_out_dir(opts.out_dir);
    const fs::path report_path = out / "xor_report.csv";
    {
        std::ofstream csv(report_path);
        if (!csv) throw oscres::IoError("cannot write " + report_path.string());
        csv << "x,y,i_p1_uA,i_p2_uA,shr,sigma,q\n";
        for (const auto& row : rows)
            csv << row.x << ',' << row.y << ',' << oscres::format_double(row.current_1 * 1e6)
                << ',' << oscres::format_double(row.current_2 * 1e6) << ','
                << oscres::format_double(row.shr) << ',' << oscres::format_double(row.sigma)
                << ',' << row.q << "\n";
    }
    std::vector<fs::path> artifacts{report_path};
    if (trained) {
        const fs::path weights_path = out / "weights.json";
        std::ofstream wout(weights_path);
        if (!wout) throw oscres::IoError("cannot write " + weights_path.string());
        wout << oscres::readout_to_json(pipeline.readout).dump(2) << "\n";
        artifacts.push_back(weights_path);
    }
    oscres::write_manifest(out, "xor", oscres::pipeline_to_json(pipeline, true),
                           pipeline.network.seed, artifacts);
    return correct == 4 ? 0 : 3;
}

struct Dataset {
    std::vector<oscres::TrainingExample> examples;
    std::size_t n_inputs = 0;
    std::size_t n_features = 0;
};

Dataset read_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw oscres::IoError("cannot open dataset: " + path);
    std::string line;
    if (!std::getline(in, line)) throw oscres::IoError(path + ": empty file");

    Dataset ds;
    {
        std::stringstream ss(line);
        std::string col;
        std::vector<std::string> names;
        while (std::getline(ss, col, ',')) names.push_back(col);
        if (names.empty() || names.back() != "label")
            throw oscres::IoError(path + ":1: last column must be 'label'");
        for (std::size_t k = 0; k + 1 < names.size(); ++k) {
            if (names[k].rfind("input_", 0) == 0 && ds.n_features == 0)
                ++ds.n_inputs;
            else if (names[k].rfind("feature_", 0) == 0)
                ++ds.n_features;
            else
                throw oscres::IoError(path + ":1: columns must be input_*, feature_*, label");
        }
    }

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<double> values;
        while (std::getline(ss, field, ',')) {
            double v = 0.0;
            std::stringstream fs_(field);
            if (!(fs_ >> v))
                throw oscres::IoError(path + ":" + std::to_string(line_no) + ": '" + field +
                                      "' is not a number");
            values.push_back(v);
        }
        if (values.size() != ds.n_inputs + ds.n_features + 1)
            throw oscres::IoError(path + ":" + std::to_string(line_no) +
                                  ": wrong field count");
        oscres::TrainingExample ex;
        ex.inputs.assign(values.begin(),
                         values.begin() + static_cast<std::ptrdiff_t>(ds.n_inputs));
        ex.features.assign(values.begin() + static_cast<std::ptrdiff_t>(ds.n_inputs),
                           values.end() - 1);
        const double label = values.back();
        if (label != 0.0 && label != 1.0)
            throw oscres::IoError(path + ":" + std::to_string(line_no) +
                                  ": label must be 0 or 1");
        ex.label = static_cast<int>(label);
        ds.examples.push_back(std::move(ex));
    }
    if (ds.examples.empty()) throw oscres::IoError(path + ": no data rows");
    return ds;
}

int run_train(const std::string& dataset_path, const CommonOpts& opts,
              std::size_t max_epochs) {
    const Dataset ds = read_dataset_csv(dataset_path);
    const auto report = oscres::train_readout(ds.examples, max_epochs);
    std::cout << "accuracy: " << report.correct << "/" << report.total << " ("
              << (report.converged ? "converged" : "epoch budget reached") << " after "
              << report.epochs_run << " epochs)\n";
    std::cout << oscres::readout_to_json(report.neuron).dump(2) << "\n";

    const fs::path out = ensure_out_dir(opts.out_dir);
    const fs::path weights_path = out / "weights.json";
    std::ofstream wout(weights_path);
    if (!wout) throw oscres::IoError("cannot write " + weights_path.string());
    wout << oscres::readout_to_json(report.neuron).dump(2) << "\n";
    wout.close();

    ordered_json resolved;
    resolved["dataset"] = dataset_path;
    resolved["max_epochs"] = max_epochs;
    oscres::write_manifest(out, "train", resolved, 0, {weights_path});
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"reservoir computing on coupled relaxation oscillators"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(oscres::kToolVersion));

    CommonOpts opts;
    std::optional<std::size_t> warmup_override, record_override;
    std::vector<std::string> metric_files;
    std::string dataset_path;
    std::size_t max_epochs = 1000;
    bool force_train = false;

    auto add_common = [&](CLI::App* cmd, bool config_required) {
        auto* c = cmd->add_option("--config", opts.config_path, "configuration file (JSON)");
        if (config_required) c->required();
        cmd->add_option("--out", opts.out_dir, "output directory (default: .)");
        cmd->add_option("--workers", opts.workers, "worker threads");
        cmd->add_option("--seed", opts.seed, "override the configured seed");
    };

    auto* sim = app.add_subcommand("simulate", "run a network and write spike trains");
    add_common(sim, true);
    sim->add_option("--warmup", warmup_override, "override warmup_spikes");
    sim->add_option("--record", record_override, "override record_spikes");

    auto* met = app.add_subcommand("metrics", "pairwise SHR and mu from spike-train files");
    met->add_option("files", metric_files, "spike-train files (two or more)")
        ->required()
        ->expected(2, -1);
    add_common(met, false);

    auto* swp = app.add_subcommand("sweep", "arnold-tongue map over a parameter grid");
    add_common(swp, true);

    auto* xorc = app.add_subcommand("xor", "run the XOR pipeline end to end");
    add_common(xorc, true);
    xorc->add_flag("--train", force_train, "retrain the readout even if weights are given");

    auto* trn = app.add_subcommand("train", "train readout weights on a dataset CSV");
    trn->add_option("dataset", dataset_path, "CSV with input_*, feature_*, label columns")
        ->required();
    add_common(trn, false);
    trn->add_option("--max-epochs", max_epochs, "perceptron epoch budget");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (sim->parsed()) return run_simulate(opts, warmup_override, record_override);
        if (met->parsed()) return run_metrics(metric_files, opts);
        if (swp->parsed()) return run_sweep(opts);
        if (xorc->parsed()) return run_xor(opts, force_train);
        if (trn->parsed()) return run_train(dataset_path, opts, max_epochs);
    } catch (const oscres::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.category());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
