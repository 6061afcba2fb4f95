#include "oscres/reservoir.hpp"

#include <string>

#include "oscres/errors.hpp"

namespace oscres {

std::vector<double> encode_inputs(const std::vector<double>& inputs,
                                  const InputEncoding& enc) {
    if (enc.offsets.size() != enc.gains.size())
        throw ConfigError("encoding: offsets and gains must have equal arity");
    if (inputs.size() != enc.offsets.size())
        throw ConfigError("encoding: got " + std::to_string(inputs.size()) +
                          " inputs for arity " + std::to_string(enc.offsets.size()));
    std::vector<double> currents(inputs.size());
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        currents[k] = enc.offsets[k] + enc.gains[k] * inputs[k];
        if (!(currents[k] > 0.0))
            throw ConfigError("encoding: channel " + std::to_string(k) +
                              " produced a non-positive current");
    }
    return currents;
}

double readout_sum(const std::vector<double>& inputs, const std::vector<double>& features,
                   const ReadoutNeuron& neuron) {
    if (inputs.size() != neuron.input_weights.size() ||
        features.size() != neuron.feature_weights.size())
        throw ConfigError("readout: weight arity does not match inputs/features");
    double sigma = neuron.bias_weight;
    for (std::size_t k = 0; k < inputs.size(); ++k)
        sigma += neuron.input_weights[k] * inputs[k];
    for (std::size_t m = 0; m < features.size(); ++m)
        sigma += neuron.feature_weights[m] * features[m];
    return sigma;
}

double reservoir_feature(const NetworkConfig& config,
                         std::pair<std::size_t, std::size_t> pair,
                         const MetricConfig& metric_cfg, std::size_t warmup_spikes,
                         std::size_t record_spikes) {
    if (pair.first >= config.oscillators.size() || pair.second >= config.oscillators.size())
        throw ConfigError("observed pair indices out of range");
    const auto trains = simulate(config, warmup_spikes, record_spikes);
    const SyncMetrics m = compute_shr_mu(trains[pair.first], trains[pair.second], metric_cfg);
    return m.shr_value;
}

XorRow xor_row_from_feature(int x, int y, double feature, const InputEncoding& enc,
                            const ReadoutNeuron& neuron) {
    const std::vector<double> inputs{static_cast<double>(x), static_cast<double>(y)};
    const auto currents = encode_inputs(inputs, enc);
    const double sigma = readout_sum(inputs, {feature}, neuron);
    return XorRow{x, y, currents[0], currents[1], feature, sigma, activation(sigma)};
}

XorRow run_xor(const PipelineConfig& pipeline, int x, int y) {
    const std::vector<double> inputs{static_cast<double>(x), static_cast<double>(y)};
    const auto currents = encode_inputs(inputs, pipeline.encoding);
    NetworkConfig net = pipeline.network;
    if (net.oscillators.size() < currents.size())
        throw ConfigError("pipeline: network has fewer oscillators than encoding channels");
    for (std::size_t k = 0; k < currents.size(); ++k)
        net.oscillators[k].supply_current = currents[k];
    const double z = reservoir_feature(net, pipeline.observed_pair, pipeline.metrics,
                                       pipeline.warmup_spikes, pipeline.record_spikes);
    const double sigma = readout_sum(inputs, {z}, pipeline.readout);
    return XorRow{x, y, currents[0], currents[1], z, sigma, activation(sigma)};
}

namespace {

std::size_t count_correct(const std::vector<TrainingExample>& dataset,
                          const ReadoutNeuron& neuron) {
    std::size_t correct = 0;
    for (const auto& ex : dataset)
        if (activation(readout_sum(ex.inputs, ex.features, neuron)) == ex.label) ++correct;
    return correct;
}

} // namespace

TrainReport train_readout(const std::vector<TrainingExample>& dataset,
                          std::size_t max_epochs) {
    if (dataset.empty()) throw ConfigError("train_readout: empty dataset");
    const std::size_t n_in = dataset.front().inputs.size();
    const std::size_t n_feat = dataset.front().features.size();
    for (const auto& ex : dataset) {
        if (ex.inputs.size() != n_in || ex.features.size() != n_feat)
            throw ConfigError("train_readout: inconsistent example arities");
        if (ex.label != 0 && ex.label != 1)
            throw ConfigError("train_readout: labels must be 0 or 1");
    }

    ReadoutNeuron w;
    w.input_weights.assign(n_in, 0.0);
    w.feature_weights.assign(n_feat, 0.0);

    TrainReport report;
    report.total = dataset.size();
    report.neuron = w;
    report.correct = count_correct(dataset, w);

    for (std::size_t epoch = 0; epoch < max_epochs; ++epoch) {
        std::size_t errors = 0;
        for (const auto& ex : dataset) {
            const double sigma = readout_sum(ex.inputs, ex.features, w);
            const int q = activation(sigma);
            if (q == ex.label) continue;
            ++errors;
            // Larger sigma pushes the output toward 0, so move the weights
            // by (q - label) rather than the textbook (label - q).
            const double step = static_cast<double>(q - ex.label);
            w.bias_weight += step;
            for (std::size_t k = 0; k < n_in; ++k) w.input_weights[k] += step * ex.inputs[k];
            for (std::size_t m = 0; m < n_feat; ++m)
                w.feature_weights[m] += step * ex.features[m];
        }
        report.epochs_run = epoch + 1;
        const std::size_t correct = count_correct(dataset, w);
        if (correct > report.correct) {
            report.correct = correct;
            report.neuron = w;
        }
        if (errors == 0) {
            report.converged = true;
            report.neuron = w;
            report.correct = dataset.size();
            break;
        }
    }
    return report;
}

} // namespace oscres
