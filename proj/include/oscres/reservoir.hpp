#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "oscres/metrics.hpp"
#include "oscres/params.hpp"
#include "oscres/simulate.hpp"

namespace oscres {

// Affine map from task inputs to supply currents: current[k] = offsets[k] +
// gains[k] * inputs[k]. All values in amperes.
struct InputEncoding {
    std::vector<double> offsets;
    std::vector<double> gains;
};

// Throws ConfigError when arities mismatch or a produced current is <= 0.
std::vector<double> encode_inputs(const std::vector<double>& inputs,
                                  const InputEncoding& enc);

struct ReadoutNeuron {
    double bias_weight = 0.0;
    std::vector<double> input_weights;
    std::vector<double> feature_weights;
};

double readout_sum(const std::vector<double>& inputs, const std::vector<double>& features,
                   const ReadoutNeuron& neuron);

// Threshold activation: 1 when sigma < 0, else 0.
inline int activation(double sigma) { return sigma < 0.0 ? 1 : 0; }

struct XorCase {
    int x;
    int y;
    int expected_q;
};

inline constexpr std::array<XorCase, 4> kXorTruthTable{{
    {1, 1, 0},
    {1, 0, 1},
    {0, 1, 1},
    {0, 0, 0},
}};

// Simulates the network and returns the SHR feature Z for the observed pair
// (0 when unsynchronized).
double reservoir_feature(const NetworkConfig& config,
                         std::pair<std::size_t, std::size_t> pair,
                         const MetricConfig& metric_cfg, std::size_t warmup_spikes,
                         std::size_t record_spikes);

// Everything needed to evaluate the XOR pipeline end to end.
struct PipelineConfig {
    InputEncoding encoding;  // two channels driving oscillators 0 and 1
    NetworkConfig network;
    MetricConfig metrics;
    std::pair<std::size_t, std::size_t> observed_pair{0, 1};
    std::size_t warmup_spikes = 50;
    std::size_t record_spikes = 1000;
    ReadoutNeuron readout;
};

struct XorRow {
    int x;
    int y;
    double current_1;  // amperes
    double current_2;
    double shr;
    double sigma;
    int q;
};

// Readout-only evaluation with an externally supplied feature value; used to
// check the neuron in isolation from the simulation.
XorRow xor_row_from_feature(int x, int y, double feature, const InputEncoding& enc,
                            const ReadoutNeuron& neuron);

// Full pipeline: encode -> simulate -> SHR feature -> readout -> activation.
XorRow run_xor(const PipelineConfig& pipeline, int x, int y);

struct TrainingExample {
    std::vector<double> inputs;
    std::vector<double> features;
    int label;  // 0 or 1
};

struct TrainReport {
    ReadoutNeuron neuron;
    std::size_t correct = 0;
    std::size_t total = 0;
    std::size_t epochs_run = 0;
    bool converged = false;  // zero training error reached
};

// Perceptron on the augmented vector (1, inputs, features) with the threshold
// activation above. Learning rate 1, weights start at zero, samples visited
// in dataset order. Returns the earliest weights achieving the best training
// accuracy when the budget runs out before convergence.
TrainReport train_readout(const std::vector<TrainingExample>& dataset,
                          std::size_t max_epochs = 1000);

} // namespace oscres
