#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "oscres/metrics.hpp"
#include "oscres/param_path.hpp"
#include "oscres/params.hpp"
#include "oscres/reservoir.hpp"

namespace oscres {

struct AxisSpec {
    std::string path;   // see ParamPath
    double min = 0.0;   // in the path's file units
    double max = 0.0;
    std::size_t steps = 2;
};

struct SweepSpec {
    AxisSpec axis_x;
    AxisSpec axis_y;
    NetworkConfig template_config;
    MetricConfig metric_cfg;
    std::pair<std::size_t, std::size_t> observed_pair{0, 1};
    std::uint64_t base_seed = 0;
    std::size_t warmup_spikes = 50;
    std::size_t record_spikes = 1000;
};

void validate(const SweepSpec& spec);

// Inclusive linear spacing over [min, max].
double axis_value(const AxisSpec& axis, std::size_t index);

struct MapCell {
    double x_value = 0.0;  // axis units
    double y_value = 0.0;
    SyncMetrics metrics;
    std::string error;     // nonempty marks a failed cell; metrics are then void
};

struct ArnoldMap {
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::vector<MapCell> cells;  // row-major, y outer

    const MapCell& at(std::size_t ix, std::size_t iy) const { return cells[iy * nx + ix]; }
    MapCell& at(std::size_t ix, std::size_t iy) { return cells[iy * nx + ix]; }
};

using SweepProgress = std::function<void(std::size_t done, std::size_t total)>;

// Evaluates every grid cell: instantiate the template with the axis values,
// seed it with derive_cell_seed(base_seed, ix, iy), simulate, and compute
// metrics for the observed pair. Cells are independent, so the result is
// bit-identical for any worker count and any scheduling order. Per-cell
// failures land in the cell's error marker, never lost.
ArnoldMap arnold_sweep(const SweepSpec& spec, unsigned workers = 1,
                       const SweepProgress& progress = nullptr);

struct SyncStateTally {
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> per_state;
    std::size_t n_s = 0;  // distinct reduced patterns among synchronized cells
};

SyncStateTally count_sync_states(const ArnoldMap& map);

struct XorOperatingPoint {
    bool found = false;
    std::size_t ix_low = 0, ix_high = 0, iy_low = 0, iy_high = 0;
    InputEncoding encoding;            // amperes; channel 0 = x axis, 1 = y axis
    ReadoutNeuron readout;
    std::vector<double> features;      // Z at (0,0), (1,0), (0,1), (1,1)
    std::size_t rectangles_tried = 0;
};

// Searches axis-aligned rectangles (two x-levels by two y-levels) whose SHR
// features admit a zero-error XOR readout; candidates are ranked by the
// separation margin |Z00 + Z11 - Z10 - Z01| and verified with train_readout.
// Both axes must sweep oscillator supply currents.
XorOperatingPoint find_xor_operating_points(const ArnoldMap& map, const SweepSpec& spec);

} // namespace oscres
