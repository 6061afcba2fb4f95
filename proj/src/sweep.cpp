#include "oscres/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <tuple>

#include "oscres/errors.hpp"
#include "oscres/rng.hpp"
#include "oscres/simulate.hpp"

namespace oscres {

void validate(const SweepSpec& spec) {
    validate(spec.template_config);
    validate(spec.metric_cfg);
    for (const AxisSpec* axis : {&spec.axis_x, &spec.axis_y}) {
        if (axis->steps < 2) throw ConfigError("sweep: axis steps must be >= 2");
        if (!(axis->min < axis->max)) throw ConfigError("sweep: axis min must be < max");
        ParamPath::parse(axis->path, spec.template_config);  // throws on bad paths
    }
    const std::size_t n = spec.template_config.oscillators.size();
    if (spec.observed_pair.first >= n || spec.observed_pair.second >= n ||
        spec.observed_pair.first == spec.observed_pair.second)
        throw ConfigError("sweep: observed_pair must name two distinct oscillators");
    if (spec.record_spikes < spec.metric_cfg.min_oscillations)
        throw ConfigError("sweep: record_spikes below metrics min_oscillations");
}

double axis_value(const AxisSpec& axis, std::size_t index) {
    const double t = static_cast<double>(index) / static_cast<double>(axis.steps - 1);
    return axis.min + t * (axis.max - axis.min);
}

ArnoldMap arnold_sweep(const SweepSpec& spec, unsigned workers,
                       const SweepProgress& progress) {
    validate(spec);
    const ParamPath path_x = ParamPath::parse(spec.axis_x.path, spec.template_config);
    const ParamPath path_y = ParamPath::parse(spec.axis_y.path, spec.template_config);

    ArnoldMap map;
    map.nx = spec.axis_x.steps;
    map.ny = spec.axis_y.steps;
    map.cells.resize(map.nx * map.ny);

    const std::size_t total = map.cells.size();
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};

    auto run_cell = [&](std::size_t flat) {
        const std::size_t ix = flat % map.nx;
        const std::size_t iy = flat / map.nx;
        MapCell& cell = map.cells[flat];
        cell.x_value = axis_value(spec.axis_x, ix);
        cell.y_value = axis_value(spec.axis_y, iy);
        try {
            NetworkConfig config = spec.template_config;
            path_x.apply(config, cell.x_value);
            path_y.apply(config, cell.y_value);
            config.seed = derive_cell_seed(spec.base_seed, ix, iy);
            const auto trains = simulate(config, spec.warmup_spikes, spec.record_spikes);
            cell.metrics = compute_shr_mu(trains[spec.observed_pair.first],
                                          trains[spec.observed_pair.second], spec.metric_cfg);
        } catch (const std::exception& e) {
            cell.error = e.what();
        }
    };

    auto worker_loop = [&] {
        for (std::size_t flat = next.fetch_add(1); flat < total; flat = next.fetch_add(1)) {
            run_cell(flat);
            const std::size_t d = done.fetch_add(1) + 1;
            if (progress) progress(d, total);
        }
    };

    const unsigned n_workers = std::max(1u, std::min<unsigned>(workers, total));
    if (n_workers == 1) {
        worker_loop();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker_loop);
        for (auto& t : pool) t.join();
    }
    return map;
}

SyncStateTally count_sync_states(const ArnoldMap& map) {
    SyncStateTally tally;
    for (const auto& cell : map.cells) {
        if (!cell.error.empty() || !cell.metrics.synchronized) continue;
        tally.per_state[{cell.metrics.m_i, cell.metrics.m_j}] += 1;
    }
    tally.n_s = tally.per_state.size();
    return tally;
}

XorOperatingPoint find_xor_operating_points(const ArnoldMap& map, const SweepSpec& spec) {
    const ParamPath path_x = ParamPath::parse(spec.axis_x.path, spec.template_config);
    const ParamPath path_y = ParamPath::parse(spec.axis_y.path, spec.template_config);
    if (!path_x.is_supply_current() || !path_y.is_supply_current())
        throw ConfigError("find_xor_operating_points: both axes must sweep supply currents");

    struct Candidate {
        double margin;
        std::size_t ix0, ix1, iy0, iy1;
    };
    std::vector<Candidate> candidates;

    auto feature = [&](std::size_t ix, std::size_t iy, double& out) {
        const MapCell& cell = map.at(ix, iy);
        if (!cell.error.empty()) return false;
        out = cell.metrics.shr_value;
        return true;
    };

    for (std::size_t ix0 = 0; ix0 < map.nx; ++ix0)
        for (std::size_t ix1 = ix0 + 1; ix1 < map.nx; ++ix1)
            for (std::size_t iy0 = 0; iy0 < map.ny; ++iy0)
                for (std::size_t iy1 = iy0 + 1; iy1 < map.ny; ++iy1) {
                    double z00 = 0.0, z10 = 0.0, z01 = 0.0, z11 = 0.0;
                    if (!feature(ix0, iy0, z00) || !feature(ix1, iy0, z10) ||
                        !feature(ix0, iy1, z01) || !feature(ix1, iy1, z11))
                        continue;
                    // XOR over (X, Y, Z) is linearly separable iff Z is not
                    // an affine function of (X, Y) on the four corners.
                    const double margin = std::abs(z00 + z11 - z10 - z01);
                    if (margin > 0.0)
                        candidates.push_back({margin, ix0, ix1, iy0, iy1});
                }

    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.margin != b.margin) return a.margin > b.margin;
        return std::tie(a.ix0, a.ix1, a.iy0, a.iy1) < std::tie(b.ix0, b.ix1, b.iy0, b.iy1);
    });

    XorOperatingPoint result;
    for (const auto& c : candidates) {
        ++result.rectangles_tried;
        double z00 = 0.0, z10 = 0.0, z01 = 0.0, z11 = 0.0;
        feature(c.ix0, c.iy0, z00);
        feature(c.ix1, c.iy0, z10);
        feature(c.ix0, c.iy1, z01);
        feature(c.ix1, c.iy1, z11);
        std::vector<TrainingExample> dataset;
        for (const XorCase& xc : kXorTruthTable) {
            const double z = xc.x ? (xc.y ? z11 : z10) : (xc.y ? z01 : z00);
            dataset.push_back({{static_cast<double>(xc.x), static_cast<double>(xc.y)},
                               {z},
                               xc.expected_q});
        }
        const TrainReport report = train_readout(dataset, 2000);
        if (report.correct != dataset.size()) continue;

        const double x_lo = axis_value(spec.axis_x, c.ix0);
        const double x_hi = axis_value(spec.axis_x, c.ix1);
        const double y_lo = axis_value(spec.axis_y, c.iy0);
        const double y_hi = axis_value(spec.axis_y, c.iy1);
        result.found = true;
        result.ix_low = c.ix0;
        result.ix_high = c.ix1;
        result.iy_low = c.iy0;
        result.iy_high = c.iy1;
        const double sx = path_x.field->to_si;
        const double sy = path_y.field->to_si;
        result.encoding.offsets = {x_lo * sx, y_lo * sy};
        result.encoding.gains = {(x_hi - x_lo) * sx, (y_hi - y_lo) * sy};
        result.readout = report.neuron;
        result.features = {z00, z10, z01, z11};
        return result;
    }
    return result;
}

} // namespace oscres
