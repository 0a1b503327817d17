#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sl2a/models/network.hpp"
#include "sl2a/tasks/spectral.hpp"
#include "sl2a/tasks/task.hpp"
#include "sl2a/training/fit.hpp"

namespace sl2a {

/// Frequency-resolved error of one model over training. Row s of `errors`
/// holds the relative error at each probe frequency after epoch steps[s].
/// The probe is trained full batch, so one epoch is one optimizer step.
struct SpectralTable {
    std::string name;
    ModelSpec spec;
    std::vector<std::size_t> steps;
    Matrix errors;
    TrainReport report;
};

inline SpectralTable run_spectral_model(const std::string& name, const ModelSpec& spec, const TrainConfig& cfg,
                                        const SpectralProbe& probe = {})
{
    const TaskInstance task = make_spectral_task(probe);
    TrainConfig c = cfg;
    c.batch_size = 0;
    Network net = build(spec);
    std::vector<double> rows;
    SpectralTable t;
    t.name = name;
    t.spec = spec;
    t.report = fit(net, task, c, [&](const EpochRecord& rec, const Matrix& pred) {
        const auto e = frequency_error(pred.data(), task.eval_targets.data(), probe);
        rows.insert(rows.end(), e.begin(), e.end());
        t.steps.push_back(rec.epoch);
    });
    t.errors = Matrix(t.steps.size(), probe.frequencies.size(), std::move(rows));
    return t;
}

/// Trains every (name, spec) pair on the rounded-sines probe with the same
/// config and logs the per-frequency error table of each.
inline std::vector<SpectralTable> run_spectral_experiment(const std::vector<std::pair<std::string, ModelSpec>>& models,
                                                          const TrainConfig& cfg, const SpectralProbe& probe = {})
{
    if (models.empty()) throw ConfigError("run_spectral_experiment: no models");
    std::vector<SpectralTable> out;
    for (const auto& [name, spec] : models) {
        if (spec.input_dim != 1 || spec.output_dim != 1)
            throw ConfigError("run_spectral_experiment: model '" + name + "' must map 1 -> 1");
        out.push_back(run_spectral_model(name, spec, cfg, probe));
    }
    return out;
}

}  // namespace sl2a
