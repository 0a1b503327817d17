#pragma once

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "sl2a/io/config.hpp"
#include "sl2a/io/format.hpp"
#include "sl2a/io/grid.hpp"
#include "sl2a/io/heatmap.hpp"
#include "sl2a/io/pnm.hpp"
#include "sl2a/io/report.hpp"
#include "sl2a/models/checkpoint.hpp"
#include "sl2a/models/network.hpp"
#include "sl2a/tasks/builtin.hpp"
#include "sl2a/tasks/task.hpp"
#include "sl2a/training/fit.hpp"

namespace sl2a {

inline constexpr const char* kOutputRootVariable = "SL2A_OUTPUT_ROOT";

/// Relative output directories are placed under $SL2A_OUTPUT_ROOT when it is set.
inline std::filesystem::path resolve_output_dir(const std::string& dir)
{
    std::filesystem::path p(dir);
    if (p.is_relative()) {
        if (const char* root = std::getenv(kOutputRootVariable); root != nullptr && *root != '\0')
            p = std::filesystem::path(root) / p;
    }
    return p;
}

/// Creates the directory. An existing non-empty directory is refused unless
/// `overwrite` is set, in which case files of the same name are replaced.
inline void prepare_output_dir(const std::filesystem::path& dir, bool overwrite)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    if (fs::exists(dir, ec)) {
        if (!fs::is_directory(dir, ec)) throw ConfigError("output path '" + dir.string() + "' is not a directory");
        if (!fs::is_empty(dir, ec) && !overwrite)
            throw ConfigError("output directory '" + dir.string() + "' is not empty; pass --overwrite to replace its files");
        return;
    }
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
}

/// Writes `text` to dir/name; `name` must be a plain file name.
inline void write_artifact(const std::filesystem::path& dir, const std::string& name, const std::string& text)
{
    detail::write_file(dir / name, text);
}

namespace detail {

inline bool is_grid_path(const std::string& p) { return std::filesystem::path(p).extension() == ".grid"; }

inline ImageBuffer load_input_image(const RunConfig& c)
{
    if (c.path.empty()) return builtin::image(c.builtin, c.size);
    if (is_grid_path(c.path)) return to_image(load_grid(c.path));
    return load_image(c.path);
}

}  // namespace detail

/// The task a config describes. Inpainting masks draw from the run seed.
inline TaskInstance build_task(const RunConfig& c)
{
    switch (c.task) {
    case TaskKind::image: return make_image_task(detail::load_input_image(c));
    case TaskKind::superres: return make_superres_task(detail::load_input_image(c), c.factor);
    case TaskKind::inpaint: {
        Rng rng(c.seed ^ 0x6d61736b5f726e67ULL);
        return make_inpainting_task(detail::load_input_image(c), c.keep_fraction, rng);
    }
    case TaskKind::ct: return make_ct_task(detail::load_input_image(c), c.angles);
    case TaskKind::occupancy:
        return make_occupancy_task(c.path.empty() ? builtin::volume(c.builtin, c.size) : to_volume(load_grid(c.path)));
    case TaskKind::spectral: {
        SpectralProbe probe;
        probe.samples = c.samples;
        return make_spectral_task(probe);
    }
    }
    throw ConfigError("unhandled task");
}

struct RunResult {
    std::filesystem::path dir;
    TrainReport report;
    nlohmann::json summary;
};

inline std::string run_name(const RunConfig& c, const std::filesystem::path& dir)
{
    if (!c.name.empty()) return c.name;
    const std::string n = dir.filename().string();
    return n.empty() ? dir.parent_path().filename().string() : n;
}

/// Builds task and model, trains, and writes under the output directory:
/// config.json, report.csv, summary.json, checkpoint.bin, and the task's
/// reconstruction artifacts (see README).
inline RunResult run(RunConfig config)
{
    namespace fs = std::filesystem;
    config = resolve_config(config);
    const TaskInstance task = build_task(config);
    config.model.output_dim = task.output_dim();
    config.model.validate();

    RunResult result;
    result.dir = resolve_output_dir(config.output_dir);
    prepare_output_dir(result.dir, config.overwrite);
    const fs::path& dir = result.dir;
    write_artifact(dir, "config.json", config_to_json(config).dump(2) + "\n");

    Network net = build(config.model);
    std::vector<double> spectral_rows;
    std::vector<std::size_t> spectral_steps;
    EpochObserver observer;
    if (task.kind == TaskKind::spectral) {
        observer = [&](const EpochRecord& rec, const Matrix& pred) {
            const auto e = frequency_error(pred.data(), task.eval_targets.data(), task.probe);
            spectral_rows.insert(spectral_rows.end(), e.begin(), e.end());
            spectral_steps.push_back(rec.epoch);
        };
    }
    result.report = fit(net, task, config.train, observer);
    const TrainReport& rep = result.report;
    write_artifact(dir, "report.csv", report_csv(rep.records));
    if (config.save_checkpoint) save_checkpoint(net, dir / "checkpoint.bin");

    const Matrix prediction = rep.best_prediction.empty() ? net.predict(task.eval_coords) : rep.best_prediction;
    nlohmann::json metrics;
    for (const auto& [k, v] : evaluate_all(task, prediction)) metrics[k] = v;

    switch (task.kind) {
    case TaskKind::image:
    case TaskKind::superres:
    case TaskKind::inpaint:
    case TaskKind::ct: {
        const std::string ext = task.channels == 1 ? ".pgm" : ".ppm";
        save_image(prediction_image(task, prediction), dir / ("reconstruction" + ext), config.bit_depth);
        save_image(prediction_image(task, task.eval_targets), dir / ("reference" + ext), config.bit_depth);
        if (task.kind == TaskKind::inpaint) {
            ImageBuffer mask(task.eval_map.sides[0], task.eval_map.sides[1], 1);
            for (std::size_t i : task.kept) mask.values[i] = 1.0;
            save_image(mask, dir / "mask.pgm", 8);
        }
        if (task.kind == TaskKind::ct) {
            const auto& radon = static_cast<const RadonMeasurement&>(*task.op).radon();
            save_grid({{radon.num_bins(), radon.num_angles()}, std::vector<double>(task.train_targets.data().begin(),
                                                                                    task.train_targets.data().end())},
                      dir / "sinogram.grid");
        }
        break;
    }
    case TaskKind::occupancy: {
        const auto& s = task.eval_map.sides;
        GridData raw{{s[0], s[1], s[2]}, std::vector<double>(prediction.data().begin(), prediction.data().end())};
        save_grid(raw, dir / "reconstruction.grid", "f64");
        for (double& v : raw.values) v = v >= task.iou_threshold ? 1.0 : 0.0;
        save_grid(raw, dir / "occupancy.grid", "u8");
        break;
    }
    case TaskKind::spectral: {
        std::string csv = "x,target,prediction\n";
        for (std::size_t i = 0; i < prediction.rows(); ++i)
            csv += format_number(task.eval_coords(i, 0)) + "," + format_number(task.eval_targets(i, 0)) + "," +
                   format_number(prediction(i, 0)) + "\n";
        write_artifact(dir, "prediction.csv", csv);
        const Matrix table(spectral_steps.size(), task.probe.frequencies.size(), spectral_rows);
        std::string errors = "epoch";
        for (double omega : task.probe.frequencies) errors += "," + frequency_label(omega);
        errors += "\n";
        for (std::size_t s = 0; s < table.rows(); ++s) {
            errors += std::to_string(spectral_steps[s]);
            for (std::size_t f = 0; f < table.cols(); ++f) errors += "," + format_number(table(s, f));
            errors += "\n";
        }
        write_artifact(dir, "spectral_errors.csv", errors);
        if (!table.empty()) save_heatmap(table, dir / "heatmap");
        break;
    }
    }

    nlohmann::json& j = result.summary;
    j["name"] = run_name(config, dir);
    j["task"] = std::string(to_string(task.kind));
    j["architecture"] = std::string(to_string(config.model.architecture));
    j["metric"] = std::string(to_string(task.metric));
    j["best_metric"] = rep.best_metric;
    j["best_epoch"] = rep.best_epoch;
    j["final_metric"] = rep.records.empty() ? nlohmann::json(nullptr) : nlohmann::json(rep.records.back().metric);
    j["final_loss"] = rep.final_loss;
    j["epochs_run"] = rep.epochs_run;
    j["steps"] = rep.steps;
    j["stopped_early"] = rep.stopped_early;
    j["param_count"] = net.count_params();
    j["seed"] = config.seed;
    j["wall_clock_seconds"] = rep.total_seconds;
    j["metrics"] = metrics;
    if (task.kind == TaskKind::inpaint) {
        j["kept_pixels"] = task.kept.size();
        j["mask_resamples"] = task.mask_resamples;
    }
    write_artifact(dir, "summary.json", j.dump(2) + "\n");
    return result;
}

/// Trains one fresh model per (lr, batch) pair and writes grid.csv plus the
/// resolved config. Each row holds the best metric of that combination.
inline std::vector<GridPoint> run_grid_search(RunConfig config, const std::vector<double>& lrs,
                                              const std::vector<std::size_t>& batches)
{
    config = resolve_config(config);
    const TaskInstance task = build_task(config);
    config.model.output_dim = task.output_dim();
    config.model.validate();
    const auto dir = resolve_output_dir(config.output_dir);
    prepare_output_dir(dir, config.overwrite);
    write_artifact(dir, "config.json", config_to_json(config).dump(2) + "\n");
    auto grid = grid_search(config.model, task, config.train, lrs, batches);
    std::string csv = "learning_rate,batch_size,best_" + std::string(to_string(task.metric)) + ",best_epoch,final_loss,seconds\n";
    for (const auto& g : grid)
        csv += format_number(g.learning_rate) + "," + std::to_string(g.batch_size) + "," + format_number(g.best_metric) +
               "," + std::to_string(g.best_epoch) + "," + format_number(g.final_loss) + "," +
               format_number(config.train.log_wall_clock ? g.seconds : 0.0) + "\n";
    write_artifact(dir, "grid.csv", csv);
    return grid;
}

/// Compares stored runs and writes comparison.csv and ranking.csv.
inline Comparison run_compare(const std::vector<std::filesystem::path>& inputs, const std::string& output_dir,
                              bool overwrite)
{
    std::vector<StoredReport> reports;
    for (const auto& p : inputs) reports.push_back(load_report(p));
    Comparison c = compare(reports);
    const auto dir = resolve_output_dir(output_dir);
    prepare_output_dir(dir, overwrite);
    write_artifact(dir, "comparison.csv", c.comparison_csv);
    write_artifact(dir, "ranking.csv", c.ranking_csv);
    return c;
}

}  // namespace sl2a
