// Command-line front end: one subcommand per task plus grid-search and compare.
//
// Exit codes: 0 success, 2 invalid configuration or input, 3 numerical
// failure during training, 1 anything else.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sl2a/io/config.hpp"
#include "sl2a/io/run.hpp"
#include "sl2a/numerics/allocator.hpp"

namespace {

using sl2a::RunConfig;
using sl2a::TaskKind;

struct Overrides {
    std::string config_path;
    std::optional<std::string> name, output, builtin, path, arch;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> size, factor, angles, samples, width, hidden, degree, rank, epochs, batch, log_every;
    std::optional<double> keep, lr, lr_decay, omega0, target;
    bool overwrite = false;
    bool wall_clock = false;
};

void add_run_options(CLI::App* cmd, Overrides& o, TaskKind task)
{
    cmd->add_option("-c,--config", o.config_path, "JSON run config; flags override its values")
        ->check(CLI::ExistingFile);
    cmd->add_option("-o,--output", o.output, "output directory (relative paths go under $SL2A_OUTPUT_ROOT)");
    cmd->add_option("--name", o.name, "run label used by compare");
    cmd->add_option("--seed", o.seed, "seed for initialization, batching and masks");
    cmd->add_flag("--overwrite", o.overwrite, "replace files in a non-empty output directory");
    cmd->add_option("--arch", o.arch, "sl2a, sl2a-simple, relu-mlp, relu-pe, siren, gauss");
    cmd->add_option("--width", o.width, "hidden width");
    cmd->add_option("--hidden-layers", o.hidden, "number of hidden layers");
    cmd->add_option("--degree", o.degree, "Chebyshev degree of the LA block");
    cmd->add_option("--rank", o.rank, "low-rank factorization of hidden layers and head");
    cmd->add_option("--omega0", o.omega0, "SIREN frequency scale");
    cmd->add_option("--epochs", o.epochs, "training epochs");
    cmd->add_option("--lr", o.lr, "Adam learning rate");
    cmd->add_option("--lr-decay", o.lr_decay, "per-epoch learning-rate multiplier");
    cmd->add_option("--batch-size", o.batch, "samples per step, 0 for full batch");
    cmd->add_option("--log-every", o.log_every, "metric logging cadence in epochs");
    cmd->add_option("--target-metric", o.target, "stop once the logged metric reaches this value");
    cmd->add_flag("--wall-clock", o.wall_clock, "log elapsed seconds in report.csv (breaks byte reproducibility)");
    if (task != TaskKind::spectral) {
        cmd->add_option("--builtin", o.builtin, "built-in input by name");
        cmd->add_option("--input", o.path, "input file (.pgm/.ppm image, or .grid)");
        cmd->add_option("--size", o.size, "side length of the built-in input");
    }
    if (task == TaskKind::superres) cmd->add_option("--factor", o.factor, "downsampling factor");
    if (task == TaskKind::inpaint) cmd->add_option("--keep", o.keep, "fraction of pixels kept for training");
    if (task == TaskKind::ct) cmd->add_option("--angles", o.angles, "number of projection angles");
    if (task == TaskKind::spectral) cmd->add_option("--samples", o.samples, "probe sample count");
}

RunConfig make_config(const Overrides& o, TaskKind task)
{
    RunConfig c = o.config_path.empty() ? sl2a::default_run_config(task) : sl2a::load_run_config(o.config_path, task);
    if (c.task != task)
        throw sl2a::ConfigError("config task '" + std::string(sl2a::to_string(c.task)) + "' does not match subcommand '" +
                                std::string(sl2a::to_string(task)) + "'");
    if (o.name) c.name = *o.name;
    if (o.output) c.output_dir = *o.output;
    if (o.seed) c.seed = *o.seed;
    if (o.overwrite) c.overwrite = true;
    if (o.builtin) {
        c.builtin = *o.builtin;
        c.path.clear();
    }
    if (o.path) c.path = *o.path;
    if (o.size) c.size = *o.size;
    if (o.factor) c.factor = *o.factor;
    if (o.keep) c.keep_fraction = *o.keep;
    if (o.angles) c.angles = *o.angles;
    if (o.samples) c.samples = *o.samples;
    if (o.arch) c.model.architecture = sl2a::parse_architecture(*o.arch);
    if (o.width) c.model.width = *o.width;
    if (o.hidden) c.model.hidden_layers = *o.hidden;
    if (o.degree) {
        c.model.degree = *o.degree;
        c.degree_set = true;
    }
    if (o.rank) c.model.rank = *o.rank;
    if (o.omega0) c.model.omega0 = *o.omega0;
    if (o.epochs) c.train.epochs = *o.epochs;
    if (o.lr) c.train.learning_rate = *o.lr;
    if (o.lr_decay) c.train.lr_decay = *o.lr_decay;
    if (o.batch) c.train.batch_size = *o.batch;
    if (o.log_every) c.train.log_every = *o.log_every;
    if (o.target) c.train.target_metric = *o.target;
    if (o.wall_clock) c.train.log_wall_clock = true;
    return c;
}

void print_summary(const sl2a::RunResult& r)
{
    std::cout << r.summary.at("name").get<std::string>() << ": ";
    if (r.report.records.empty())
        std::cout << "no logged epochs (epochs < log_every)";
    else
        std::cout << "best " << r.summary.at("metric").get<std::string>() << " " << r.report.best_metric
                  << " at epoch " << r.report.best_epoch;
    std::cout << ", " << r.summary.at("param_count").get<std::size_t>() << " parameters -> " << r.dir.string() << "\n";
}

}  // namespace

int main(int argc, char** argv)
{
    sl2a::retain_freed_memory();
    CLI::App app{"SL2A-INR: coordinate networks with a Chebyshev learnable-activation layer"};
    app.require_subcommand(1);

    struct Entry {
        const char* name;
        TaskKind task;
        const char* help;
    };
    const Entry entries[] = {
        {"fit-image", TaskKind::image, "fit an image"},
        {"superres", TaskKind::superres, "train on a downsampled image, evaluate at full resolution"},
        {"inpaint", TaskKind::inpaint, "train on a random pixel subset"},
        {"ct", TaskKind::ct, "reconstruct a phantom from its sinogram"},
        {"occupancy", TaskKind::occupancy, "fit a binary 3-D occupancy grid"},
        {"spectral", TaskKind::spectral, "fit the rounded-sines probe and log per-frequency errors"},
    };
    std::vector<Overrides> overrides(std::size(entries));
    std::vector<CLI::App*> commands;
    for (std::size_t i = 0; i < std::size(entries); ++i) {
        commands.push_back(app.add_subcommand(entries[i].name, entries[i].help));
        add_run_options(commands.back(), overrides[i], entries[i].task);
    }

    Overrides grid_o;
    std::string grid_task = "image";
    std::vector<double> grid_lrs{1e-4, 1e-3, 1e-2};
    std::vector<std::size_t> grid_batches{32 * 32, 64 * 64, 128 * 128, 256 * 256};
    CLI::App* grid = app.add_subcommand("grid-search", "train every learning-rate x batch-size combination");
    grid->add_option("--task", grid_task, "task to sweep (image, superres, inpaint, ct, occupancy, spectral)");
    grid->add_option("--lrs", grid_lrs, "learning rates")->delimiter(',');
    grid->add_option("--batches", grid_batches, "batch sizes (0 = full batch)")->delimiter(',');
    add_run_options(grid, grid_o, TaskKind::image);

    std::vector<std::string> compare_inputs;
    std::string compare_out = "compare";
    bool compare_overwrite = false;
    CLI::App* cmp = app.add_subcommand("compare", "align and rank the reports of finished runs");
    cmp->add_option("runs", compare_inputs, "run directories or report.csv paths")->required()->expected(2, -1);
    cmp->add_option("-o,--output", compare_out, "output directory");
    cmp->add_flag("--overwrite", compare_overwrite, "replace files in a non-empty output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        for (std::size_t i = 0; i < commands.size(); ++i) {
            if (commands[i]->parsed()) {
                print_summary(sl2a::run(make_config(overrides[i], entries[i].task)));
                return 0;
            }
        }
        if (grid->parsed()) {
            const RunConfig c = make_config(grid_o, sl2a::parse_task(grid_task));
            const auto points = sl2a::run_grid_search(c, grid_lrs, grid_batches);
            for (const auto& p : points)
                std::cout << "lr " << p.learning_rate << " batch " << p.batch_size << ": best " << p.best_metric
                          << " at epoch " << p.best_epoch << "\n";
            return 0;
        }
        if (cmp->parsed()) {
            std::vector<std::filesystem::path> paths(compare_inputs.begin(), compare_inputs.end());
            std::cout << sl2a::run_compare(paths, compare_out, compare_overwrite).ranking_csv;
            return 0;
        }
    } catch (const sl2a::NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const sl2a::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
