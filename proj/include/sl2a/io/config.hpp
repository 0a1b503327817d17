#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "sl2a/io/pnm.hpp"
#include "sl2a/models/spec.hpp"
#include "sl2a/tasks/task.hpp"
#include "sl2a/training/fit.hpp"

namespace sl2a {

/// Everything that determines a run. Serialized as JSON; see README for the
/// schema. Unset optional fields take per-task defaults when resolved.
struct RunConfig {
    std::string name;  ///< label in summaries and comparisons; defaults to the output directory name
    TaskKind task = TaskKind::image;
    std::uint64_t seed = 0;
    std::string output_dir = "run";
    bool overwrite = false;

    // input
    std::string builtin;  ///< built-in image/volume name; ignored when `path` is set
    std::string path;     ///< Netpbm image, or grid file for ct/occupancy
    std::size_t size = 64;

    // task parameters
    std::size_t factor = 4;
    double keep_fraction = 0.7;
    std::size_t angles = 60;
    std::size_t samples = 300;

    ModelSpec model;
    bool degree_set = false;
    TrainConfig train;

    int bit_depth = 16;
    bool save_checkpoint = true;
};

inline std::string_view default_builtin(TaskKind t)
{
    switch (t) {
    case TaskKind::ct: return "shepp-logan";
    case TaskKind::occupancy: return "sphere";
    case TaskKind::spectral: return "";
    default: return "composite";
    }
}

inline std::size_t default_degree(TaskKind t)
{
    switch (t) {
    case TaskKind::superres: return 200;
    case TaskKind::ct: return 128;
    case TaskKind::spectral: return 64;
    default: return 512;
    }
}

inline TaskKind parse_task(std::string_view s)
{
    for (auto k : {TaskKind::image, TaskKind::superres, TaskKind::inpaint, TaskKind::ct, TaskKind::occupancy,
                   TaskKind::spectral})
        if (s == to_string(k)) return k;
    throw ConfigError("unknown task '" + std::string(s) + "' (image, superres, inpaint, ct, occupancy, spectral)");
}

inline RunConfig default_run_config(TaskKind task)
{
    RunConfig c;
    c.task = task;
    c.builtin = std::string(default_builtin(task));
    c.model.degree = default_degree(task);
    if (task == TaskKind::spectral) {
        c.model.width = 128;
        c.model.input_dim = 1;
        c.model.output_dim = 1;
    }
    return c;
}

namespace detail {

/// Collects schema violations so that one error lists every bad field.
class SchemaReader {
public:
    std::vector<std::string> errors;

    void allow_only(const nlohmann::json& obj, const std::string& where, std::initializer_list<const char*> keys)
    {
        if (!obj.is_object()) {
            errors.push_back(where + ": expected an object");
            return;
        }
        std::set<std::string> known(keys.begin(), keys.end());
        for (auto it = obj.begin(); it != obj.end(); ++it)
            if (!known.count(it.key())) errors.push_back(qualify(where, it.key()) + ": unknown field");
    }

    template <class T>
    void read(const nlohmann::json& obj, const std::string& where, const char* key, T& out)
    {
        if (!obj.is_object() || !obj.contains(key)) return;
        const auto& v = obj.at(key);
        try {
            if constexpr (std::is_same_v<T, bool>) {
                if (!v.is_boolean()) throw std::invalid_argument("expected a boolean");
            } else if constexpr (std::is_same_v<T, std::string>) {
                if (!v.is_string()) throw std::invalid_argument("expected a string");
            } else if constexpr (std::is_unsigned_v<T>) {
                if (!v.is_number_unsigned()) throw std::invalid_argument("expected a non-negative integer");
            } else if constexpr (std::is_integral_v<T>) {
                if (!v.is_number_integer()) throw std::invalid_argument("expected an integer");
            } else {
                if (!v.is_number()) throw std::invalid_argument("expected a number");
            }
            out = v.get<T>();
        } catch (const std::exception& e) {
            errors.push_back(qualify(where, key) + ": " + e.what());
        }
    }

    template <class T>
    void read_optional(const nlohmann::json& obj, const std::string& where, const char* key, std::optional<T>& out,
                       bool* set_flag = nullptr)
    {
        if (!obj.is_object() || !obj.contains(key)) return;
        if (obj.at(key).is_null()) {
            out.reset();
            if (set_flag) *set_flag = true;
            return;
        }
        T v{};
        const std::size_t before = errors.size();
        read(obj, where, key, v);
        if (errors.size() == before) {
            out = v;
            if (set_flag) *set_flag = true;
        }
    }

    static std::string qualify(const std::string& where, const std::string& key)
    {
        return where.empty() ? key : where + "." + key;
    }
};

}  // namespace detail

/// Applies a JSON document on top of `base`. Every unknown field, type error
/// and out-of-range value is reported together in one ConfigError.
inline RunConfig apply_config_json(RunConfig c, const nlohmann::json& j)
{
    detail::SchemaReader s;
    s.allow_only(j, "", {"name", "task", "seed", "output_dir", "overwrite", "input", "task_params", "model", "train",
                         "artifacts"});
    if (!s.errors.empty() && !j.is_object()) throw ConfigError("config: top level must be a JSON object");

    if (j.contains("task")) {
        std::string t;
        s.read(j, "", "task", t);
        try {
            const TaskKind k = parse_task(t);
            if (k != c.task) {
                RunConfig fresh = default_run_config(k);
                fresh.output_dir = c.output_dir;
                c = fresh;
            }
        } catch (const ConfigError& e) {
            s.errors.push_back(std::string("task: ") + e.what());
        }
    }
    s.read(j, "", "name", c.name);
    s.read(j, "", "seed", c.seed);
    s.read(j, "", "output_dir", c.output_dir);
    s.read(j, "", "overwrite", c.overwrite);

    if (j.contains("input")) {
        const auto& in = j.at("input");
        s.allow_only(in, "input", {"builtin", "path", "size"});
        s.read(in, "input", "builtin", c.builtin);
        s.read(in, "input", "path", c.path);
        s.read(in, "input", "size", c.size);
    }
    if (j.contains("task_params")) {
        const auto& tp = j.at("task_params");
        s.allow_only(tp, "task_params", {"factor", "keep_fraction", "angles", "samples"});
        s.read(tp, "task_params", "factor", c.factor);
        s.read(tp, "task_params", "keep_fraction", c.keep_fraction);
        s.read(tp, "task_params", "angles", c.angles);
        s.read(tp, "task_params", "samples", c.samples);
    }
    if (j.contains("model")) {
        const auto& m = j.at("model");
        s.allow_only(m, "model", {"architecture", "width", "hidden_layers", "degree", "rank", "omega0", "gauss_spread",
                                  "fourier"});
        if (m.is_object() && m.contains("architecture")) {
            std::string a;
            s.read(m, "model", "architecture", a);
            try {
                c.model.architecture = parse_architecture(a);
            } catch (const ConfigError& e) {
                s.errors.push_back(std::string("model.architecture: ") + e.what());
            }
        }
        s.read(m, "model", "width", c.model.width);
        s.read(m, "model", "hidden_layers", c.model.hidden_layers);
        if (m.is_object() && m.contains("degree")) {
            const std::size_t before = s.errors.size();
            s.read(m, "model", "degree", c.model.degree);
            if (s.errors.size() == before) c.degree_set = true;
        }
        s.read_optional(m, "model", "rank", c.model.rank);
        s.read(m, "model", "omega0", c.model.omega0);
        s.read(m, "model", "gauss_spread", c.model.gauss_spread);
        if (m.is_object() && m.contains("fourier")) {
            const auto& f = m.at("fourier");
            s.allow_only(f, "model.fourier", {"frequencies", "base", "include_input"});
            s.read(f, "model.fourier", "frequencies", c.model.fourier.num_frequencies);
            s.read(f, "model.fourier", "base", c.model.fourier.base);
            s.read(f, "model.fourier", "include_input", c.model.fourier.include_input);
        }
    }
    if (j.contains("train")) {
        const auto& t = j.at("train");
        s.allow_only(t, "train", {"learning_rate", "batch_size", "epochs", "beta1", "beta2", "epsilon", "log_every",
                                  "lr_decay", "target_metric", "log_wall_clock"});
        s.read(t, "train", "learning_rate", c.train.learning_rate);
        s.read(t, "train", "batch_size", c.train.batch_size);
        s.read(t, "train", "epochs", c.train.epochs);
        s.read(t, "train", "beta1", c.train.adam.beta1);
        s.read(t, "train", "beta2", c.train.adam.beta2);
        s.read(t, "train", "epsilon", c.train.adam.epsilon);
        s.read(t, "train", "log_every", c.train.log_every);
        s.read(t, "train", "lr_decay", c.train.lr_decay);
        s.read_optional(t, "train", "target_metric", c.train.target_metric);
        s.read(t, "train", "log_wall_clock", c.train.log_wall_clock);
    }
    if (j.contains("artifacts")) {
        const auto& a = j.at("artifacts");
        s.allow_only(a, "artifacts", {"bit_depth", "checkpoint"});
        s.read(a, "artifacts", "bit_depth", c.bit_depth);
        s.read(a, "artifacts", "checkpoint", c.save_checkpoint);
    }

    if (!s.errors.empty()) {
        std::string msg = "invalid config (" + std::to_string(s.errors.size()) + " field" +
                          (s.errors.size() == 1 ? "" : "s") + "):";
        for (const auto& e : s.errors) msg += "\n  " + e;
        throw ConfigError(msg);
    }
    return c;
}

/// Fills dimension fields that follow from the task and checks ranges,
/// listing every offending field.
inline RunConfig resolve_config(RunConfig c)
{
    std::vector<std::string> bad;
    if (!c.degree_set) c.model.degree = default_degree(c.task);
    if (c.task == TaskKind::spectral) {
        c.model.input_dim = 1;
        c.model.output_dim = 1;
    } else if (c.task == TaskKind::occupancy) {
        c.model.input_dim = 3;
        c.model.output_dim = 1;
    } else {
        c.model.input_dim = 2;
        // output_dim is set from the loaded image channels at run time
    }
    c.model.seed = c.seed;
    c.train.seed = c.seed;
    if (c.output_dir.empty()) bad.push_back("output_dir: must not be empty");
    if (c.path.empty() && c.task != TaskKind::spectral && c.builtin.empty()) bad.push_back("input: builtin or path required");
    if (c.size == 0) bad.push_back("input.size: must be positive");
    if (c.factor == 0) bad.push_back("task_params.factor: must be positive");
    if (!(c.keep_fraction > 0.0 && c.keep_fraction <= 1.0)) bad.push_back("task_params.keep_fraction: must be in (0, 1]");
    if (c.angles == 0) bad.push_back("task_params.angles: must be positive");
    if (c.samples < 2) bad.push_back("task_params.samples: at least 2 required");
    if (c.bit_depth != 8 && c.bit_depth != 16) bad.push_back("artifacts.bit_depth: must be 8 or 16");
    try {
        c.train.validate();
    } catch (const ConfigError& e) {
        bad.push_back(e.what());
    }
    try {
        c.model.validate();
    } catch (const ConfigError& e) {
        bad.push_back(std::string("model: ") + e.what());
    }
    if (!bad.empty()) {
        std::string msg = "invalid config:";
        for (const auto& e : bad) msg += "\n  " + e;
        throw ConfigError(msg);
    }
    return c;
}

inline RunConfig load_run_config(const std::filesystem::path& path, TaskKind task)
{
    const auto bytes = detail::read_file(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(bytes.begin(), bytes.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what(), e.byte);
    }
    return apply_config_json(default_run_config(task), j);
}

inline nlohmann::json config_to_json(const RunConfig& c)
{
    nlohmann::json j;
    j["name"] = c.name;
    j["task"] = std::string(to_string(c.task));
    j["seed"] = c.seed;
    j["output_dir"] = c.output_dir;
    j["overwrite"] = c.overwrite;
    j["input"] = {{"builtin", c.builtin}, {"path", c.path}, {"size", c.size}};
    j["task_params"] = {{"factor", c.factor}, {"keep_fraction", c.keep_fraction}, {"angles", c.angles},
                        {"samples", c.samples}};
    j["model"] = {{"architecture", std::string(to_string(c.model.architecture))},
                  {"width", c.model.width},
                  {"hidden_layers", c.model.hidden_layers},
                  {"degree", c.model.degree},
                  {"rank", c.model.rank ? nlohmann::json(*c.model.rank) : nlohmann::json(nullptr)},
                  {"omega0", c.model.omega0},
                  {"gauss_spread", c.model.gauss_spread},
                  {"fourier",
                   {{"frequencies", c.model.fourier.num_frequencies},
                    {"base", c.model.fourier.base},
                    {"include_input", c.model.fourier.include_input}}}};
    j["train"] = {{"learning_rate", c.train.learning_rate},
                  {"batch_size", c.train.batch_size},
                  {"epochs", c.train.epochs},
                  {"beta1", c.train.adam.beta1},
                  {"beta2", c.train.adam.beta2},
                  {"epsilon", c.train.adam.epsilon},
                  {"log_every", c.train.log_every},
                  {"lr_decay", c.train.lr_decay},
                  {"target_metric", c.train.target_metric ? nlohmann::json(*c.train.target_metric) : nlohmann::json(nullptr)},
                  {"log_wall_clock", c.train.log_wall_clock}};
    j["artifacts"] = {{"bit_depth", c.bit_depth}, {"checkpoint", c.save_checkpoint}};
    return j;
}

}  // namespace sl2a
