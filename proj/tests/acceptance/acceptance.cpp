// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   acceptance            all criteria
//   acceptance 1 8 11     a subset

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "sl2a/sl2a.hpp"

using namespace sl2a;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v, int precision = 6)
{
    std::ostringstream os;
    os << std::setprecision(precision) << v;
    return os.str();
}

Matrix uniform_matrix(std::size_t rows, std::size_t cols, Rng& rng, double lo = -1.0, double hi = 1.0)
{
    Matrix m(rows, cols);
    for (double& v : m.data()) v = rng.uniform(lo, hi);
    return m;
}

// ---------------------------------------------------------------- 1

Outcome parameter_counts()
{
    std::ostringstream os;
    bool ok = true;
    auto within = [](double v, double ref, double rel) { return std::abs(v - ref) <= rel * ref; };

    ModelSpec full;
    full.width = 256;
    full.degree = 512;
    const std::size_t la = 2 * 256 * 512;
    const std::size_t ln = 2 * 256;
    const std::size_t hidden = 3 * (256 * 256 + 256);
    const std::size_t head = 256 * 3 + 3;
    const std::size_t built = build(full).count_params();
    ok &= built == la + ln + hidden + head && built == formula_param_count(full);
    ok &= built - ln == 460291;
    ok &= within(static_cast<double>(built), 461000.0, 0.001);
    os << "width256 " << built << " (" << built - ln << " without LayerNorm affine)";

    ModelSpec low = full;
    low.degree = 256;
    low.rank = 32;
    const std::size_t low_count = build(low).count_params();
    ok &= low_count == formula_param_count(low) && within(static_cast<double>(low_count), 190000.0, 0.01);
    os << ", rank32 " << low_count;

    ModelSpec narrow = full;
    narrow.width = 128;
    narrow.degree = 500;
    const std::size_t narrow_count = build(narrow).count_params();
    ok &= narrow_count == formula_param_count(narrow) && within(static_cast<double>(narrow_count), 181000.0, 0.025);
    os << ", width128 " << narrow_count << " (" << fmt(100.0 * (181000.0 - narrow_count) / 181000.0, 3)
       << "% below 0.181M)";
    return {ok, os.str()};
}

// ---------------------------------------------------------------- 2

Outcome chebyshev_oracle()
{
    constexpr std::size_t kDegree = 512;
    constexpr std::size_t kPoints = 1000;
    std::vector<double> values(kDegree);
    double worst = 0.0;
    for (std::size_t p = 0; p < kPoints; ++p) {
        const double x = -1.0 + 2.0 * static_cast<double>(p) / static_cast<double>(kPoints - 1);
        chebyshev_t_values(x, values);
        for (std::size_t d = 1; d <= kDegree; ++d)
            worst = std::max(worst, std::abs(values[d - 1] - std::cos(static_cast<double>(d) * std::acos(x))));
    }
    return {worst < 1e-9, "max |T_d - cos(d acos x)| = " + fmt(worst, 3)};
}

// ---------------------------------------------------------------- 3

Outcome gradient_integrity()
{
    const Architecture archs[] = {Architecture::sl2a,    Architecture::sl2a_simple, Architecture::relu_mlp,
                                  Architecture::relu_pe, Architecture::siren,       Architecture::gauss};
    constexpr std::uint64_t kSeeds = 10;
    double worst = 0.0;
    std::string worst_where;
    std::size_t failures = 0;
    for (Architecture a : archs) {
        for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
            ModelSpec s;
            s.architecture = a;
            s.input_dim = 2;
            s.output_dim = 2;
            s.width = 8;
            s.hidden_layers = 2;
            s.degree = 6;
            s.omega0 = 3.0;
            s.gauss_spread = 2.0;
            s.fourier.num_frequencies = 3;
            s.seed = seed;
            Network net = build(s);
            Rng rng(seed + 100);
            const Matrix x = uniform_matrix(5, 2, rng, -0.9, 0.9);
            GradientCheckOptions opt;
            opt.probe_seed = seed + 7;
            const auto rep = gradient_check(net, x, opt);
            if (!rep.passed) ++failures;
            if (rep.max_error() > worst) {
                worst = rep.max_error();
                worst_where = std::string(to_string(a)) + " seed " + std::to_string(seed) + " " + rep.worst;
            }
        }
    }
    return {failures == 0, "60 checks, " + std::to_string(failures) + " failed, max relative error " + fmt(worst, 3) +
                               " (" + worst_where + ")"};
}

// ---------------------------------------------------------------- 4

// Literal ReLU MLP on top of the network's own front end, using its weights.
Matrix relu_mlp_oracle(Network& net, const Matrix& coords)
{
    Matrix y = coords;
    for (std::size_t i = 0; i < net.front_size(); ++i) y = net.layer(i).forward(y);
    for (std::size_t i = net.front_size(); i < net.layer_count(); ++i) {
        auto* lin = dynamic_cast<Linear*>(&net.layer(i));
        if (lin == nullptr) continue;
        const Matrix& w = lin->weight();
        const Matrix& b = lin->bias();
        Matrix z(y.rows(), w.rows());
        const bool last = i + 1 == net.layer_count();
        for (std::size_t r = 0; r < y.rows(); ++r)
            for (std::size_t o = 0; o < w.rows(); ++o) {
                double acc = b(0, o);
                for (std::size_t k = 0; k < w.cols(); ++k) acc += y(r, k) * w(o, k);
                z(r, o) = last ? acc : std::max(acc, 0.0);
            }
        y = std::move(z);
    }
    return y;
}

Outcome modulation_identity()
{
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        ModelSpec s;
        s.width = 32;
        s.degree = 16;
        s.seed = seed;
        Network net = build(s);
        Rng rng(seed + 11);
        auto& ln = dynamic_cast<LayerNorm&>(net.layer(2));
        for (double& v : ln.gain().data()) v = rng.uniform(0.5, 1.5);
        for (double& v : ln.shift().data()) v = rng.uniform(-0.5, 0.5);
        const Matrix x = uniform_matrix(64, 2, rng);

        net.force_modulator_ones(true);
        const Matrix forced = net.forward(x);
        net.clear_cache();

        ModelSpec simple = s;
        simple.architecture = Architecture::sl2a_simple;
        Network plain = build(simple);
        plain.restore(net.snapshot());
        const Matrix reference = plain.forward(x);
        plain.clear_cache();
        const Matrix oracle = relu_mlp_oracle(net, x);

        worst = std::max({worst, max_abs_diff(forced, reference), max_abs_diff(forced, oracle)});
    }
    return {worst <= 1e-12, "max elementwise difference " + fmt(worst, 3)};
}

// ---------------------------------------------------------------- 5

Outcome spectral_bias()
{
    // Matched learning rate and step budget; an early checkpoint is one in the
    // first half of the budget.
    SpectralProbe probe;
    ModelSpec a;
    a.architecture = Architecture::sl2a;
    a.input_dim = 1;
    a.output_dim = 1;
    a.width = 128;
    a.hidden_layers = 3;
    a.degree = 64;
    ModelSpec s = a;
    s.architecture = Architecture::siren;
    TrainConfig cfg;
    cfg.learning_rate = 1e-4;
    cfg.epochs = 300;
    cfg.log_every = 10;
    cfg.restore_best = false;

    const auto tables = run_spectral_experiment({{"sl2a", a}, {"siren", s}}, cfg, probe);
    const auto& ta = tables[0];
    const auto& ts = tables[1];
    const std::size_t lo = 0;
    const std::size_t hi = 3;
    double best_siren = 0.0;
    std::size_t best_step = 0;
    double sl2a_at_best = 0.0;
    std::optional<std::size_t> found;
    for (std::size_t k = 0; k < ts.steps.size() && ts.steps[k] <= cfg.epochs / 2; ++k) {
        const double rs = ts.errors(k, hi) / ts.errors(k, lo);
        const double ra = ta.errors(k, hi) / ta.errors(k, lo);
        if (rs > best_siren) {
            best_siren = rs;
            best_step = ts.steps[k];
            sl2a_at_best = ra;
        }
        if (!found && rs >= 2.0 && ra <= rs / 2.0) found = ts.steps[k];
    }
    std::string detail = "largest early siren 9pi/3pi ratio " + fmt(best_siren, 4) + " at step " +
                         std::to_string(best_step) + " (sl2a " + fmt(sl2a_at_best, 4) + ")";
    if (found) detail = "condition met at step " + std::to_string(*found) + "; " + detail;
    return {found.has_value(), detail};
}

// ---------------------------------------------------------------- 6, 13, 7

struct ImageRun {
    double best = 0.0;
    std::size_t best_epoch = 0;
    std::vector<EpochRecord> records;
};

ImageRun fit_image(const ImageBuffer& image, Architecture arch, double lr, std::size_t epochs)
{
    const TaskInstance task = make_image_task(image);
    ModelSpec s;
    s.architecture = arch;
    s.output_dim = task.output_dim();
    s.width = 256;
    s.hidden_layers = 3;
    s.degree = 512;
    Network net = build(s);
    TrainConfig cfg;
    cfg.learning_rate = lr;
    cfg.epochs = epochs;
    cfg.log_every = 10;
    ImageRun out;
    try {
        const TrainReport r = fit(net, task, cfg);
        out.best = r.best_metric;
        out.best_epoch = r.best_epoch;
        out.records = r.records;
    } catch (const NumericalError&) {
        out.best = -std::numeric_limits<double>::infinity();
    }
    return out;
}

// Composite-image runs shared by criteria 6, 7 and 13.
std::map<std::pair<Architecture, double>, ImageRun>& composite_runs()
{
    static std::map<std::pair<Architecture, double>, ImageRun> runs;
    return runs;
}

const ImageRun& composite_run(Architecture arch, double lr)
{
    auto& runs = composite_runs();
    const auto key = std::make_pair(arch, lr);
    auto it = runs.find(key);
    if (it == runs.end()) it = runs.emplace(key, fit_image(builtin::composite(64), arch, lr, 500)).first;
    return it->second;
}

const std::vector<double> kLearningRates{1e-4, 1e-3, 1e-2};

std::pair<double, const ImageRun*> best_over_grid(Architecture arch)
{
    double lr_best = kLearningRates.front();
    const ImageRun* best = nullptr;
    for (double lr : kLearningRates) {
        const ImageRun& r = composite_run(arch, lr);
        if (best == nullptr || r.best > best->best) {
            best = &r;
            lr_best = lr;
        }
    }
    return {lr_best, best};
}

Outcome image_superiority()
{
    const auto [lr_a, a] = best_over_grid(Architecture::sl2a);
    const auto [lr_r, r] = best_over_grid(Architecture::relu_pe);
    const double gap = a->best - r->best;
    return {gap >= 3.0, "sl2a " + fmt(a->best, 5) + " dB (lr " + fmt(lr_a) + "), relu-pe " + fmt(r->best, 5) +
                            " dB (lr " + fmt(lr_r) + "), gap " + fmt(gap, 4) + " dB"};
}

Outcome convergence_dominance()
{
    const auto [lr_a, a] = best_over_grid(Architecture::sl2a);
    const auto [lr_r, r] = best_over_grid(Architecture::relu_pe);
    std::size_t compared = 0;
    std::size_t violations = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    for (const auto& ra : a->records) {
        if (ra.epoch <= 50) continue;
        for (const auto& rr : r->records) {
            if (rr.epoch != ra.epoch) continue;
            ++compared;
            min_margin = std::min(min_margin, ra.metric - rr.metric);
            if (!(ra.metric > rr.metric)) ++violations;
        }
    }
    return {compared > 0 && violations == 0, std::to_string(compared) + " logged epochs past 50, " +
                                                 std::to_string(violations) + " not dominated, smallest margin " +
                                                 fmt(min_margin, 4) + " dB"};
}

Outcome skip_ablation()
{
    constexpr double kLr = 1e-3;
    std::ostringstream os;
    bool ok = true;
    for (const char* name : {"composite", "zoneplate", "blobs"}) {
        double full = 0.0;
        double simple = 0.0;
        if (std::string(name) == "composite") {
            full = composite_run(Architecture::sl2a, kLr).best;
            simple = fit_image(builtin::image(name, 64), Architecture::sl2a_simple, kLr, 500).best;
        } else {
            full = fit_image(builtin::image(name, 64), Architecture::sl2a, kLr, 500).best;
            simple = fit_image(builtin::image(name, 64), Architecture::sl2a_simple, kLr, 500).best;
        }
        ok &= full >= simple;
        os << name << " " << fmt(full, 5) << " vs " << fmt(simple, 5) << "; ";
    }
    std::string d = os.str();
    d.resize(d.size() - 2);
    return {ok, "full vs simple PSNR: " + d};
}

// ---------------------------------------------------------------- 8

Outcome radon_correctness()
{
    constexpr std::size_t kSide = 64;
    RadonOperator op(kSide, 60);
    Rng rng(8);
    const Matrix u = uniform_matrix(kSide, kSide, rng, 0.0, 1.0);
    const Matrix v = uniform_matrix(kSide, kSide, rng, 0.0, 1.0);
    const double alpha = 0.37;
    const double beta = -1.9;
    const Matrix lhs = op.forward(add(scale(u, alpha), scale(v, beta)));
    const Matrix rhs = add(scale(op.forward(u), alpha), scale(op.forward(v), beta));
    const double linearity = max_abs_diff(lhs, rhs);

    const Matrix w = uniform_matrix(op.num_angles(), op.num_bins(), rng);
    double au_w = 0.0;
    double u_atw = 0.0;
    const Matrix au = op.forward(u);
    const Matrix atw = op.adjoint(w);
    for (std::size_t i = 0; i < au.size(); ++i) au_w += au.data()[i] * w.data()[i];
    for (std::size_t i = 0; i < u.size(); ++i) u_atw += u.data()[i] * atw.data()[i];
    const double adjoint = std::abs(au_w - u_atw) / std::abs(au_w);

    // All-ones image: every vertical ray crosses the full side at angle 0.
    const Matrix sino_ones = op.forward(Matrix(kSide, kSide, 1.0));
    double chord_square = 0.0;
    for (std::size_t k = 0; k < op.num_bins(); ++k)
        chord_square = std::max(chord_square, std::abs(sino_ones(0, k) - kSide) / kSide);

    // Area-sampled disk of radius R pixels: chord 2 sqrt(R^2 - t^2).
    constexpr double kRadius = 24.0;
    constexpr int kSub = 8;
    Matrix disk(kSide, kSide);
    const double mid = (kSide - 1) / 2.0;
    for (std::size_t r = 0; r < kSide; ++r)
        for (std::size_t c = 0; c < kSide; ++c) {
            int inside = 0;
            for (int i = 0; i < kSub; ++i)
                for (int j = 0; j < kSub; ++j) {
                    const double x = static_cast<double>(c) - mid - 0.5 + (j + 0.5) / kSub;
                    const double y = mid - static_cast<double>(r) - 0.5 + (i + 0.5) / kSub;
                    inside += x * x + y * y <= kRadius * kRadius;
                }
            disk(r, c) = static_cast<double>(inside) / (kSub * kSub);
        }
    const Matrix sino_disk = op.forward(disk);
    double chord_disk = 0.0;
    const double bin_mid = (static_cast<double>(op.num_bins()) - 1.0) / 2.0;
    for (std::size_t k = 0; k < op.num_bins(); ++k) {
        const double t = static_cast<double>(k) - bin_mid;
        if (std::abs(t) > 0.8 * kRadius) continue;
        const double chord = 2.0 * std::sqrt(kRadius * kRadius - t * t);
        chord_disk = std::max(chord_disk, std::abs(sino_disk(0, k) - chord) / chord);
    }

    const bool ok = linearity <= 1e-10 && adjoint <= 1e-6 && chord_square <= 0.01 && chord_disk <= 0.01;
    return {ok, "linearity " + fmt(linearity, 3) + ", adjoint " + fmt(adjoint, 3) + ", chord square " +
                    fmt(chord_square, 3) + ", chord disk " + fmt(chord_disk, 3)};
}

// ---------------------------------------------------------------- 9

Outcome ct_direction()
{
    const TaskInstance task = make_ct_task(builtin::shepp_logan(64), 60);
    auto run = [&](Architecture arch) {
        ModelSpec s;
        s.architecture = arch;
        s.output_dim = 1;
        s.width = 256;
        s.degree = 128;
        Network net = build(s);
        TrainConfig cfg;
        cfg.learning_rate = 1e-3;
        cfg.epochs = 300;
        cfg.log_every = 10;
        return fit(net, task, cfg).best_metric;
    };
    const double a = run(Architecture::sl2a);
    const double r = run(Architecture::relu_pe);
    return {a > r, "sl2a " + fmt(a, 5) + " dB, relu-pe " + fmt(r, 5) + " dB"};
}

// ---------------------------------------------------------------- 10

Outcome occupancy()
{
    const TaskInstance task = make_occupancy_task(builtin::sphere(64));
    ModelSpec s;
    s.input_dim = 3;
    s.output_dim = 1;
    s.width = 64;
    s.hidden_layers = 3;
    s.degree = 32;
    Network net = build(s);
    TrainConfig cfg;
    cfg.learning_rate = 1e-3;
    cfg.batch_size = 16384;
    cfg.epochs = 300;
    cfg.log_every = 1;
    cfg.target_metric = 0.97;
    const TrainReport r = fit(net, task, cfg);
    const double final_iou = iou(net.predict(task.eval_coords).data(), task.eval_targets.data(), 0.5);
    return {r.best_metric >= 0.97 && final_iou >= 0.97,
            "IoU " + fmt(final_iou, 5) + " after " + std::to_string(r.epochs_run) + " epochs"};
}

// ---------------------------------------------------------------- 11

// SSIM computed window by window with 2-D Gaussian weights, without separable filtering.
double ssim_sliding_oracle(const Matrix& x, const Matrix& y, const SsimParams& p)
{
    std::vector<double> taps(p.window);
    double norm = 0.0;
    for (std::size_t i = 0; i < p.window; ++i) {
        const double d = static_cast<double>(i) - (static_cast<double>(p.window) - 1.0) / 2.0;
        taps[i] = std::exp(-d * d / (2.0 * p.sigma * p.sigma));
        norm += taps[i];
    }
    for (double& t : taps) t /= norm;
    const double c1 = std::pow(p.k1 * p.dynamic_range, 2);
    const double c2 = std::pow(p.k2 * p.dynamic_range, 2);
    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t r = 0; r + p.window <= x.rows(); ++r)
        for (std::size_t c = 0; c + p.window <= x.cols(); ++c) {
            double mx = 0, my = 0, sxx = 0, syy = 0, sxy = 0;
            for (std::size_t i = 0; i < p.window; ++i)
                for (std::size_t j = 0; j < p.window; ++j) {
                    const double w = taps[i] * taps[j];
                    const double a = x(r + i, c + j);
                    const double b = y(r + i, c + j);
                    mx += w * a;
                    my += w * b;
                    sxx += w * a * a;
                    syy += w * b * b;
                    sxy += w * a * b;
                }
            const double vx = sxx - mx * mx;
            const double vy = syy - my * my;
            const double cov = sxy - mx * my;
            total += ((2 * mx * my + c1) * (2 * cov + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
            ++count;
        }
    return total / static_cast<double>(count);
}

Outcome metric_correctness()
{
    bool ok = true;
    std::ostringstream os;

    const std::vector<double> zeros(100, 0.0);
    const std::vector<double> tenths(100, 0.1);
    const double p20 = psnr(tenths, zeros);
    ok &= std::abs(p20 - 20.0) <= 1e-12;
    os << "psnr(mse 0.01) " << fmt(p20, 17);

    Rng rng(11);
    const Matrix x = uniform_matrix(32, 32, rng, 0.0, 1.0);
    Matrix y = x;
    for (double& v : y.data()) v = std::clamp(v + rng.normal(0.0, 0.1), 0.0, 1.0);
    const SsimParams p;
    const double self = ssim_plane(x, x, p);
    const double fast = ssim_plane(x, y, p);
    const double slow = ssim_sliding_oracle(x, y, p);
    ok &= std::abs(self - 1.0) <= 1e-12 && std::abs(fast - slow) <= 1e-6;
    os << ", ssim(x,x) " << fmt(self, 17) << ", ssim vs sliding oracle " << fmt(std::abs(fast - slow), 3);

    const std::vector<double> a{1, 1, 0, 0};
    const std::vector<double> b{1, 0, 1, 0};
    const std::vector<double> none{0, 0, 1, 1};
    const double i_self = iou(a, a);
    const double i_third = iou(a, b);
    const double i_none = iou(a, none);
    ok &= i_self == 1.0 && i_third == 1.0 / 3.0 && i_none == 0.0;
    os << ", iou " << i_self << "/" << fmt(i_third) << "/" << i_none;
    return {ok, os.str()};
}

// ---------------------------------------------------------------- 12

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Outcome reproducibility()
{
    namespace fs = std::filesystem;
    const fs::path root = fs::temp_directory_path() / ("sl2a_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);

    auto small = [&](TaskKind task) {
        RunConfig c = default_run_config(task);
        c.seed = 3;
        c.size = task == TaskKind::occupancy ? 12 : 16;
        c.angles = 12;
        c.samples = 300;
        c.model.width = 16;
        c.model.hidden_layers = 2;
        c.model.degree = 8;
        c.degree_set = true;
        c.train.epochs = 6;
        c.train.log_every = 2;
        c.train.batch_size = task == TaskKind::image || task == TaskKind::occupancy ? 64 : 0;
        return c;
    };

    std::vector<std::string> bad;
    std::size_t files = 0;
    auto same = [&](const fs::path& a, const fs::path& b) {
        ++files;
        if (!fs::exists(a) || slurp(a) != slurp(b)) bad.push_back(a.filename().string() + " in " + a.parent_path().filename().string());
    };

    const TaskKind tasks[] = {TaskKind::image, TaskKind::superres, TaskKind::inpaint,
                              TaskKind::ct,    TaskKind::occupancy, TaskKind::spectral};
    for (TaskKind t : tasks) {
        std::vector<fs::path> dirs;
        for (int rep = 0; rep < 2; ++rep) {
            RunConfig c = small(t);
            c.output_dir = (root / (std::string(to_string(t)) + "_" + std::to_string(rep))).string();
            c.name = std::string(to_string(t));
            dirs.push_back(run(c).dir);
        }
        same(dirs[0] / "report.csv", dirs[1] / "report.csv");
        if (t == TaskKind::spectral) same(dirs[0] / "spectral_errors.csv", dirs[1] / "spectral_errors.csv");
    }

    std::vector<fs::path> grids;
    for (int rep = 0; rep < 2; ++rep) {
        RunConfig c = small(TaskKind::image);
        c.output_dir = (root / ("grid_" + std::to_string(rep))).string();
        run_grid_search(c, {1e-3, 1e-2}, {64, 0});
        grids.push_back(c.output_dir);
    }
    same(grids[0] / "grid.csv", grids[1] / "grid.csv");

    for (int rep = 0; rep < 2; ++rep)
        run_compare({root / "image_0", root / "inpaint_0"}, (root / ("compare_" + std::to_string(rep))).string(), false);
    same(root / "compare_0" / "comparison.csv", root / "compare_1" / "comparison.csv");
    same(root / "compare_0" / "ranking.csv", root / "compare_1" / "ranking.csv");

    fs::remove_all(root);
    std::string detail = std::to_string(files) + " CSV pairs compared";
    for (const auto& b : bad) detail += "; differs: " + b;
    return {bad.empty(), detail};
}

struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> check;
};

}  // namespace

int main(int argc, char** argv)
{
    retain_freed_memory();
    const std::vector<Criterion> criteria{
        {1, "parameter counts", parameter_counts},
        {2, "Chebyshev recurrence vs cos(d acos x)", chebyshev_oracle},
        {3, "whole-network gradient checks", gradient_integrity},
        {4, "modulation identity", modulation_identity},
        {5, "spectral-bias direction", spectral_bias},
        {6, "image fitting: sl2a beats relu-pe by 3 dB", image_superiority},
        {7, "full model >= simple model on 3 images", skip_ablation},
        {8, "Radon operator correctness", radon_correctness},
        {9, "CT: sl2a beats relu-pe", ct_direction},
        {10, "occupancy IoU >= 0.97 within 300 epochs", occupancy},
        {11, "metric correctness", metric_correctness},
        {12, "byte-identical CSV reports", reproducibility},
        {13, "sl2a PSNR curve dominates past epoch 50", convergence_dominance},
    };

    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::stoi(argv[i]));

    int failed = 0;
    for (const auto& c : criteria) {
        if (!selected.empty() && !selected.count(c.id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.pass) ++failed;
        std::cout << (o.pass ? "PASS" : "FAIL") << " C" << c.id << " " << c.title << ": " << o.detail << " ["
                  << fmt(secs, 3) << " s]" << std::endl;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
    return failed == 0 ? 0 : 1;
}
