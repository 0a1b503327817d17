#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "sl2a/io/config.hpp"
#include "sl2a/io/format.hpp"
#include "sl2a/io/grid.hpp"
#include "sl2a/io/heatmap.hpp"
#include "sl2a/io/pnm.hpp"
#include "sl2a/io/report.hpp"
#include "sl2a/io/run.hpp"
#include "sl2a/tasks/builtin.hpp"

using namespace sl2a;
namespace fs = std::filesystem;

namespace {

std::vector<unsigned char> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

class TempDir : public ::testing::Test {
protected:
    void SetUp() override
    {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        root_ = fs::temp_directory_path() / ("sl2a_test_" + std::string(info->name()));
        fs::remove_all(root_);
        fs::create_directories(root_);
    }
    void TearDown() override { fs::remove_all(root_); }
    fs::path root_;
};

RunConfig tiny(TaskKind task, const fs::path& dir)
{
    RunConfig c = default_run_config(task);
    c.output_dir = dir.string();
    c.size = task == TaskKind::occupancy ? 10 : 16;
    c.angles = 8;
    c.model.width = 12;
    c.model.hidden_layers = 1;
    c.model.degree = 6;
    c.degree_set = true;
    c.train.epochs = 4;
    c.train.log_every = 2;
    return c;
}

}  // namespace

TEST(Format, ShortestRoundTrip)
{
    Rng rng(1);
    for (int i = 0; i < 1000; ++i) {
        const double v = rng.normal() * std::pow(10.0, rng.uniform(-30, 30));
        EXPECT_EQ(parse_number(format_number(v)), v);
    }
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(20.0), "20");
    EXPECT_THROW(parse_number("1.5x"), ParseError);
}

TEST(Pnm, SixteenBitRoundTripIsExactOnCodeValues)
{
    Rng rng(2);
    for (std::size_t channels : {1u, 3u}) {
        ImageBuffer img(7, 5, channels);
        for (double& v : img.values) v = static_cast<double>(rng.below(65536)) / 65535.0;
        const ImageBuffer back = decode_pnm(bytes_of(encode_pnm(img, 16)));
        ASSERT_EQ(back.width, 7u);
        ASSERT_EQ(back.height, 5u);
        ASSERT_EQ(back.channels, channels);
        for (std::size_t i = 0; i < img.values.size(); ++i) EXPECT_EQ(back.values[i], img.values[i]);
    }
}

TEST(Pnm, EightBitQuantizes)
{
    ImageBuffer img(2, 1, 1);
    img.values = {0.5, 1.0};
    const ImageBuffer back = decode_pnm(bytes_of(encode_pnm(img, 8)));
    EXPECT_NEAR(back.values[0], 128.0 / 255.0, 1e-15);
    EXPECT_EQ(back.values[1], 1.0);
}

TEST(Pnm, AsciiAndMaxValue)
{
    const ImageBuffer one = decode_pnm(bytes_of("P2\n# comment\n1 1\n65535\n65535\n"));
    EXPECT_EQ(one.values[0], 1.0);
    const ImageBuffer rgb = decode_pnm(bytes_of("P3 2 1 4  0 2 4  4 4 0"));
    EXPECT_EQ(rgb.channels, 3u);
    EXPECT_EQ(rgb.values[1], 0.5);
    EXPECT_EQ(decode_pnm(bytes_of("P5 1 1 255\n\xff")).values[0], 1.0);
}

TEST(Pnm, ErrorsCarryOffsets)
{
    try {
        decode_pnm(bytes_of("Q5 1 1 255\n\x01"));
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.offset(), 0u);
    }
    EXPECT_THROW(decode_pnm(bytes_of("P5 2 2 255\n\x01")), ParseError);
    EXPECT_THROW(decode_pnm(bytes_of("P5 0 2 255\n")), ParseError);
    EXPECT_THROW(decode_pnm(bytes_of("P5 1 1 70000\n\x01\x01")), ParseError);
    EXPECT_THROW(load_image("/nonexistent/x.pgm"), IoError);
}

TEST(Grid, RoundTrip)
{
    Rng rng(3);
    GridData g{{3, 4, 2}, {}};
    for (std::size_t i = 0; i < 24; ++i) g.values.push_back(rng.normal());
    const GridData back = decode_grid(bytes_of(encode_grid(g)));
    EXPECT_EQ(back.dims, g.dims);
    EXPECT_EQ(back.values, g.values);

    GridData u{{5}, {0, 1, 2, 255, 7}};
    EXPECT_EQ(decode_grid(bytes_of(encode_grid(u, "u8"))).values, u.values);
    u.values[1] = 1.5;
    EXPECT_THROW(encode_grid(u, "u8"), DomainError);
}

TEST(Grid, TextEncodingAndErrors)
{
    const GridData t = decode_grid(bytes_of("sl2a-grid 1\ndims 2 2\ndtype f64\nencoding text\nend\n1 2\n3 4.5\n"));
    EXPECT_EQ(t.values, (std::vector<double>{1, 2, 3, 4.5}));
    EXPECT_THROW(decode_grid(bytes_of("sl2a-grid 2\ndims 1\ndtype f64\nencoding text\nend\n1\n")), ParseError);
    EXPECT_THROW(decode_grid(bytes_of("sl2a-grid 1\ndims 2\ndtype f64\nencoding text\nend\n1\n")), ParseError);
    EXPECT_THROW(decode_grid(bytes_of("sl2a-grid 1\ndims 1\ndtype f32\nencoding text\nend\n1\n")), ParseError);
}

TEST(Grid, VolumeAndImageConversions)
{
    const VolumeGrid v = builtin::sphere(6);
    EXPECT_EQ(to_volume(to_grid(v)).values, v.values);
    const ImageBuffer img = builtin::shepp_logan(8);
    EXPECT_EQ(to_image(to_grid(img)).values, img.values);
    EXPECT_THROW(to_volume(to_grid(img)), ShapeError);
}

TEST(Heatmap, CellsArePureStopColours)
{
    const Matrix table = Matrix::from_rows({{0.0, 1.0}, {0.5, 0.25}});
    HeatmapOptions opt;
    opt.cell_width = 3;
    opt.cell_height = 2;
    const Heatmap h = render_heatmap(table, opt);
    EXPECT_EQ(h.image.width, 6u);
    EXPECT_EQ(h.image.height, 4u);
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_EQ(h.image.at(0, 0, k), kHeatmapStops[0][k]);   // step 0, first frequency: lo
        EXPECT_EQ(h.image.at(3, 2, k), kHeatmapStops[4][k]);   // step 0, second frequency: hi
        EXPECT_EQ(h.image.at(1, 5, k), kHeatmapStops[2][k]);   // step 1, first frequency: mid
        EXPECT_EQ(h.image.at(2, 4, k), kHeatmapStops[1][k]);   // step 1, second frequency
    }
    const std::string side = heatmap_sidecar(h, table, opt);
    EXPECT_EQ(side.rfind("sl2a-heatmap 1\nrange 0 1\n", 0), 0u);
}

TEST(Report, CsvRoundTrip)
{
    std::vector<EpochRecord> recs{{10, 0.125, 20.5, 0.0}, {20, 1e-9, 31.25, 0.0}};
    const std::string csv = report_csv(recs);
    EXPECT_EQ(csv, "epoch,loss,metric,seconds\n10,0.125,20.5,0\n20,1e-09,31.25,0\n");
    const auto back = parse_report_csv(csv);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[1].loss, 1e-9);
    EXPECT_THROW(parse_report_csv("epoch,loss\n"), ParseError);
    EXPECT_THROW(parse_report_csv("epoch,loss,metric,seconds\n1,2,3\n"), ParseError);
}

TEST(Report, CompareAlignsAndRanks)
{
    StoredReport a{"a", "psnr", {{10, 0, 20, 0}, {20, 0, 22, 0}}};
    StoredReport b{"b", "psnr", {{10, 0, 21, 0}, {20, 0, 25, 0}, {30, 0, 26, 0}}};
    const Comparison c = compare({a, b});
    EXPECT_EQ(c.comparison_csv, "epoch,psnr_a,psnr_b,delta_b\n10,20,21,1\n20,22,25,3\n");
    EXPECT_EQ(c.ranking_csv, "rank,name,best_psnr,best_epoch\n1,b,26,30\n2,a,22,20\n");
    StoredReport s{"s", "spectral", {{10, 0, 0.5, 0}}};
    EXPECT_THROW(compare({a, s}), ConfigError);
    EXPECT_THROW(compare({a}), ConfigError);
}

TEST(Report, SpectralRanksLowerFirst)
{
    StoredReport a{"a", "spectral", {{10, 0, 0.5, 0}}};
    StoredReport b{"b", "spectral", {{10, 0, 0.2, 0}}};
    EXPECT_EQ(compare({a, b}).ranking_csv.substr(0, 40).find("1,b"), std::string("rank,name,best_spectral,best_epoch\n").size());
}

TEST(Config, DefaultsPerTask)
{
    EXPECT_EQ(default_run_config(TaskKind::image).model.degree, 512u);
    EXPECT_EQ(default_run_config(TaskKind::superres).model.degree, 200u);
    EXPECT_EQ(default_run_config(TaskKind::ct).model.degree, 128u);
    EXPECT_EQ(default_run_config(TaskKind::spectral).model.degree, 64u);
    EXPECT_EQ(default_run_config(TaskKind::occupancy).model.degree, 512u);
    EXPECT_EQ(default_run_config(TaskKind::ct).builtin, "shepp-logan");
}

TEST(Config, JsonRoundTrip)
{
    RunConfig c = default_run_config(TaskKind::inpaint);
    c.seed = 17;
    c.keep_fraction = 0.4;
    c.model.architecture = Architecture::relu_pe;
    c.model.rank = 8;
    c.train.learning_rate = 0.002;
    c.train.target_metric = 30.0;
    const RunConfig back = apply_config_json(default_run_config(TaskKind::inpaint), config_to_json(c));
    EXPECT_EQ(config_to_json(back), config_to_json(c));
}

TEST(Config, AllErrorsReportedTogether)
{
    const auto j = nlohmann::json::parse(R"({"seed": -1, "model": {"width": "wide", "colour": 1}, "bogus": true})");
    try {
        apply_config_json(default_run_config(TaskKind::image), j);
        FAIL();
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        EXPECT_NE(what.find("seed"), std::string::npos);
        EXPECT_NE(what.find("model.width"), std::string::npos);
        EXPECT_NE(what.find("model.colour"), std::string::npos);
        EXPECT_NE(what.find("bogus"), std::string::npos);
    }
}

TEST(Config, ResolveRejectsBadValues)
{
    RunConfig c = default_run_config(TaskKind::inpaint);
    c.keep_fraction = 0.0;
    c.bit_depth = 12;
    try {
        resolve_config(c);
        FAIL();
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        EXPECT_NE(what.find("keep_fraction"), std::string::npos);
        EXPECT_NE(what.find("bit_depth"), std::string::npos);
    }
}

TEST_F(TempDir, RunWritesArtifactsForEveryTask)
{
    const std::pair<TaskKind, std::vector<const char*>> expected[] = {
        {TaskKind::image, {"reconstruction.ppm", "reference.ppm"}},
        {TaskKind::superres, {"reconstruction.ppm"}},
        {TaskKind::inpaint, {"mask.pgm", "reconstruction.ppm"}},
        {TaskKind::ct, {"sinogram.grid", "reconstruction.pgm"}},
        {TaskKind::occupancy, {"reconstruction.grid", "occupancy.grid"}},
        {TaskKind::spectral, {"prediction.csv", "spectral_errors.csv", "heatmap.ppm", "heatmap.txt"}},
    };
    for (const auto& [task, files] : expected) {
        const fs::path dir = root_ / std::string(to_string(task));
        const RunResult r = run(tiny(task, dir));
        for (const char* f : {"config.json", "report.csv", "summary.json", "checkpoint.bin"})
            EXPECT_TRUE(fs::exists(dir / f)) << to_string(task) << " " << f;
        for (const char* f : files) EXPECT_TRUE(fs::exists(dir / f)) << to_string(task) << " " << f;
        EXPECT_EQ(r.summary.at("task"), std::string(to_string(task)));
        EXPECT_EQ(parse_report_csv(slurp(dir / "report.csv")).size(), 2u);
        const Network back = load_checkpoint(dir / "checkpoint.bin");
        EXPECT_EQ(back.count_params(), r.summary.at("param_count").get<std::size_t>());
    }
    const GridData sino = load_grid(root_ / "ct" / "sinogram.grid");
    EXPECT_EQ(sino.dims, (std::vector<std::size_t>{16, 8}));
    EXPECT_EQ(slurp(root_ / "spectral" / "spectral_errors.csv").substr(0, 46),
              "epoch,error_3pi,error_5pi,error_7pi,error_9pi\n");
}

TEST_F(TempDir, RerunsAreByteIdentical)
{
    for (TaskKind task : {TaskKind::image, TaskKind::occupancy, TaskKind::spectral}) {
        RunConfig a = tiny(task, root_ / "a");
        a.train.batch_size = task == TaskKind::spectral ? 0 : 32;
        a.seed = 5;
        a.overwrite = true;
        RunConfig b = a;
        b.output_dir = (root_ / "b").string();
        run(a);
        run(b);
        EXPECT_EQ(slurp(root_ / "a" / "report.csv"), slurp(root_ / "b" / "report.csv")) << to_string(task);
        EXPECT_EQ(slurp(root_ / "a" / "checkpoint.bin"), slurp(root_ / "b" / "checkpoint.bin")) << to_string(task);
    }
}

TEST_F(TempDir, RefusesNonEmptyDirectoryWithoutOverwrite)
{
    const RunConfig c = tiny(TaskKind::image, root_ / "out");
    run(c);
    EXPECT_THROW(run(c), ConfigError);
    RunConfig o = c;
    o.overwrite = true;
    EXPECT_NO_THROW(run(o));
}

TEST_F(TempDir, OutputRootVariable)
{
    ::setenv(kOutputRootVariable, root_.c_str(), 1);
    EXPECT_EQ(resolve_output_dir("rel"), root_ / "rel");
    EXPECT_EQ(resolve_output_dir("/abs/x"), fs::path("/abs/x"));
    ::unsetenv(kOutputRootVariable);
    EXPECT_EQ(resolve_output_dir("rel"), fs::path("rel"));
}

TEST_F(TempDir, CompareSelfHasZeroDeltas)
{
    run(tiny(TaskKind::image, root_ / "x"));
    const Comparison c = run_compare({root_ / "x", root_ / "x"}, (root_ / "cmp").string(), false);
    std::istringstream lines(c.comparison_csv);
    std::string line;
    std::getline(lines, line);
    while (std::getline(lines, line)) EXPECT_EQ(line.substr(line.rfind(',') + 1), "0");
    EXPECT_TRUE(fs::exists(root_ / "cmp" / "ranking.csv"));
}

TEST_F(TempDir, GridSearchCsv)
{
    RunConfig c = tiny(TaskKind::image, root_ / "grid");
    c.train.epochs = 2;
    run_grid_search(c, {1e-3, 1e-2}, {64, 0});
    const std::string csv = slurp(root_ / "grid" / "grid.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "learning_rate,batch_size,best_psnr,best_epoch,final_loss,seconds");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

TEST_F(TempDir, InputFileTakesPrecedence)
{
    ImageBuffer img(8, 8, 1, 0.25);
    save_image(img, root_ / "in.pgm");
    RunConfig c = tiny(TaskKind::image, root_ / "out");
    c.path = (root_ / "in.pgm").string();
    const RunResult r = run(c);
    EXPECT_EQ(r.summary.at("param_count").get<std::size_t>(), build([&] {
                                                                   ModelSpec s = resolve_config(c).model;
                                                                   s.output_dim = 1;
                                                                   return s;
                                                               }()).count_params());
}
