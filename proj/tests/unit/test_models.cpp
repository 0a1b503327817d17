#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "sl2a/models/checkpoint.hpp"
#include "sl2a/models/network.hpp"
#include "sl2a/numerics/gradient_check.hpp"

using namespace sl2a;
using sl2a::testing::random_matrix;

namespace {

ModelSpec toy(Architecture a, std::uint64_t seed = 0)
{
    ModelSpec s;
    s.architecture = a;
    s.input_dim = 2;
    s.output_dim = 3;
    s.width = 8;
    s.hidden_layers = 2;
    s.degree = 5;
    s.omega0 = 3.0;
    s.gauss_spread = 2.0;
    s.fourier.num_frequencies = 3;
    s.seed = seed;
    return s;
}

const Architecture kAll[] = {Architecture::sl2a,    Architecture::sl2a_simple, Architecture::relu_mlp,
                             Architecture::relu_pe, Architecture::siren,       Architecture::gauss};

}  // namespace

TEST(ModelSpec, ArchitectureTagsRoundTrip)
{
    for (Architecture a : kAll) EXPECT_EQ(parse_architecture(to_string(a)), a);
    EXPECT_THROW(parse_architecture("kan"), ConfigError);
}

TEST(ModelSpec, ValidationRejectsBadFields)
{
    ModelSpec s;
    s.width = 0;
    EXPECT_THROW(s.validate(), ConfigError);
    s = ModelSpec{};
    s.rank = 300;
    EXPECT_THROW(s.validate(), ConfigError);
    s = ModelSpec{};
    s.degree = 0;
    EXPECT_THROW(s.validate(), ConfigError);
}

TEST(Network, CountsMatchFormula)
{
    Rng rng(1);
    for (int trial = 0; trial < 30; ++trial) {
        for (Architecture a : kAll) {
            ModelSpec s = toy(a);
            s.width = 2 + rng.below(20);
            s.hidden_layers = rng.below(4);
            s.degree = 1 + rng.below(16);
            s.input_dim = 1 + rng.below(3);
            if (rng.bernoulli(0.3)) s.rank = 1 + rng.below(std::min<std::uint64_t>(s.width, 4));
            EXPECT_EQ(build(s).count_params(), formula_param_count(s)) << to_string(a);
        }
    }
}

TEST(Network, PaperScaleCounts)
{
    ModelSpec s;  // n=2, out=3, width 256, 3 hidden layers, D=512
    const std::size_t ln = 2 * 256;
    EXPECT_EQ(formula_param_count(s), 460291u + ln);
    s.degree = 256;
    s.rank = 32;
    EXPECT_EQ(formula_param_count(s), 189283u + ln);
    s = ModelSpec{};
    s.width = 128;
    s.degree = 500;
    EXPECT_EQ(formula_param_count(s), 178179u);
}

TEST(Network, GradientChecksEveryArchitecture)
{
    for (Architecture a : kAll) {
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            Network net = build(toy(a, seed));
            Rng rng(seed + 50);
            const auto rep = gradient_check(net, random_matrix(4, 2, rng, -0.9, 0.9));
            EXPECT_TRUE(rep.passed) << to_string(a) << " seed " << seed << " " << rep.worst << " " << rep.max_error();
        }
    }
}

TEST(Network, LowRankGradientCheck)
{
    ModelSpec s = toy(Architecture::sl2a);
    s.rank = 3;
    Network net = build(s);
    Rng rng(2);
    const auto rep = gradient_check(net, random_matrix(4, 2, rng, -0.9, 0.9));
    EXPECT_TRUE(rep.passed) << rep.worst << " " << rep.max_error();
}

TEST(Network, ForcedModulatorEqualsSimpleModel)
{
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Network full = build(toy(Architecture::sl2a, seed));
        Network simple = build(toy(Architecture::sl2a_simple, seed));
        simple.restore(full.snapshot());
        Rng rng(seed);
        const Matrix x = random_matrix(16, 2, rng);
        full.force_modulator_ones(true);
        EXPECT_LE(max_abs_diff(full.forward(x), simple.forward(x)), 1e-12);
        full.force_modulator_ones(false);
        EXPECT_GT(max_abs_diff(full.forward(x), simple.forward(x)), 1e-6);
    }
}

TEST(Network, ForcedModulatorGradientCheck)
{
    Network net = build(toy(Architecture::sl2a, 4));
    net.force_modulator_ones(true);
    Rng rng(4);
    const auto rep = gradient_check(net, random_matrix(4, 2, rng, -0.9, 0.9));
    EXPECT_TRUE(rep.passed) << rep.worst << " " << rep.max_error();
}

TEST(Network, SameSeedSameWeights)
{
    for (Architecture a : kAll) {
        const auto w1 = build(toy(a, 9)).snapshot();
        const auto w2 = build(toy(a, 9)).snapshot();
        ASSERT_EQ(w1.size(), w2.size());
        for (std::size_t i = 0; i < w1.size(); ++i) EXPECT_EQ(w1[i], w2[i]);
    }
}

TEST(Network, SirenPreActivationScale)
{
    ModelSpec s;
    s.architecture = Architecture::siren;
    s.width = 256;
    s.output_dim = 1;
    Network net = build(s);
    Rng rng(3);
    const Matrix x = random_matrix(10000, 2, rng);
    Matrix y = net.layer(1).forward(net.layer(0).forward(x));
    const Matrix z = net.layer(2).forward(y);
    double s2 = 0.0;
    for (double v : z.data()) s2 += (s.omega0 * v) * (s.omega0 * v);
    const double sd = std::sqrt(s2 / static_cast<double>(z.size()));
    EXPECT_GE(sd, 0.5);
    EXPECT_LE(sd, 2.0);
}

TEST(Network, PredictEqualsForwardInChunks)
{
    Network net = build(toy(Architecture::sl2a, 1));
    Rng rng(5);
    const Matrix x = random_matrix(50, 2, rng);
    const Matrix full = net.forward(x);
    net.clear_cache();
    EXPECT_LE(max_abs_diff(net.predict(x, 7), full), 1e-15);
}

TEST(Network, WrongInputWidthRejected)
{
    Network net = build(toy(Architecture::relu_mlp));
    EXPECT_THROW(net.forward(Matrix(3, 3)), ShapeError);
}

TEST(Checkpoint, RoundTripPreservesOutputs)
{
    for (Architecture a : kAll) {
        ModelSpec s = toy(a, 2);
        if (a == Architecture::sl2a) s.rank = 2;
        Network net = build(s);
        const std::string bytes = serialize_checkpoint(net);
        Network back = deserialize_checkpoint(bytes);
        EXPECT_EQ(back.count_params(), net.count_params());
        Rng rng(1);
        const Matrix x = random_matrix(5, 2, rng);
        EXPECT_EQ(back.predict(x), net.predict(x)) << to_string(a);
        EXPECT_EQ(serialize_checkpoint(back), bytes);
    }
}

TEST(Checkpoint, CorruptInputRaisesParseError)
{
    Network net = build(toy(Architecture::sl2a));
    const std::string bytes = serialize_checkpoint(net);
    std::string bad = bytes;
    bad[0] = 'X';
    EXPECT_THROW(deserialize_checkpoint(bad), ParseError);
    EXPECT_THROW(deserialize_checkpoint(bytes.substr(0, bytes.size() - 5)), ParseError);
    EXPECT_THROW(deserialize_checkpoint(bytes + "z"), ParseError);
    EXPECT_THROW(deserialize_checkpoint(""), ParseError);
}
