#include <golu/checkpoint.hpp>
#include <golu/train.hpp>
#include <golu/weight_stats.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <vector>

namespace {

using namespace golu;

TrainConfig quick_config() {
    TrainConfig cfg;
    cfg.epochs = 5;
    return cfg;
}

TEST(Train, TwoMoonsReachesHighAccuracyForEveryActivation) {
    for (ActivationTag tag : kAllActivationTags) {
        const auto kind = ActivationKind::from_tag(tag);
        const TrainResult r = train(mlp(2, {32, 32}, 2, kind), SyntheticTask{}, TrainConfig{});
        ASSERT_EQ(r.curve.size(), 300u);
        EXPECT_GE(r.curve.back().accuracy, 0.95) << activation_name(kind);
        EXPECT_LT(r.curve.back().train_loss, r.curve.front().train_loss) << activation_name(kind);
    }
}

TEST(Train, RingsAreLearnable) {
    SyntheticTask task;
    task.kind = TaskKind::Rings;
    TrainConfig cfg;
    cfg.epochs = 100;
    const TrainResult r = train(mlp(2, {32, 32}, 2, ActivationKind::golu()), task, cfg);
    EXPECT_GE(r.curve.back().accuracy, 0.95);
}

TEST(Train, IsBitwiseDeterministic) {
    const auto layers = mlp(2, {16}, 2, ActivationKind::golu());
    const TrainResult a = train(layers, SyntheticTask{}, quick_config());
    const TrainResult b = train(layers, SyntheticTask{}, quick_config());
    EXPECT_EQ(a.net.params(), b.net.params());
    TrainConfig other = quick_config();
    other.seed = 43;
    EXPECT_NE(train(layers, SyntheticTask{}, other).net.params(), a.net.params());
}

TEST(Train, ZeroLearningRateLeavesParametersUnchanged) {
    const auto layers = mlp(2, {8}, 2, ActivationKind::gelu());
    TrainConfig cfg = quick_config();
    cfg.lr = 0.0;
    cfg.epochs = 3;
    const TrainResult r = train(layers, SyntheticTask{}, cfg);
    MicroNet fresh(layers, Shape{2});
    Rng init_rng = Rng::stream(cfg.seed, 2);
    fresh.init(init_rng);
    EXPECT_EQ(r.net.params(), fresh.params());
}

TEST(Train, ConfigValidation) {
    TrainConfig cfg;
    cfg.lr = -0.1;
    EXPECT_THROW(cfg.validate(), UsageError);
    cfg = TrainConfig{};
    cfg.momentum = 1.0;
    EXPECT_THROW(cfg.validate(), UsageError);
    cfg = TrainConfig{};
    cfg.batch_size = 0;
    EXPECT_THROW(cfg.validate(), UsageError);
}

TEST(Train, DivergenceNamesTheEpoch) {
    TrainConfig cfg = quick_config();
    cfg.lr = 1e200;
    cfg.momentum = 0.0;
    try {
        train(mlp(2, {8}, 2, ActivationKind::relu()), SyntheticTask{}, cfg);
        FAIL() << "expected TrainingFailure";
    } catch (const TrainingFailure& e) {
        EXPECT_GE(e.epoch(), 1u);
        EXPECT_NE(std::string(e.what()).find("epoch"), std::string::npos);
    }
}

TEST(Sgd, MomentumZeroIsPlainGradientDescent) {
    std::vector<double> w{1.0, -2.0, 0.5};
    const std::vector<double> g{0.3, -0.1, 2.0};
    SgdMomentum opt(0.05, 0.0, 0.0, 3);
    opt.step(w, g);
    EXPECT_EQ(w, (std::vector<double>{1.0 - 0.05 * 0.3, -2.0 - 0.05 * -0.1, 0.5 - 0.05 * 2.0}));
    opt.step(w, g);
    EXPECT_EQ(w[0], (1.0 - 0.05 * 0.3) - 0.05 * 0.3);
}

TEST(Sgd, HeavyBallWithWeightDecay) {
    std::vector<double> w{1.0};
    SgdMomentum opt(0.1, 0.9, 0.01, 1);
    opt.step(w, {0.5});
    // v = 0.5 + 0.01, w = 1 - 0.051
    EXPECT_DOUBLE_EQ(w[0], 1.0 - 0.1 * 0.51);
    const double w1 = w[0];
    opt.step(w, {0.5});
    const double v2 = 0.9 * 0.51 + (0.5 + 0.01 * w1);
    EXPECT_DOUBLE_EQ(w[0], w1 - 0.1 * v2);
}

TEST(Curve, CsvHeader) {
    std::ostringstream os;
    write_curve_csv(os, {CurvePoint{1, 0.5, 0.6, 0.9, 0.8}});
    EXPECT_EQ(os.str(), "epoch,train_loss,eval_loss,accuracy,eval_accuracy\n1,0.5,0.6,0.9,0.8\n");
}

TEST(WeightStats, FullIntervalVariance) {
    const std::vector<double> w{-1.0, 0.0, 1.0};
    const WeightStats s = weight_stats(w, 20);
    EXPECT_DOUBLE_EQ(s.bulk_variance, 2.0 / 3.0);
    EXPECT_EQ(s.included, 3u);
    EXPECT_EQ(s.bulk_count, 3u);
}

TEST(WeightStats, ClippedIntervalExcludingTheTails) {
    const std::vector<double> w{-1.0, 0.0, 1.0};
    const WeightStats s = weight_stats(w, 20, Interval{-0.5, 0.5});
    EXPECT_EQ(s.bulk_variance, 0.0);
    EXPECT_EQ(s.bulk_count, 1u);
    EXPECT_EQ(s.histogram.total(), 3u);
}

TEST(WeightStats, Validation) {
    const std::vector<double> w{-1.0, 0.0, 1.0};
    EXPECT_THROW(weight_stats(w, 19), UsageError);
    EXPECT_THROW(weight_stats(std::vector<double>{}, 20), UsageError);
    MicroNet bn_only({BatchNormSpec{3}}, Shape{3});
    EXPECT_THROW(weight_stats(bn_only, 20), UsageError);
}

TEST(WeightStats, BatchNormParametersAreExcluded) {
    MicroNet net({DenseSpec{4, 5}, BatchNormSpec{5}, ActSpec{ActivationKind::golu()}, DenseSpec{5, 2}}, Shape{4});
    net.init(3);
    const WeightStats s = weight_stats(net, 20);
    EXPECT_EQ(s.included, (4 * 5 + 5) + (5 * 2 + 2));
    EXPECT_EQ(net.param_count(), s.included + 10);
}

TEST(WeightStats, CommonBulkIntervalIsTheIntersection) {
    std::vector<double> a(101);
    std::vector<double> b(101);
    for (int i = 0; i <= 100; ++i) {
        a[i] = i;
        b[i] = i + 10.0;
    }
    const Interval iv = common_bulk_interval({a, b});
    EXPECT_DOUBLE_EQ(iv.lo, 11.0);
    EXPECT_DOUBLE_EQ(iv.hi, 99.0);
}

TEST(Checkpoint, RoundTripIsBitExact) {
    std::vector<LayerSpec> layers{Conv3x3Spec{1, 2},
                                  BatchNormSpec{2, 1e-3, 0.2},
                                  ActSpec{ActivationKind::leaky_relu(0.2)},
                                  DenseSpec{2 * 3 * 3, 4},
                                  ActSpec{ActivationKind::elu(0.5)},
                                  DenseSpec{4, 2}};
    MicroNet net(layers, Shape{1, 3, 3});
    net.init(8);
    net.forward(Tensor<double>(Shape{2, 1, 3, 3}, std::vector<double>(18, 0.25)));
    std::stringstream ss;
    save_checkpoint(ss, net);
    const MicroNet back = load_checkpoint(ss);
    EXPECT_EQ(back.layers(), net.layers());
    EXPECT_EQ(back.sample_shape(), net.sample_shape());
    EXPECT_EQ(back.params(), net.params());
    EXPECT_EQ(back.buffers(), net.buffers());
    EXPECT_EQ(back.mode(), Mode::Eval);
    const Tensor<double> probe(Shape{1, 1, 3, 3}, 0.5);
    EXPECT_EQ(back.predict(probe), net.predict(probe));
}

TEST(Checkpoint, MalformedFilesAreDataErrors) {
    MicroNet net({DenseSpec{2, 2}}, Shape{2});
    net.init(1);
    std::stringstream ss;
    save_checkpoint(ss, net);
    const std::string good = ss.str();

    std::istringstream bad_magic("NOTACKPT" + good.substr(8));
    EXPECT_THROW(load_checkpoint(bad_magic), DataError);

    std::istringstream truncated(good.substr(0, good.size() - 4));
    EXPECT_THROW(load_checkpoint(truncated), DataError);

    std::string wrong_layers = good;
    const auto pos = wrong_layers.find("\"in\":2");
    ASSERT_NE(pos, std::string::npos);
    wrong_layers[pos + 5] = '3';
    std::istringstream inconsistent(wrong_layers);
    EXPECT_THROW(load_checkpoint(inconsistent), DataError);

    EXPECT_THROW(load_checkpoint(std::string("/nonexistent/ckpt.bin")), DataError);
}

} // namespace
