#include <golu/gradcheck.hpp>
#include <golu/micronet.hpp>
#include <golu/rng.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace {

using namespace golu;

Tensor<double> random_tensor(Shape shape, std::uint64_t seed, double scale = 1.0) {
    Rng rng(seed);
    std::vector<double> v(shape_size(shape));
    for (auto& x : v) {
        x = rng.normal(0.0, scale);
    }
    return Tensor<double>(std::move(shape), std::move(v));
}

std::vector<int> random_labels(std::size_t n, std::size_t classes, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<int> y(n);
    for (auto& v : y) {
        v = static_cast<int>(rng.below(classes));
    }
    return y;
}

std::vector<ActivationKind> all_kinds() {
    std::vector<ActivationKind> out;
    for (ActivationTag t : kAllActivationTags) {
        out.push_back(ActivationKind::from_tag(t));
    }
    return out;
}

TEST(MicroNet, IdentityNetLeavesTheBatchUnchanged) {
    MicroNet net({}, Shape{3});
    const auto x = random_tensor(Shape{4, 3}, 1);
    EXPECT_EQ(net.forward(x), x);
    EXPECT_EQ(net.param_count(), 0u);
}

TEST(MicroNet, ReluLayer) {
    MicroNet net({ActSpec{ActivationKind::relu()}}, Shape{2});
    const auto y = net.forward(Tensor<double>(Shape{1, 2}, std::vector<double>{-1.0, 2.0}));
    EXPECT_EQ(y.vector(), (std::vector<double>{0.0, 2.0}));
}

TEST(MicroNet, ZeroConvolutionGivesZeros) {
    MicroNet net({Conv3x3Spec{2, 3}}, Shape{2, 5, 4});
    ASSERT_EQ(net.output_shape(), (Shape{3, 5, 4}));
    const auto y = net.forward(random_tensor(Shape{2, 2, 5, 4}, 2));
    EXPECT_EQ(y.shape(), (Shape{2, 3, 5, 4}));
    for (double v : y.vector()) {
        ASSERT_EQ(v, 0.0);
    }
}

TEST(MicroNet, RejectsShapesThatDoNotCompose) {
    EXPECT_THROW(MicroNet({DenseSpec{3, 2}, DenseSpec{3, 1}}, Shape{3}), UsageError);
    EXPECT_THROW(MicroNet({Conv3x3Spec{2, 3}, BatchNormSpec{2}}, Shape{2, 4, 4}), UsageError);
    EXPECT_THROW(MicroNet({Conv3x3Spec{2, 3}}, Shape{2}), UsageError);
    MicroNet net({DenseSpec{3, 2}}, Shape{3});
    EXPECT_THROW(net.forward(Tensor<double>(Shape{2, 4})), UsageError);
}

TEST(MicroNet, BackwardBeforeForwardIsAUsageError) {
    MicroNet net({DenseSpec{2, 2}}, Shape{2});
    net.init(1);
    EXPECT_THROW(net.backward(Tensor<double>(Shape{1, 2})), UsageError);
    net.forward(Tensor<double>(Shape{3, 2}, 1.0));
    EXPECT_THROW(net.backward(Tensor<double>(Shape{2, 2})), UsageError);
}

TEST(MicroNet, ZeroLossGradientGivesZeroGrads) {
    MicroNet net({Conv3x3Spec{1, 2}, BatchNormSpec{2}, ActSpec{ActivationKind::golu()}, DenseSpec{18, 2}},
                 Shape{1, 3, 3});
    net.init(3);
    net.forward(random_tensor(Shape{4, 1, 3, 3}, 4));
    net.backward(Tensor<double>(Shape{4, 2}, 0.0));
    for (double g : net.grads()) {
        ASSERT_EQ(g, 0.0);
    }
}

TEST(MicroNet, DenseSquaredLossGradient) {
    MicroNet net({DenseSpec{1, 1}}, Shape{1});
    net.params() = {0.7, -0.2};
    const double x = 1.5;
    const double target = 0.4;
    const auto out = net.forward(Tensor<double>(Shape{1, 1}, x));
    const double r = 0.7 * x - 0.2 - target;
    EXPECT_DOUBLE_EQ(out[0], 0.7 * x - 0.2);
    net.backward(Tensor<double>(Shape{1, 1}, 2.0 * (out[0] - target)));
    EXPECT_DOUBLE_EQ(net.grads()[0], 2.0 * r * x);
    EXPECT_DOUBLE_EQ(net.grads()[1], 2.0 * r);
}

TEST(MicroNet, InitIsKaimingUniformWithZeroBias) {
    MicroNet net({DenseSpec{50, 40}, BatchNormSpec{40}}, Shape{50});
    net.init(9);
    const double bound = std::sqrt(6.0 / 50.0);
    for (const auto& g : net.groups()) {
        for (std::size_t k = 0; k < g.size; ++k) {
            const double w = net.params()[g.offset + k];
            switch (g.role) {
            case ParamRole::Weight: ASSERT_LE(std::fabs(w), bound); break;
            case ParamRole::Bias: ASSERT_EQ(w, 0.0); break;
            case ParamRole::BnScale: ASSERT_EQ(w, 1.0); break;
            case ParamRole::BnShift: ASSERT_EQ(w, 0.0); break;
            }
        }
    }
    MicroNet again({DenseSpec{50, 40}, BatchNormSpec{40}}, Shape{50});
    again.init(9);
    EXPECT_EQ(net.params(), again.params());
}

TEST(BatchNorm, TrainModeNormalizesPerChannel) {
    const std::size_t c = 3;
    MicroNet net({BatchNormSpec{c}}, Shape{c, 4, 5});
    net.init(1);
    auto x = random_tensor(Shape{6, c, 4, 5}, 11, 3.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] += static_cast<double>((i / 20) % c);  // per-channel offset
    }
    const auto y = net.forward(x);
    for (std::size_t ch = 0; ch < c; ++ch) {
        double s = 0.0;
        double s2 = 0.0;
        std::size_t m = 0;
        for (std::size_t n = 0; n < 6; ++n) {
            for (std::size_t p = 0; p < 20; ++p) {
                const double v = y[(n * c + ch) * 20 + p];
                s += v;
                s2 += v * v;
                ++m;
            }
        }
        const double mean = s / static_cast<double>(m);
        EXPECT_NEAR(mean, 0.0, 1e-6);
        EXPECT_NEAR(s2 / static_cast<double>(m) - mean * mean, 1.0, 1e-5);
    }
}

TEST(BatchNorm, RunningStatisticsAndEvalMode) {
    MicroNet net({BatchNormSpec{2, 1e-5, 0.1}}, Shape{2});
    net.init(1);
    const Tensor<double> x(Shape{2, 2}, std::vector<double>{1.0, 10.0, 3.0, 20.0});
    net.forward(x);
    // mean (2, 15), unbiased variance (2, 50)
    EXPECT_DOUBLE_EQ(net.buffers()[0], 0.2);
    EXPECT_DOUBLE_EQ(net.buffers()[1], 1.5);
    EXPECT_DOUBLE_EQ(net.buffers()[2], 0.9 + 0.2);
    EXPECT_DOUBLE_EQ(net.buffers()[3], 0.9 + 5.0);

    const auto before = net.buffers();
    const auto y = net.predict(x);
    EXPECT_EQ(net.buffers(), before);
    EXPECT_NEAR(y[0], (1.0 - 0.2) / std::sqrt(1.1 + 1e-5), 1e-12);
}

struct Arch {
    const char* name;
    std::vector<LayerSpec> layers;
    Shape sample;
    std::size_t classes;
};

std::vector<Arch> architectures(const ActivationKind& k) {
    return {
        {"dense", {DenseSpec{4, 3}, ActSpec{k}, DenseSpec{3, 2}}, Shape{4}, 2},
        {"conv_bn_dense",
         {Conv3x3Spec{2, 3}, BatchNormSpec{3}, ActSpec{k}, DenseSpec{3 * 4 * 4, 3}},
         Shape{2, 4, 4},
         3},
        {"conv_act_conv", {Conv3x3Spec{2, 3}, ActSpec{k}, Conv3x3Spec{3, 1}}, Shape{2, 3, 3}, 9},
    };
}

TEST(GradCheck, EveryActivationOnThreeArchitectures) {
    std::uint64_t seed = 100;
    for (const auto& kind : all_kinds()) {
        for (auto& arch : architectures(kind)) {
            MicroNet net(arch.layers, arch.sample);
            net.init(++seed);
            Shape bshape{5};
            bshape.insert(bshape.end(), arch.sample.begin(), arch.sample.end());
            const auto batch = random_tensor(bshape, ++seed);
            const auto labels = random_labels(5, arch.classes, ++seed);
            const GradCheckReport r = grad_check(net, batch, labels, 1e-5);
            EXPECT_LT(r.max_rel_err, 1e-5) << activation_name(kind) << " / " << arch.name;
            EXPECT_EQ(r.checked + r.skipped_near_kink, net.param_count());
            EXPECT_GT(r.checked, net.param_count() / 2);
        }
    }
}

TEST(GradCheck, SubsampleAndRestoration) {
    MicroNet net({DenseSpec{20, 30}, ActSpec{ActivationKind::golu()}, DenseSpec{30, 2}}, Shape{20});
    net.init(5);
    const auto before = net.params();
    const auto r = grad_check(net, random_tensor(Shape{4, 20}, 6), random_labels(4, 2, 7), 1e-5, 500, 3);
    EXPECT_EQ(r.checked, 500u);
    EXPECT_LT(r.max_rel_err, 1e-5);
    EXPECT_EQ(net.params(), before);
}

TEST(GradCheck, RejectsStepOutsideRange) {
    MicroNet net({DenseSpec{2, 2}}, Shape{2});
    net.init(1);
    const Tensor<double> x(Shape{1, 2}, 1.0);
    const std::vector<int> y{0};
    EXPECT_THROW(grad_check(net, x, y, 1e-3), UsageError);
    EXPECT_THROW(grad_check(net, x, y, 1e-8), UsageError);
}

// A ReLU whose input sits exactly on the kink: the one-sided differences
// disagree, so parameters that move it across zero are excluded.
TEST(GradCheck, ParametersMovingAKinkInputAreExcluded) {
    MicroNet net({DenseSpec{2, 2}, ActSpec{ActivationKind::relu()}, DenseSpec{2, 2}}, Shape{2});
    net.init(2);
    // Unit 0 of the first layer gets pre-activation exactly 0.
    net.params()[0] = 0.0;
    net.params()[1] = 0.0;
    net.params()[4] = 0.0;
    const Tensor<double> x(Shape{1, 2}, std::vector<double>{0.5, -1.0});
    const std::vector<int> y{1};
    const auto r = grad_check(net, x, y, 1e-5);
    EXPECT_EQ(r.skipped_near_kink, 3u);  // W[0][0], W[0][1], b[0]
    EXPECT_EQ(r.checked, net.param_count() - 3);
    EXPECT_LT(r.max_rel_err, 1e-5);
}

TEST(Loss, SoftmaxCrossEntropy) {
    const Tensor<double> logits(Shape{2, 3}, std::vector<double>{0.0, 0.0, 0.0, 1000.0, 0.0, -1000.0});
    const std::vector<int> labels{2, 0};
    const LossResult r = softmax_cross_entropy(logits, labels);
    EXPECT_NEAR(r.loss, 0.5 * std::log(3.0), 1e-15);
    EXPECT_NEAR(r.grad[0], 1.0 / 6.0, 1e-15);
    EXPECT_NEAR(r.grad[2], (1.0 / 3.0 - 1.0) / 2.0, 1e-15);
    EXPECT_EQ(r.grad[3], 0.0);
    EXPECT_EQ(argmax_rows(logits), (std::vector<int>{0, 0}));
    const std::vector<int> bad{3, 0};
    EXPECT_THROW(softmax_cross_entropy(logits, bad), UsageError);
}

} // namespace
