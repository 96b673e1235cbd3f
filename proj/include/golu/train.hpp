#pragma once

#include <golu/csv.hpp>
#include <golu/datasets.hpp>
#include <golu/errors.hpp>
#include <golu/micronet.hpp>
#include <golu/rng.hpp>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

namespace golu {

struct TrainConfig {
    double lr = 0.1;
    double momentum = 0.9;
    double weight_decay = 0.0;
    std::size_t epochs = 300;
    std::size_t batch_size = 32;
    std::uint64_t seed = 42;

    void validate() const {
        if (!(lr >= 0.0) || !std::isfinite(lr)) {
            throw UsageError("TrainConfig: lr must be a finite non-negative number");
        }
        if (!(momentum >= 0.0 && momentum < 1.0)) {
            throw UsageError("TrainConfig: momentum must lie in [0, 1)");
        }
        if (!(weight_decay >= 0.0)) {
            throw UsageError("TrainConfig: weight_decay must be non-negative");
        }
        if (batch_size == 0) {
            throw UsageError("TrainConfig: batch_size must be >= 1");
        }
    }
};

/// Heavy-ball SGD without Nesterov or dampening:
///   v <- momentum * v + (g + weight_decay * w)
///   w <- w - lr * v
class SgdMomentum {
public:
    SgdMomentum(double lr, double momentum, double weight_decay, std::size_t size)
        : lr_(lr), momentum_(momentum), weight_decay_(weight_decay), velocity_(size, 0.0) {}

    void step(std::vector<double>& params, const std::vector<double>& grads) {
        if (params.size() != velocity_.size() || grads.size() != velocity_.size()) {
            throw UsageError("SgdMomentum: parameter count changed");
        }
        for (std::size_t i = 0; i < params.size(); ++i) {
            const double g = weight_decay_ == 0.0 ? grads[i] : grads[i] + weight_decay_ * params[i];
            velocity_[i] = momentum_ * velocity_[i] + g;
            params[i] -= lr_ * velocity_[i];
        }
    }

    const std::vector<double>& velocity() const noexcept { return velocity_; }

private:
    double lr_;
    double momentum_;
    double weight_decay_;
    std::vector<double> velocity_;
};

struct CurvePoint {
    std::size_t epoch = 0;
    double train_loss = 0.0;      ///< mean minibatch loss during the epoch
    double eval_loss = 0.0;       ///< held-out loss after the epoch (eval mode)
    double accuracy = 0.0;        ///< training-set accuracy after the epoch (eval mode)
    double eval_accuracy = 0.0;   ///< held-out accuracy after the epoch
};

struct TrainResult {
    MicroNet net;
    std::vector<CurvePoint> curve;
};

/// Eval-mode mean cross-entropy over a dataset.
inline double dataset_loss(const MicroNet& net, const Dataset& data) {
    return softmax_cross_entropy(net.predict(data.x), data.y).loss;
}

inline double dataset_accuracy(const MicroNet& net, const Dataset& data) {
    const auto pred = argmax_rows(net.predict(data.x));
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        hits += pred[i] == data.y[i] ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(pred.size());
}

/// Minibatch SGD-momentum training of an already initialized network.
/// Deterministic given `shuffle_rng`'s state. Throws TrainingFailure when a
/// minibatch loss becomes non-finite.
inline std::vector<CurvePoint> fit(MicroNet& net, const Dataset& train, const Dataset& test, const TrainConfig& cfg,
                                   Rng& shuffle_rng) {
    cfg.validate();
    SgdMomentum opt(cfg.lr, cfg.momentum, cfg.weight_decay, net.param_count());
    std::vector<std::size_t> order(train.size());
    std::vector<CurvePoint> curve;
    curve.reserve(cfg.epochs);
    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        shuffle_rng.shuffle(order);
        net.set_mode(Mode::Train);
        double loss_sum = 0.0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
            const Dataset batch = train.subset(std::span<const std::size_t>(order).subspan(start, stop - start));
            const Tensor<double> logits = net.forward(batch.x);
            const LossResult loss = softmax_cross_entropy(logits, batch.y);
            if (!std::isfinite(loss.loss)) {
                throw TrainingFailure("training diverged: non-finite loss in epoch " + std::to_string(epoch), epoch);
            }
            loss_sum += loss.loss * static_cast<double>(stop - start);
            net.backward(loss.grad);
            opt.step(net.params(), net.grads());
        }
        net.set_mode(Mode::Eval);
        CurvePoint p;
        p.epoch = epoch;
        p.train_loss = loss_sum / static_cast<double>(order.size());
        p.eval_loss = dataset_loss(net, test);
        p.accuracy = dataset_accuracy(net, train);
        p.eval_accuracy = dataset_accuracy(net, test);
        if (!std::isfinite(p.eval_loss)) {
            throw TrainingFailure("training diverged: non-finite eval loss in epoch " + std::to_string(epoch), epoch);
        }
        curve.push_back(p);
    }
    return curve;
}

/// A synthetic classification task: points are generated from the training seed.
struct SyntheticTask {
    TaskKind kind = TaskKind::Moons;
    std::size_t train_points = 500;
    std::size_t test_points = 500;
    double noise = 0.1;
};

struct TaskData {
    Dataset train;
    Dataset test;
};

/// Train and test sets drawn from disjoint streams of `seed` (streams 0 and 1).
inline TaskData make_task_data(const SyntheticTask& task, std::uint64_t seed) {
    Rng train_rng = Rng::stream(seed, 0);
    Rng test_rng = Rng::stream(seed, 1);
    return TaskData{make_task(task.kind, task.train_points, task.noise, train_rng),
                    make_task(task.kind, task.test_points, task.noise, test_rng)};
}

/// Builds the network, initializes it from stream 2 of cfg.seed, generates the
/// task data and trains with minibatch order drawn from stream 3.
inline TrainResult train(const std::vector<LayerSpec>& layers, const SyntheticTask& task, const TrainConfig& cfg) {
    const TaskData data = make_task_data(task, cfg.seed);
    MicroNet net(layers, Shape{data.train.x.extent(1)});
    Rng init_rng = Rng::stream(cfg.seed, 2);
    net.init(init_rng);
    Rng shuffle_rng = Rng::stream(cfg.seed, 3);
    auto curve = fit(net, data.train, data.test, cfg, shuffle_rng);
    return TrainResult{std::move(net), std::move(curve)};
}

/// dense(in, h) act dense(h, h) act ... dense(h, out).
inline std::vector<LayerSpec> mlp(std::size_t in, const std::vector<std::size_t>& hidden, std::size_t out,
                                  const ActivationKind& kind) {
    std::vector<LayerSpec> layers;
    std::size_t prev = in;
    for (std::size_t h : hidden) {
        layers.emplace_back(DenseSpec{prev, h});
        layers.emplace_back(ActSpec{kind});
        prev = h;
    }
    layers.emplace_back(DenseSpec{prev, out});
    return layers;
}

inline void write_curve_csv(std::ostream& os, const std::vector<CurvePoint>& curve) {
    os << "epoch,train_loss,eval_loss,accuracy,eval_accuracy\n";
    for (const auto& p : curve) {
        os << p.epoch << ',' << csv::num(p.train_loss) << ',' << csv::num(p.eval_loss) << ','
           << csv::num(p.accuracy) << ',' << csv::num(p.eval_accuracy) << '\n';
    }
}

} // namespace golu
