#pragma once

// A small deterministic network engine: dense, 3x3 convolution, batch
// normalization and activation layers over a flat parameter vector.
//
// Tensor layouts (batch first, row-major):
//   dense      [N, in]  -> [N, out]   (trailing input axes are flattened)
//   conv3x3    [N, C, H, W] -> [N, C_out, H, W], zero padding 1, stride 1
//   batchnorm  [N, F] or [N, C, H, W]; statistics per feature/channel over
//              the batch and spatial axes
//   act        elementwise, any shape
//
// Parameter layout, in layer order:
//   dense      W[out][in], b[out]
//   conv3x3    W[out][in][3][3], b[out]
//   batchnorm  gamma[F], beta[F]   (running mean/var live in a separate buffer)

#include <golu/activation.hpp>
#include <golu/errors.hpp>
#include <golu/kernels.hpp>
#include <golu/rng.hpp>
#include <golu/tensor.hpp>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace golu {

struct DenseSpec {
    std::size_t in = 0;
    std::size_t out = 0;
    friend bool operator==(const DenseSpec&, const DenseSpec&) = default;
};

struct Conv3x3Spec {
    std::size_t in_channels = 0;
    std::size_t out_channels = 0;
    friend bool operator==(const Conv3x3Spec&, const Conv3x3Spec&) = default;
};

struct BatchNormSpec {
    std::size_t features = 0;
    double eps = 1e-5;
    double momentum = 0.1;
    friend bool operator==(const BatchNormSpec&, const BatchNormSpec&) = default;
};

struct ActSpec {
    ActivationKind kind;
    friend bool operator==(const ActSpec&, const ActSpec&) = default;
};

using LayerSpec = std::variant<DenseSpec, Conv3x3Spec, BatchNormSpec, ActSpec>;

enum class Mode { Train, Eval };

enum class ParamRole { Weight, Bias, BnScale, BnShift };

/// A contiguous slice of the parameter vector belonging to one layer.
struct ParamGroup {
    std::size_t layer;
    ParamRole role;
    std::size_t offset;
    std::size_t size;

    bool is_normalization() const { return role == ParamRole::BnScale || role == ParamRole::BnShift; }
};

class MicroNet {
public:
    MicroNet() = default;

    /// Builds the network for samples of `sample_shape` (batch axis excluded) and
    /// checks that consecutive layer shapes compose. Parameters start at zero
    /// (batchnorm scale 1); call init() for random weights.
    MicroNet(std::vector<LayerSpec> layers, Shape sample_shape)
        : layers_(std::move(layers)), sample_shape_(std::move(sample_shape)) {
        if (sample_shape_.empty()) {
            throw UsageError("MicroNet: sample shape must have rank >= 1");
        }
        Shape shape = sample_shape_;
        std::size_t offset = 0;
        std::size_t buffer_offset = 0;
        for (std::size_t i = 0; i < layers_.size(); ++i) {
            LayerInfo info;
            info.in_shape = shape;
            std::visit(
                [&](const auto& spec) {
                    using S = std::decay_t<decltype(spec)>;
                    if constexpr (std::is_same_v<S, DenseSpec>) {
                        if (spec.in == 0 || spec.out == 0 || shape_size(shape) != spec.in) {
                            throw UsageError("MicroNet: layer " + std::to_string(i) + " dense(" +
                                             std::to_string(spec.in) + ", " + std::to_string(spec.out) +
                                             ") cannot take input " + shape_string(shape));
                        }
                        add_group(i, ParamRole::Weight, offset, spec.out * spec.in);
                        add_group(i, ParamRole::Bias, offset, spec.out);
                        shape = Shape{spec.out};
                    } else if constexpr (std::is_same_v<S, Conv3x3Spec>) {
                        if (shape.size() != 3 || shape[0] != spec.in_channels || spec.out_channels == 0) {
                            throw UsageError("MicroNet: layer " + std::to_string(i) + " conv3x3(" +
                                             std::to_string(spec.in_channels) + ", " +
                                             std::to_string(spec.out_channels) + ") cannot take input " +
                                             shape_string(shape));
                        }
                        add_group(i, ParamRole::Weight, offset, spec.out_channels * spec.in_channels * 9);
                        add_group(i, ParamRole::Bias, offset, spec.out_channels);
                        shape = Shape{spec.out_channels, shape[1], shape[2]};
                    } else if constexpr (std::is_same_v<S, BatchNormSpec>) {
                        if ((shape.size() != 1 && shape.size() != 3) || shape[0] != spec.features) {
                            throw UsageError("MicroNet: layer " + std::to_string(i) + " batchnorm(" +
                                             std::to_string(spec.features) + ") cannot take input " +
                                             shape_string(shape));
                        }
                        if (!(spec.eps > 0.0) || !(spec.momentum >= 0.0 && spec.momentum <= 1.0)) {
                            throw UsageError("MicroNet: batchnorm needs eps > 0 and momentum in [0, 1]");
                        }
                        add_group(i, ParamRole::BnScale, offset, spec.features);
                        add_group(i, ParamRole::BnShift, offset, spec.features);
                        info.buffer_offset = buffer_offset;
                        buffer_offset += 2 * spec.features;
                    }
                },
                layers_[i]);
            info.out_shape = shape;
            info_.push_back(info);
        }
        output_shape_ = shape;
        params_.assign(offset, 0.0);
        grads_.assign(offset, 0.0);
        buffers_.assign(buffer_offset, 0.0);
        reset_normalization();
    }

    /// Kaiming-uniform weights (bound sqrt(6 / fan_in)) and zero biases for dense
    /// and conv layers; batchnorm scale 1, shift 0, running mean 0, running var 1.
    void init(std::uint64_t seed) {
        Rng rng(seed);
        init(rng);
    }

    void init(Rng& rng) {
        std::fill(params_.begin(), params_.end(), 0.0);
        for (const auto& g : groups_) {
            if (g.role != ParamRole::Weight) {
                continue;
            }
            const double fan_in = static_cast<double>(fan_in_of(g.layer));
            const double bound = std::sqrt(6.0 / fan_in);
            for (std::size_t k = 0; k < g.size; ++k) {
                params_[g.offset + k] = rng.uniform(-bound, bound);
            }
        }
        reset_normalization();
    }

    const std::vector<LayerSpec>& layers() const noexcept { return layers_; }
    const Shape& sample_shape() const noexcept { return sample_shape_; }
    const Shape& output_shape() const noexcept { return output_shape_; }
    const std::vector<ParamGroup>& groups() const noexcept { return groups_; }

    std::vector<double>& params() noexcept { return params_; }
    const std::vector<double>& params() const noexcept { return params_; }
    const std::vector<double>& grads() const noexcept { return grads_; }
    /// Batchnorm running statistics: per batchnorm layer, mean[F] then var[F].
    std::vector<double>& buffers() noexcept { return buffers_; }
    const std::vector<double>& buffers() const noexcept { return buffers_; }

    Mode mode() const noexcept { return mode_; }
    void set_mode(Mode m) noexcept { mode_ = m; }

    /// Forward pass in the current mode, caching what backward() needs. In train
    /// mode batchnorm uses batch statistics and updates its running statistics.
    Tensor<double> forward(const Tensor<double>& batch) {
        check_batch(batch);
        cache_.assign(layers_.size(), LayerCache{});
        Tensor<double> x = batch;
        double* running = mode_ == Mode::Train ? buffers_.data() : nullptr;
        for (std::size_t i = 0; i < layers_.size(); ++i) {
            cache_[i].input = x;
            x = run_layer(i, x, mode_, &cache_[i], running);
        }
        cached_batch_ = batch.extent(0);
        has_cache_ = true;
        return x;
    }

    /// Eval-mode forward (running batchnorm statistics) that leaves the
    /// network untouched; safe to call concurrently on a shared instance.
    Tensor<double> predict(const Tensor<double>& batch) const {
        check_batch(batch);
        Tensor<double> x = batch;
        for (std::size_t i = 0; i < layers_.size(); ++i) {
            x = run_layer(i, x, Mode::Eval, nullptr, nullptr);
        }
        return x;
    }

    /// Backpropagates dLoss/dOutput through the last forward() and overwrites grads().
    /// Returns dLoss/dInput.
    Tensor<double> backward(const Tensor<double>& loss_grad) {
        if (!has_cache_) {
            throw UsageError("MicroNet::backward called before forward");
        }
        const Shape expected = batch_shape(cached_batch_, output_shape_);
        if (loss_grad.shape() != expected) {
            throw UsageError("MicroNet::backward: gradient shape " + shape_string(loss_grad.shape()) +
                             " does not match output " + shape_string(expected));
        }
        std::fill(grads_.begin(), grads_.end(), 0.0);
        Tensor<double> g = loss_grad;
        for (std::size_t i = layers_.size(); i-- > 0;) {
            g = backprop_layer(i, g);
        }
        return g;
    }

    /// Parameter count per role group, useful for checking layouts.
    std::size_t param_count() const noexcept { return params_.size(); }

private:
    struct LayerInfo {
        Shape in_shape;
        Shape out_shape;
        std::size_t buffer_offset = 0;
    };

    struct LayerCache {
        Tensor<double> input;
        std::vector<double> xhat;   // batchnorm normalized input
        std::vector<double> invstd; // batchnorm 1/sqrt(var + eps) per channel
        Mode mode = Mode::Train;
    };

    static Shape batch_shape(std::size_t n, const Shape& sample) {
        Shape s{n};
        s.insert(s.end(), sample.begin(), sample.end());
        return s;
    }

    void add_group(std::size_t layer, ParamRole role, std::size_t& offset, std::size_t size) {
        groups_.push_back(ParamGroup{layer, role, offset, size});
        offset += size;
    }

    const ParamGroup& group(std::size_t layer, ParamRole role) const {
        for (const auto& g : groups_) {
            if (g.layer == layer && g.role == role) {
                return g;
            }
        }
        throw UsageError("MicroNet: missing parameter group");
    }

    std::size_t fan_in_of(std::size_t layer) const {
        if (const auto* d = std::get_if<DenseSpec>(&layers_[layer])) {
            return d->in;
        }
        if (const auto* c = std::get_if<Conv3x3Spec>(&layers_[layer])) {
            return c->in_channels * 9;
        }
        return 1;
    }

    void reset_normalization() {
        for (std::size_t i = 0; i < layers_.size(); ++i) {
            if (const auto* bn = std::get_if<BatchNormSpec>(&layers_[i])) {
                const auto& scale = group(i, ParamRole::BnScale);
                const auto& shift = group(i, ParamRole::BnShift);
                std::fill_n(params_.begin() + static_cast<std::ptrdiff_t>(scale.offset), bn->features, 1.0);
                std::fill_n(params_.begin() + static_cast<std::ptrdiff_t>(shift.offset), bn->features, 0.0);
                const std::size_t b = info_[i].buffer_offset;
                std::fill_n(buffers_.begin() + static_cast<std::ptrdiff_t>(b), bn->features, 0.0);
                std::fill_n(buffers_.begin() + static_cast<std::ptrdiff_t>(b + bn->features), bn->features, 1.0);
            }
        }
        has_cache_ = false;
    }

    void check_batch(const Tensor<double>& batch) const {
        if (batch.rank() != sample_shape_.size() + 1 || batch.extent(0) == 0 ||
            !std::equal(sample_shape_.begin(), sample_shape_.end(), batch.shape().begin() + 1)) {
            throw UsageError("MicroNet: batch shape " + shape_string(batch.shape()) +
                             " does not match [N, " + shape_string(sample_shape_).substr(1));
        }
    }

    // `running` points at buffers_ when batchnorm running statistics should be updated.
    Tensor<double> run_layer(std::size_t i, const Tensor<double>& x, Mode mode, LayerCache* cache,
                             double* running) const {
        const std::size_t n = x.extent(0);
        return std::visit(
            [&](const auto& spec) -> Tensor<double> {
                using S = std::decay_t<decltype(spec)>;
                if constexpr (std::is_same_v<S, DenseSpec>) {
                    return dense_forward(i, spec, x, n);
                } else if constexpr (std::is_same_v<S, Conv3x3Spec>) {
                    return conv_forward(i, spec, x, n);
                } else if constexpr (std::is_same_v<S, BatchNormSpec>) {
                    return bn_forward(i, spec, x, n, mode, cache, running);
                } else {
                    return apply_forward(spec.kind, x, ExecPath::Vector);
                }
            },
            layers_[i]);
    }

    Tensor<double> backprop_layer(std::size_t i, const Tensor<double>& dy) {
        const Tensor<double>& x = cache_[i].input;
        const std::size_t n = x.extent(0);
        return std::visit(
            [&](const auto& spec) -> Tensor<double> {
                using S = std::decay_t<decltype(spec)>;
                if constexpr (std::is_same_v<S, DenseSpec>) {
                    return dense_backward(i, spec, x, dy, n);
                } else if constexpr (std::is_same_v<S, Conv3x3Spec>) {
                    return conv_backward(i, spec, x, dy, n);
                } else if constexpr (std::is_same_v<S, BatchNormSpec>) {
                    return bn_backward(i, spec, x, dy, n);
                } else {
                    return apply_backward(spec.kind, x, dy, ExecPath::Vector);
                }
            },
            layers_[i]);
    }

    // ---- dense -------------------------------------------------------------

    Tensor<double> dense_forward(std::size_t i, const DenseSpec& s, const Tensor<double>& x, std::size_t n) const {
        const double* w = params_.data() + group(i, ParamRole::Weight).offset;
        const double* b = params_.data() + group(i, ParamRole::Bias).offset;
        Tensor<double> y(Shape{n, s.out});
        for (std::size_t r = 0; r < n; ++r) {
            const double* xr = x.data().data() + r * s.in;
            for (std::size_t o = 0; o < s.out; ++o) {
                double acc = b[o];
                const double* wo = w + o * s.in;
                for (std::size_t k = 0; k < s.in; ++k) {
                    acc += wo[k] * xr[k];
                }
                y[r * s.out + o] = acc;
            }
        }
        return y;
    }

    Tensor<double> dense_backward(std::size_t i, const DenseSpec& s, const Tensor<double>& x,
                                  const Tensor<double>& dy, std::size_t n) {
        const std::size_t wo = group(i, ParamRole::Weight).offset;
        const std::size_t bo = group(i, ParamRole::Bias).offset;
        const double* w = params_.data() + wo;
        double* dw = grads_.data() + wo;
        double* db = grads_.data() + bo;
        Tensor<double> dx(x.shape());
        for (std::size_t r = 0; r < n; ++r) {
            const double* xr = x.data().data() + r * s.in;
            double* dxr = dx.data().data() + r * s.in;
            for (std::size_t o = 0; o < s.out; ++o) {
                const double g = dy[r * s.out + o];
                db[o] += g;
                for (std::size_t k = 0; k < s.in; ++k) {
                    dw[o * s.in + k] += g * xr[k];
                    dxr[k] += g * w[o * s.in + k];
                }
            }
        }
        return dx;
    }

    // ---- conv3x3 -----------------------------------------------------------

    Tensor<double> conv_forward(std::size_t i, const Conv3x3Spec& s, const Tensor<double>& x, std::size_t n) const {
        const std::size_t h = x.extent(2);
        const std::size_t wd = x.extent(3);
        const double* w = params_.data() + group(i, ParamRole::Weight).offset;
        const double* b = params_.data() + group(i, ParamRole::Bias).offset;
        Tensor<double> y(Shape{n, s.out_channels, h, wd});
        const double* xd = x.data().data();
        double* yd = y.data().data();
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t co = 0; co < s.out_channels; ++co) {
                double* yp = yd + (r * s.out_channels + co) * h * wd;
                for (std::size_t p = 0; p < h * wd; ++p) {
                    yp[p] = b[co];
                }
                for (std::size_t ci = 0; ci < s.in_channels; ++ci) {
                    const double* xp = xd + (r * s.in_channels + ci) * h * wd;
                    const double* k = w + (co * s.in_channels + ci) * 9;
                    for (std::size_t yy = 0; yy < h; ++yy) {
                        for (std::size_t xx = 0; xx < wd; ++xx) {
                            double acc = 0.0;
                            for (std::size_t ky = 0; ky < 3; ++ky) {
                                const std::ptrdiff_t sy = static_cast<std::ptrdiff_t>(yy + ky) - 1;
                                if (sy < 0 || sy >= static_cast<std::ptrdiff_t>(h)) {
                                    continue;
                                }
                                for (std::size_t kx = 0; kx < 3; ++kx) {
                                    const std::ptrdiff_t sx = static_cast<std::ptrdiff_t>(xx + kx) - 1;
                                    if (sx < 0 || sx >= static_cast<std::ptrdiff_t>(wd)) {
                                        continue;
                                    }
                                    acc += k[ky * 3 + kx] * xp[static_cast<std::size_t>(sy) * wd +
                                                                static_cast<std::size_t>(sx)];
                                }
                            }
                            yp[yy * wd + xx] += acc;
                        }
                    }
                }
            }
        }
        return y;
    }

    Tensor<double> conv_backward(std::size_t i, const Conv3x3Spec& s, const Tensor<double>& x,
                                 const Tensor<double>& dy, std::size_t n) {
        const std::size_t h = x.extent(2);
        const std::size_t wd = x.extent(3);
        const std::size_t wo = group(i, ParamRole::Weight).offset;
        const std::size_t bo = group(i, ParamRole::Bias).offset;
        const double* w = params_.data() + wo;
        double* dw = grads_.data() + wo;
        double* db = grads_.data() + bo;
        Tensor<double> dx(x.shape());
        const double* xd = x.data().data();
        double* dxd = dx.data().data();
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t co = 0; co < s.out_channels; ++co) {
                const double* gp = dy.data().data() + (r * s.out_channels + co) * h * wd;
                for (std::size_t p = 0; p < h * wd; ++p) {
                    db[co] += gp[p];
                }
                for (std::size_t ci = 0; ci < s.in_channels; ++ci) {
                    const double* xp = xd + (r * s.in_channels + ci) * h * wd;
                    double* dxp = dxd + (r * s.in_channels + ci) * h * wd;
                    const std::size_t kbase = (co * s.in_channels + ci) * 9;
                    for (std::size_t yy = 0; yy < h; ++yy) {
                        for (std::size_t xx = 0; xx < wd; ++xx) {
                            const double g = gp[yy * wd + xx];
                            for (std::size_t ky = 0; ky < 3; ++ky) {
                                const std::ptrdiff_t sy = static_cast<std::ptrdiff_t>(yy + ky) - 1;
                                if (sy < 0 || sy >= static_cast<std::ptrdiff_t>(h)) {
                                    continue;
                                }
                                for (std::size_t kx = 0; kx < 3; ++kx) {
                                    const std::ptrdiff_t sx = static_cast<std::ptrdiff_t>(xx + kx) - 1;
                                    if (sx < 0 || sx >= static_cast<std::ptrdiff_t>(wd)) {
                                        continue;
                                    }
                                    const std::size_t src =
                                        static_cast<std::size_t>(sy) * wd + static_cast<std::size_t>(sx);
                                    dw[kbase + ky * 3 + kx] += g * xp[src];
                                    dxp[src] += g * w[kbase + ky * 3 + kx];
                                }
                            }
                        }
                    }
                }
            }
        }
        return dx;
    }

    // ---- batchnorm ---------------------------------------------------------

    static std::size_t spatial_of(const Tensor<double>& x) { return x.rank() == 4 ? x.extent(2) * x.extent(3) : 1; }

    Tensor<double> bn_forward(std::size_t i, const BatchNormSpec& s, const Tensor<double>& x, std::size_t n,
                              Mode mode, LayerCache* cache, double* running) const {
        const std::size_t c = s.features;
        const std::size_t sp = spatial_of(x);
        const std::size_t m = n * sp;
        const double* gamma = params_.data() + group(i, ParamRole::BnScale).offset;
        const double* beta = params_.data() + group(i, ParamRole::BnShift).offset;
        const std::size_t boff = info_[i].buffer_offset;

        std::vector<double> mean(c, 0.0);
        std::vector<double> var(c, 0.0);
        const auto at = [&](std::size_t r, std::size_t ch, std::size_t p) { return (r * c + ch) * sp + p; };

        if (mode == Mode::Train) {
            for (std::size_t ch = 0; ch < c; ++ch) {
                double acc = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    for (std::size_t p = 0; p < sp; ++p) {
                        acc += x[at(r, ch, p)];
                    }
                }
                mean[ch] = acc / static_cast<double>(m);
                double sq = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    for (std::size_t p = 0; p < sp; ++p) {
                        const double d = x[at(r, ch, p)] - mean[ch];
                        sq += d * d;
                    }
                }
                var[ch] = sq / static_cast<double>(m);
            }
            if (running != nullptr) {
                const double unbias = m > 1 ? static_cast<double>(m) / static_cast<double>(m - 1) : 1.0;
                for (std::size_t ch = 0; ch < c; ++ch) {
                    double& rm = running[boff + ch];
                    double& rv = running[boff + c + ch];
                    rm = (1.0 - s.momentum) * rm + s.momentum * mean[ch];
                    rv = (1.0 - s.momentum) * rv + s.momentum * var[ch] * unbias;
                }
            }
        } else {
            for (std::size_t ch = 0; ch < c; ++ch) {
                mean[ch] = buffers_[boff + ch];
                var[ch] = buffers_[boff + c + ch];
            }
        }

        std::vector<double> invstd(c);
        for (std::size_t ch = 0; ch < c; ++ch) {
            invstd[ch] = 1.0 / std::sqrt(var[ch] + s.eps);
        }
        Tensor<double> y(x.shape());
        std::vector<double> xhat(x.size());
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t ch = 0; ch < c; ++ch) {
                for (std::size_t p = 0; p < sp; ++p) {
                    const std::size_t k = at(r, ch, p);
                    xhat[k] = (x[k] - mean[ch]) * invstd[ch];
                    y[k] = gamma[ch] * xhat[k] + beta[ch];
                }
            }
        }
        if (cache != nullptr) {
            cache->xhat = std::move(xhat);
            cache->invstd = std::move(invstd);
            cache->mode = mode;
        }
        return y;
    }

    Tensor<double> bn_backward(std::size_t i, const BatchNormSpec& s, const Tensor<double>& x,
                               const Tensor<double>& dy, std::size_t n) {
        const std::size_t c = s.features;
        const std::size_t sp = spatial_of(x);
        const double m = static_cast<double>(n * sp);
        const std::size_t go = group(i, ParamRole::BnScale).offset;
        const std::size_t bo = group(i, ParamRole::BnShift).offset;
        const double* gamma = params_.data() + go;
        const LayerCache& cache = cache_[i];
        const auto at = [&](std::size_t r, std::size_t ch, std::size_t p) { return (r * c + ch) * sp + p; };

        Tensor<double> dx(x.shape());
        for (std::size_t ch = 0; ch < c; ++ch) {
            double sum_dy = 0.0;
            double sum_dy_xhat = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                for (std::size_t p = 0; p < sp; ++p) {
                    const std::size_t k = at(r, ch, p);
                    sum_dy += dy[k];
                    sum_dy_xhat += dy[k] * cache.xhat[k];
                }
            }
            grads_[go + ch] += sum_dy_xhat;
            grads_[bo + ch] += sum_dy;
            const double scale = gamma[ch] * cache.invstd[ch];
            for (std::size_t r = 0; r < n; ++r) {
                for (std::size_t p = 0; p < sp; ++p) {
                    const std::size_t k = at(r, ch, p);
                    if (cache.mode == Mode::Train) {
                        dx[k] = scale / m * (m * dy[k] - sum_dy - cache.xhat[k] * sum_dy_xhat);
                    } else {
                        dx[k] = scale * dy[k];
                    }
                }
            }
        }
        return dx;
    }

    std::vector<LayerSpec> layers_;
    Shape sample_shape_;
    Shape output_shape_;
    std::vector<LayerInfo> info_;
    std::vector<ParamGroup> groups_;
    std::vector<double> params_;
    std::vector<double> grads_;
    std::vector<double> buffers_;
    Mode mode_ = Mode::Train;
    std::vector<LayerCache> cache_;
    std::size_t cached_batch_ = 0;
    bool has_cache_ = false;
};

/// Mean softmax cross-entropy over the batch and its gradient w.r.t. the logits.
/// Logits are [N, ...]; everything after the batch axis is one class vector.
struct LossResult {
    double loss = 0.0;
    Tensor<double> grad;
};

inline LossResult softmax_cross_entropy(const Tensor<double>& logits, std::span<const int> labels) {
    const std::size_t n = logits.extent(0);
    if (n == 0 || labels.size() != n) {
        throw UsageError("softmax_cross_entropy: need one label per batch row");
    }
    const std::size_t k = logits.size() / n;
    LossResult out{0.0, Tensor<double>(logits.shape())};
    for (std::size_t r = 0; r < n; ++r) {
        if (labels[r] < 0 || static_cast<std::size_t>(labels[r]) >= k) {
            throw UsageError("softmax_cross_entropy: label out of range");
        }
        const double* z = logits.data().data() + r * k;
        double* g = out.grad.data().data() + r * k;
        double mx = z[0];
        for (std::size_t j = 1; j < k; ++j) {
            mx = std::max(mx, z[j]);
        }
        double sum = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            sum += std::exp(z[j] - mx);
        }
        const double lse = mx + std::log(sum);
        out.loss += lse - z[labels[r]];
        for (std::size_t j = 0; j < k; ++j) {
            g[j] = std::exp(z[j] - lse) / static_cast<double>(n);
        }
        g[labels[r]] -= 1.0 / static_cast<double>(n);
    }
    out.loss /= static_cast<double>(n);
    return out;
}

/// Index of the largest logit per row (first one on ties).
inline std::vector<int> argmax_rows(const Tensor<double>& logits) {
    const std::size_t n = logits.extent(0);
    const std::size_t k = n == 0 ? 0 : logits.size() / n;
    std::vector<int> out(n, 0);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t j = 1; j < k; ++j) {
            if (logits[r * k + j] > logits[r * k + static_cast<std::size_t>(out[r])]) {
                out[r] = static_cast<int>(j);
            }
        }
    }
    return out;
}

} // namespace golu
