// Minimal dense/convolutional network with exact backpropagation, plain SGD
// with momentum, and a versioned binary weight container. Everything runs in
// double precision with deterministic ordering so results reproduce bit for
// bit across runs (weights are stored as little-endian f32).
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "omr/rng.hpp"
#include "omr/signal.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace omr {

// N x C x H x W, row-major.
struct Tensor {
    int n = 0, c = 0, h = 0, w = 0;
    std::vector<double> data;

    Tensor() = default;
    Tensor(int n_, int c_, int h_, int w_)
        : n(n_), c(c_), h(h_), w(w_), data(static_cast<std::size_t>(n_) * c_ * h_ * w_, 0.0) {}

    std::size_t size() const { return data.size(); }
    std::size_t plane() const { return static_cast<std::size_t>(h) * w; }
    double& at(int in, int ic, int ih, int iw) {
        return data[((static_cast<std::size_t>(in) * c + ic) * h + ih) * w + iw];
    }
    double at(int in, int ic, int ih, int iw) const {
        return data[((static_cast<std::size_t>(in) * c + ic) * h + ih) * w + iw];
    }
};

struct Param {
    std::string name;
    std::vector<double>* value = nullptr;
    std::vector<double>* grad = nullptr;
    bool trainable = true;  // running stats are saved but not stepped
};

struct Layer {
    virtual ~Layer() = default;
    virtual std::string kind() const = 0;
    virtual Tensor forward(const Tensor& x, bool train) = 0;
    virtual Tensor backward(const Tensor& dy) = 0;
    virtual std::vector<Param> params() { return {}; }
};

// 3x3 convolution, stride 1, zero padding 1 (spatial size preserved).
class Conv3x3 : public Layer {
  public:
    Conv3x3(int in_ch, int out_ch, std::string name)
        : in_ch_(in_ch), out_ch_(out_ch), name_(std::move(name)) {
        weight_.assign(static_cast<std::size_t>(out_ch) * in_ch * 9, 0.0);
        bias_.assign(static_cast<std::size_t>(out_ch), 0.0);
        dweight_.assign(weight_.size(), 0.0);
        dbias_.assign(bias_.size(), 0.0);
    }

    void init_he(Rng& rng) {
        const double std = std::sqrt(2.0 / (static_cast<double>(in_ch_) * 9.0));
        for (double& v : weight_) v = std * rng.normal();
        std::fill(bias_.begin(), bias_.end(), 0.0);
    }

    std::string kind() const override { return "conv3x3"; }

    Tensor forward(const Tensor& x, bool) override {
        x_ = x;
        Tensor y(x.n, out_ch_, x.h, x.w);
        const std::size_t cols = static_cast<std::size_t>(in_ch_) * 9;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (int in = 0; in < x.n; ++in) {
            std::vector<double> col(cols * x.plane());
            im2col(x, in, col);
            // y[oc, p] = sum_k weight[oc, k] * col[k, p] + bias[oc]
            for (int oc = 0; oc < out_ch_; ++oc) {
                double* yrow = &y.data[(static_cast<std::size_t>(in) * out_ch_ + oc) * x.plane()];
                std::fill(yrow, yrow + x.plane(), bias_[oc]);
                const double* wrow = &weight_[static_cast<std::size_t>(oc) * cols];
                for (std::size_t k = 0; k < cols; ++k) {
                    const double wk = wrow[k];
                    const double* crow = &col[k * x.plane()];
                    for (std::size_t p = 0; p < x.plane(); ++p) yrow[p] += wk * crow[p];
                }
            }
        }
        return y;
    }

    Tensor backward(const Tensor& dy) override {
        const Tensor& x = x_;
        Tensor dx(x.n, x.c, x.h, x.w);
        const std::size_t cols = static_cast<std::size_t>(in_ch_) * 9;
        std::fill(dweight_.begin(), dweight_.end(), 0.0);
        std::fill(dbias_.begin(), dbias_.end(), 0.0);

        // parameter gradients: serial over the batch for a fixed summation order
        std::vector<double> col(cols * x.plane());
        for (int in = 0; in < x.n; ++in) {
            im2col(x, in, col);
            for (int oc = 0; oc < out_ch_; ++oc) {
                const double* dyrow =
                    &dy.data[(static_cast<std::size_t>(in) * out_ch_ + oc) * x.plane()];
                double* dwrow = &dweight_[static_cast<std::size_t>(oc) * cols];
                double db = 0.0;
                for (std::size_t p = 0; p < x.plane(); ++p) db += dyrow[p];
                dbias_[oc] += db;
                for (std::size_t k = 0; k < cols; ++k) {
                    const double* crow = &col[k * x.plane()];
                    double acc = 0.0;
                    for (std::size_t p = 0; p < x.plane(); ++p) acc += dyrow[p] * crow[p];
                    dwrow[k] += acc;
                }
            }
        }

        // input gradients: independent per sample
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (int in = 0; in < x.n; ++in) {
            std::vector<double> dcol(cols * x.plane(), 0.0);
            for (int oc = 0; oc < out_ch_; ++oc) {
                const double* dyrow =
                    &dy.data[(static_cast<std::size_t>(in) * out_ch_ + oc) * x.plane()];
                const double* wrow = &weight_[static_cast<std::size_t>(oc) * cols];
                for (std::size_t k = 0; k < cols; ++k) {
                    const double wk = wrow[k];
                    double* drow = &dcol[k * x.plane()];
                    for (std::size_t p = 0; p < x.plane(); ++p) drow[p] += wk * dyrow[p];
                }
            }
            col2im(dcol, in, dx);
        }
        return dx;
    }

    std::vector<Param> params() override {
        return {{name_ + ".weight", &weight_, &dweight_},
                {name_ + ".bias", &bias_, &dbias_}};
    }

  private:
    void im2col(const Tensor& x, int in, std::vector<double>& col) const {
        const int h = x.h, w = x.w;
        std::size_t k = 0;
        for (int ic = 0; ic < in_ch_; ++ic) {
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dxo = -1; dxo <= 1; ++dxo, ++k) {
                    double* crow = &col[k * x.plane()];
                    for (int ih = 0; ih < h; ++ih) {
                        const int sy = ih + dy;
                        for (int iw = 0; iw < w; ++iw) {
                            const int sx = iw + dxo;
                            crow[static_cast<std::size_t>(ih) * w + iw] =
                                (sy >= 0 && sy < h && sx >= 0 && sx < w) ? x.at(in, ic, sy, sx)
                                                                         : 0.0;
                        }
                    }
                }
            }
        }
    }

    void col2im(const std::vector<double>& dcol, int in, Tensor& dx) const {
        const int h = dx.h, w = dx.w;
        std::size_t k = 0;
        for (int ic = 0; ic < in_ch_; ++ic) {
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dxo = -1; dxo <= 1; ++dxo, ++k) {
                    const double* crow = &dcol[k * dx.plane()];
                    for (int ih = 0; ih < h; ++ih) {
                        const int sy = ih + dy;
                        if (sy < 0 || sy >= h) continue;
                        for (int iw = 0; iw < w; ++iw) {
                            const int sx = iw + dxo;
                            if (sx < 0 || sx >= w) continue;
                            dx.at(in, ic, sy, sx) += crow[static_cast<std::size_t>(ih) * w + iw];
                        }
                    }
                }
            }
        }
    }

    int in_ch_, out_ch_;
    std::string name_;
    std::vector<double> weight_, bias_, dweight_, dbias_;
    Tensor x_;
};

// Per-channel batch normalization with running statistics for inference.
class BatchNorm : public Layer {
  public:
    BatchNorm(int channels, std::string name, double eps = 1e-5, double momentum = 0.1)
        : c_(channels), name_(std::move(name)), eps_(eps), momentum_(momentum) {
        gamma_.assign(c_, 1.0);
        beta_.assign(c_, 0.0);
        dgamma_.assign(c_, 0.0);
        dbeta_.assign(c_, 0.0);
        running_mean_.assign(c_, 0.0);
        running_var_.assign(c_, 1.0);
        unused_.assign(c_, 0.0);
    }

    std::string kind() const override { return "batchnorm"; }

    Tensor forward(const Tensor& x, bool train) override {
        x_ = x;
        mean_.assign(c_, 0.0);
        var_.assign(c_, 0.0);
        const std::size_t per_ch = static_cast<std::size_t>(x.n) * x.plane();
        if (train) {
            for (int ic = 0; ic < c_; ++ic) {
                double m = 0.0;
                for (int in = 0; in < x.n; ++in) {
                    const double* p = &x.data[(static_cast<std::size_t>(in) * c_ + ic) * x.plane()];
                    for (std::size_t i = 0; i < x.plane(); ++i) m += p[i];
                }
                m /= static_cast<double>(per_ch);
                double v = 0.0;
                for (int in = 0; in < x.n; ++in) {
                    const double* p = &x.data[(static_cast<std::size_t>(in) * c_ + ic) * x.plane()];
                    for (std::size_t i = 0; i < x.plane(); ++i) v += (p[i] - m) * (p[i] - m);
                }
                v /= static_cast<double>(per_ch);
                mean_[ic] = m;
                var_[ic] = v;
                running_mean_[ic] = (1.0 - momentum_) * running_mean_[ic] + momentum_ * m;
                running_var_[ic] = (1.0 - momentum_) * running_var_[ic] + momentum_ * v;
            }
        } else {
            mean_ = running_mean_;
            var_ = running_var_;
        }
        xhat_ = Tensor(x.n, x.c, x.h, x.w);
        Tensor y(x.n, x.c, x.h, x.w);
        for (int in = 0; in < x.n; ++in)
            for (int ic = 0; ic < c_; ++ic) {
                const double inv = 1.0 / std::sqrt(var_[ic] + eps_);
                const std::size_t base = (static_cast<std::size_t>(in) * c_ + ic) * x.plane();
                for (std::size_t i = 0; i < x.plane(); ++i) {
                    const double xh = (x.data[base + i] - mean_[ic]) * inv;
                    xhat_.data[base + i] = xh;
                    y.data[base + i] = gamma_[ic] * xh + beta_[ic];
                }
            }
        train_ = train;
        return y;
    }

    Tensor backward(const Tensor& dy) override {
        const Tensor& x = x_;
        const std::size_t per_ch = static_cast<std::size_t>(x.n) * x.plane();
        Tensor dx(x.n, x.c, x.h, x.w);
        for (int ic = 0; ic < c_; ++ic) {
            double sum_dy = 0.0, sum_dy_xhat = 0.0;
            for (int in = 0; in < x.n; ++in) {
                const std::size_t base = (static_cast<std::size_t>(in) * c_ + ic) * x.plane();
                for (std::size_t i = 0; i < x.plane(); ++i) {
                    sum_dy += dy.data[base + i];
                    sum_dy_xhat += dy.data[base + i] * xhat_.data[base + i];
                }
            }
            dgamma_[ic] = sum_dy_xhat;
            dbeta_[ic] = sum_dy;
            const double inv = 1.0 / std::sqrt(var_[ic] + eps_);
            const double n = static_cast<double>(per_ch);
            for (int in = 0; in < x.n; ++in) {
                const std::size_t base = (static_cast<std::size_t>(in) * c_ + ic) * x.plane();
                for (std::size_t i = 0; i < x.plane(); ++i) {
                    if (train_) {
                        dx.data[base + i] =
                            gamma_[ic] * inv / n *
                            (n * dy.data[base + i] - sum_dy - xhat_.data[base + i] * sum_dy_xhat);
                    } else {
                        dx.data[base + i] = gamma_[ic] * inv * dy.data[base + i];
                    }
                }
            }
        }
        return dx;
    }

    std::vector<Param> params() override {
        return {{name_ + ".gamma", &gamma_, &dgamma_},
                {name_ + ".beta", &beta_, &dbeta_},
                {name_ + ".running_mean", &running_mean_, &unused_, false},
                {name_ + ".running_var", &running_var_, &unused_, false}};
    }

  private:
    int c_;
    std::string name_;
    double eps_, momentum_;
    bool train_ = true;
    std::vector<double> gamma_, beta_, dgamma_, dbeta_;
    std::vector<double> running_mean_, running_var_, unused_;
    std::vector<double> mean_, var_;
    Tensor x_, xhat_;
};

class Relu : public Layer {
  public:
    std::string kind() const override { return "relu"; }
    Tensor forward(const Tensor& x, bool) override {
        mask_.assign(x.size(), 0);
        Tensor y = x;
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (y.data[i] > 0.0)
                mask_[i] = 1;
            else
                y.data[i] = 0.0;
        }
        return y;
    }
    Tensor backward(const Tensor& dy) override {
        Tensor dx = dy;
        for (std::size_t i = 0; i < dx.size(); ++i)
            if (!mask_[i]) dx.data[i] = 0.0;
        return dx;
    }

  private:
    std::vector<std::uint8_t> mask_;
};

// 2x2 max pooling, stride 2, floor sizing (trailing row/column dropped).
class MaxPool2 : public Layer {
  public:
    std::string kind() const override { return "maxpool2"; }
    Tensor forward(const Tensor& x, bool) override {
        in_shape_ = {x.n, x.c, x.h, x.w};
        const int oh = x.h / 2, ow = x.w / 2;
        Tensor y(x.n, x.c, oh, ow);
        argmax_.assign(y.size(), 0);
        std::size_t o = 0;
        for (int in = 0; in < x.n; ++in)
            for (int ic = 0; ic < x.c; ++ic)
                for (int ih = 0; ih < oh; ++ih)
                    for (int iw = 0; iw < ow; ++iw, ++o) {
                        double best = -1e300;
                        std::size_t bi = 0;
                        for (int dy = 0; dy < 2; ++dy)
                            for (int dxo = 0; dxo < 2; ++dxo) {
                                const std::size_t idx =
                                    ((static_cast<std::size_t>(in) * x.c + ic) * x.h + ih * 2 + dy) *
                                        x.w +
                                    iw * 2 + dxo;
                                if (x.data[idx] > best) {
                                    best = x.data[idx];
                                    bi = idx;
                                }
                            }
                        y.data[o] = best;
                        argmax_[o] = bi;
                    }
        return y;
    }
    Tensor backward(const Tensor& dy) override {
        Tensor dx(in_shape_[0], in_shape_[1], in_shape_[2], in_shape_[3]);
        for (std::size_t o = 0; o < dy.size(); ++o) dx.data[argmax_[o]] += dy.data[o];
        return dx;
    }

  private:
    std::vector<std::size_t> argmax_;
    std::array<int, 4> in_shape_{};
};

// Global average pooling to N x C x 1 x 1.
class GlobalAvgPool : public Layer {
  public:
    std::string kind() const override { return "gap"; }
    Tensor forward(const Tensor& x, bool) override {
        in_shape_ = {x.n, x.c, x.h, x.w};
        Tensor y(x.n, x.c, 1, 1);
        const double inv = 1.0 / static_cast<double>(x.plane());
        for (int in = 0; in < x.n; ++in)
            for (int ic = 0; ic < x.c; ++ic) {
                const double* p = &x.data[(static_cast<std::size_t>(in) * x.c + ic) * x.plane()];
                double acc = 0.0;
                for (std::size_t i = 0; i < x.plane(); ++i) acc += p[i];
                y.at(in, ic, 0, 0) = acc * inv;
            }
        return y;
    }
    Tensor backward(const Tensor& dy) override {
        Tensor dx(in_shape_[0], in_shape_[1], in_shape_[2], in_shape_[3]);
        const double inv = 1.0 / static_cast<double>(dx.plane());
        for (int in = 0; in < dx.n; ++in)
            for (int ic = 0; ic < dx.c; ++ic) {
                const double g = dy.at(in, ic, 0, 0) * inv;
                double* p = &dx.data[(static_cast<std::size_t>(in) * dx.c + ic) * dx.plane()];
                for (std::size_t i = 0; i < dx.plane(); ++i) p[i] = g;
            }
        return dx;
    }

  private:
    std::array<int, 4> in_shape_{};
};

// Fully connected layer on flattened N x (C*H*W) input; output N x out x 1 x 1.
class Linear : public Layer {
  public:
    Linear(int in_features, int out_features, std::string name)
        : in_(in_features), out_(out_features), name_(std::move(name)) {
        weight_.assign(static_cast<std::size_t>(out_) * in_, 0.0);
        bias_.assign(out_, 0.0);
        dweight_.assign(weight_.size(), 0.0);
        dbias_.assign(bias_.size(), 0.0);
    }

    void init_he(Rng& rng) {
        const double std = std::sqrt(2.0 / static_cast<double>(in_));
        for (double& v : weight_) v = std * rng.normal();
        std::fill(bias_.begin(), bias_.end(), 0.0);
    }

    std::string kind() const override { return "linear"; }

    Tensor forward(const Tensor& x, bool) override {
        if (static_cast<int>(x.size()) != x.n * in_)
            throw ParameterError("Linear: feature count mismatch");
        x_ = x;
        Tensor y(x.n, out_, 1, 1);
        for (int in = 0; in < x.n; ++in) {
            const double* xp = &x.data[static_cast<std::size_t>(in) * in_];
            for (int o = 0; o < out_; ++o) {
                const double* wp = &weight_[static_cast<std::size_t>(o) * in_];
                double acc = bias_[o];
                for (int k = 0; k < in_; ++k) acc += wp[k] * xp[k];
                y.at(in, o, 0, 0) = acc;
            }
        }
        return y;
    }

    Tensor backward(const Tensor& dy) override {
        std::fill(dweight_.begin(), dweight_.end(), 0.0);
        std::fill(dbias_.begin(), dbias_.end(), 0.0);
        Tensor dx(x_.n, x_.c, x_.h, x_.w);
        for (int in = 0; in < x_.n; ++in) {
            const double* xp = &x_.data[static_cast<std::size_t>(in) * in_];
            double* dxp = &dx.data[static_cast<std::size_t>(in) * in_];
            for (int o = 0; o < out_; ++o) {
                const double g = dy.at(in, o, 0, 0);
                dbias_[o] += g;
                double* dwp = &dweight_[static_cast<std::size_t>(o) * in_];
                const double* wp = &weight_[static_cast<std::size_t>(o) * in_];
                for (int k = 0; k < in_; ++k) {
                    dwp[k] += g * xp[k];
                    dxp[k] += g * wp[k];
                }
            }
        }
        return dx;
    }

    std::vector<Param> params() override {
        return {{name_ + ".weight", &weight_, &dweight_},
                {name_ + ".bias", &bias_, &dbias_}};
    }

  private:
    int in_, out_;
    std::string name_;
    std::vector<double> weight_, bias_, dweight_, dbias_;
    Tensor x_;
};

class Sequential {
  public:
    void add(std::unique_ptr<Layer> layer) { layers_.push_back(std::move(layer)); }

    Tensor forward(const Tensor& x, bool train) {
        Tensor cur = x;
        for (auto& l : layers_) cur = l->forward(cur, train);
        return cur;
    }

    Tensor backward(const Tensor& dy) {
        Tensor cur = dy;
        for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) cur = (*it)->backward(cur);
        return cur;
    }

    std::vector<Param> params() {
        std::vector<Param> out;
        for (auto& l : layers_)
            for (auto& p : l->params()) out.push_back(p);
        return out;
    }

    std::vector<Layer*> layers() {
        std::vector<Layer*> out;
        for (auto& l : layers_) out.push_back(l.get());
        return out;
    }

  private:
    std::vector<std::unique_ptr<Layer>> layers_;
};

// conv3x3-BN-ReLU-maxpool blocks over the given channel widths, then global
// average pooling and a single linear classifier head.
inline Sequential make_classifier(int in_channels, int classes,
                                  const std::vector<int>& widths = {16, 32, 64, 128},
                                  std::uint64_t init_seed = 1) {
    if (widths.empty()) throw ParameterError("make_classifier: need at least one block");
    Sequential net;
    Rng rng(derive_seed(init_seed, hash_string("model-init")));
    int prev = in_channels;
    for (std::size_t b = 0; b < widths.size(); ++b) {
        const std::string tag = "block" + std::to_string(b);
        auto conv = std::make_unique<Conv3x3>(prev, widths[b], tag + ".conv");
        conv->init_he(rng);
        net.add(std::move(conv));
        net.add(std::make_unique<BatchNorm>(widths[b], tag + ".bn"));
        net.add(std::make_unique<Relu>());
        net.add(std::make_unique<MaxPool2>());
        prev = widths[b];
    }
    net.add(std::make_unique<GlobalAvgPool>());
    auto head = std::make_unique<Linear>(prev, classes, "head");
    head->init_he(rng);
    net.add(std::move(head));
    return net;
}

// Mean softmax cross-entropy over the batch; writes dlogits if requested.
inline double softmax_cross_entropy(const Tensor& logits, const std::vector<int>& labels,
                                    Tensor* dlogits = nullptr) {
    if (static_cast<int>(labels.size()) != logits.n)
        throw ParameterError("softmax_cross_entropy: label count mismatch");
    const int k = logits.c;
    if (dlogits) *dlogits = Tensor(logits.n, k, 1, 1);
    double loss = 0.0;
    for (int in = 0; in < logits.n; ++in) {
        const double* z = &logits.data[static_cast<std::size_t>(in) * k];
        const double zmax = *std::max_element(z, z + k);
        double denom = 0.0;
        for (int j = 0; j < k; ++j) denom += std::exp(z[j] - zmax);
        const int y = labels[in];
        if (y < 0 || y >= k) throw ParameterError("softmax_cross_entropy: label out of range");
        loss += -(z[y] - zmax - std::log(denom));
        if (dlogits) {
            double* d = &dlogits->data[static_cast<std::size_t>(in) * k];
            for (int j = 0; j < k; ++j)
                d[j] = (std::exp(z[j] - zmax) / denom - (j == y ? 1.0 : 0.0)) /
                       static_cast<double>(logits.n);
        }
    }
    return loss / static_cast<double>(logits.n);
}

inline std::vector<double> softmax_row(const Tensor& logits, int row) {
    const int k = logits.c;
    const double* z = &logits.data[static_cast<std::size_t>(row) * k];
    const double zmax = *std::max_element(z, z + k);
    std::vector<double> p(k);
    double denom = 0.0;
    for (int j = 0; j < k; ++j) denom += (p[j] = std::exp(z[j] - zmax));
    for (double& v : p) v /= denom;
    return p;
}

// Ties resolve to the lowest class index.
inline int argmax_class(const Tensor& logits, int row) {
    const int k = logits.c;
    const double* z = &logits.data[static_cast<std::size_t>(row) * k];
    int best = 0;
    for (int j = 1; j < k; ++j)
        if (z[j] > z[best]) best = j;
    return best;
}

// Classic momentum: v <- m*v + g; p <- p - lr*v.
class SgdMomentum {
  public:
    SgdMomentum(double lr, double momentum) : lr_(lr), momentum_(momentum) {}

    void step(std::vector<Param>& params) {
        if (velocity_.size() != params.size()) {
            velocity_.clear();
            for (const auto& p : params) velocity_.emplace_back(p.value->size(), 0.0);
        }
        for (std::size_t i = 0; i < params.size(); ++i) {
            if (!params[i].trainable) continue;
            auto& v = velocity_[i];
            auto& val = *params[i].value;
            const auto& g = *params[i].grad;
            for (std::size_t j = 0; j < val.size(); ++j) {
                v[j] = momentum_ * v[j] + g[j];
                val[j] -= lr_ * v[j];
            }
        }
    }

    double lr() const { return lr_; }
    double momentum() const { return momentum_; }

  private:
    double lr_, momentum_;
    std::vector<std::vector<double>> velocity_;
};

// ---- weight container ----------------------------------------------------
// Layout (all little-endian):
//   8 bytes  magic "OMRWGT01"
//   u32      format version (1)
//   u32      block count
//   per block: u32 name length, name bytes, u64 element count, f32 data

namespace detail {

inline void put_u32(std::string& b, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
inline void put_u64(std::string& b, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
inline std::uint32_t get_u32(const std::string& b, std::size_t& off) {
    if (off + 4 > b.size()) throw FormatError("weights: truncated at offset " + std::to_string(off));
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[off++])) << (8 * i);
    return v;
}
inline std::uint64_t get_u64(const std::string& b, std::size_t& off) {
    if (off + 8 > b.size()) throw FormatError("weights: truncated at offset " + std::to_string(off));
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[off++])) << (8 * i);
    return v;
}

}  // namespace detail

inline std::string serialize_weights(std::vector<Param> params) {
    std::string b;
    b.append("OMRWGT01", 8);
    detail::put_u32(b, 1);
    detail::put_u32(b, static_cast<std::uint32_t>(params.size()));
    for (const auto& p : params) {
        detail::put_u32(b, static_cast<std::uint32_t>(p.name.size()));
        b.append(p.name);
        detail::put_u64(b, p.value->size());
        for (double d : *p.value) {
            const float f = static_cast<float>(d);
            std::uint32_t bits;
            std::memcpy(&bits, &f, 4);
            detail::put_u32(b, bits);
        }
    }
    return b;
}

inline void deserialize_weights(const std::string& b, std::vector<Param> params) {
    std::size_t off = 0;
    if (b.size() < 8 || b.compare(0, 8, "OMRWGT01") != 0)
        throw FormatError("weights: bad magic at offset 0");
    off = 8;
    const std::uint32_t version = detail::get_u32(b, off);
    if (version != 1)
        throw FormatError("weights: unsupported version " + std::to_string(version));
    const std::uint32_t count = detail::get_u32(b, off);
    if (count != params.size()) throw FormatError("weights: parameter block count mismatch");
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::uint32_t nlen = detail::get_u32(b, off);
        if (off + nlen > b.size())
            throw FormatError("weights: truncated name at offset " + std::to_string(off));
        const std::string name = b.substr(off, nlen);
        off += nlen;
        if (name != params[i].name)
            throw FormatError("weights: block '" + name + "' does not match '" + params[i].name + "'");
        const std::uint64_t n = detail::get_u64(b, off);
        if (n != params[i].value->size()) throw FormatError("weights: size mismatch in " + name);
        auto& val = *params[i].value;
        for (std::uint64_t j = 0; j < n; ++j) {
            const std::uint32_t bits = detail::get_u32(b, off);
            float f;
            std::memcpy(&f, &bits, 4);
            val[j] = static_cast<double>(f);
        }
    }
    if (off != b.size()) throw FormatError("weights: trailing bytes at offset " + std::to_string(off));
}

inline void save_weights(const std::string& path, std::vector<Param> params) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw FormatError("save_weights: cannot open " + path);
    const std::string b = serialize_weights(std::move(params));
    f.write(b.data(), static_cast<std::streamsize>(b.size()));
    if (!f) throw FormatError("save_weights: write failed for " + path);
}

inline void load_weights(const std::string& path, std::vector<Param> params) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw FormatError("load_weights: cannot open " + path);
    std::string b((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    deserialize_weights(b, std::move(params));
}

}  // namespace omr
