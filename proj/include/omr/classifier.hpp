// Training loop for the spectrogram classifier: per-epoch impairment
// augmentation of the raw training clips, fixed-plan validation, SGD with
// momentum, early stopping on validation accuracy.
#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "omr/channel.hpp"
#include "omr/features.hpp"
#include "omr/nn.hpp"
#include "omr/signal.hpp"

namespace omr {

struct TrainConfig {
    double lr = 0.001;
    double momentum = 0.9;
    int batch_size = 256;
    int patience = 5;
    int max_epochs = 100;
    double window_s = 2.0;
    double train_shift_s = 2.0;  // non-overlapping training windows
    SpectrogramConfig spec;      // n_fft 128, hop 64 by default
    std::vector<int> widths = {16, 32, 64, 128};
    AugRanges aug_ranges;
    OpMask aug_mask;      // ablation switch per augmentation op
    bool augment = true;  // per-epoch training expansion on/off
    std::uint64_t seed = 1;
};

struct Example {
    ModelInput input;
    int label = 0;
};

inline std::vector<std::string> sorted_labels(const std::vector<LabeledSignal>& clips) {
    std::vector<std::string> labels;
    for (const auto& c : clips) labels.push_back(c.omp_label);
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    return labels;
}

inline int label_index(const std::vector<std::string>& labels, const std::string& name) {
    auto it = std::lower_bound(labels.begin(), labels.end(), name);
    if (it == labels.end() || *it != name)
        throw ParameterError("label_index: unknown class '" + name + "'");
    return static_cast<int>(it - labels.begin());
}

// Slice clips into windows and featurize each window.
inline std::vector<Example> featurize_clips(const std::vector<LabeledSignal>& clips,
                                            const std::vector<std::string>& labels,
                                            double window_s, double shift_s,
                                            const SpectrogramConfig& spec) {
    std::vector<Example> out;
    for (const auto& clip : clips) {
        const int label = label_index(labels, clip.omp_label);
        for (const WindowSlice& w :
             window_slices(clip.signal.samples.size(), clip.signal.sample_rate_hz, window_s, shift_s))
            out.push_back({to_model_input(spectrogram(extract(clip.signal, w), spec)), label});
    }
    return out;
}

// Stops after `patience` consecutive epochs without strict improvement.
class EarlyStopper {
  public:
    explicit EarlyStopper(int patience) : patience_(patience) {
        if (patience < 1) throw ParameterError("EarlyStopper: patience must be >= 1");
    }

    // Returns true when training should stop after this epoch.
    bool update(int epoch, double metric) {
        if (metric > best_) {
            best_ = metric;
            best_epoch_ = epoch;
            since_ = 0;
            return false;
        }
        return ++since_ >= patience_;
    }

    double best() const { return best_; }
    int best_epoch() const { return best_epoch_; }

  private:
    int patience_;
    double best_ = -std::numeric_limits<double>::infinity();
    int best_epoch_ = -1;
    int since_ = 0;
};

struct EpochStats {
    int epoch = 0;
    std::uint64_t epoch_seed = 0;
    double train_loss = 0.0;
    double val_accuracy = 0.0;
};

struct TrainResult {
    std::vector<std::string> class_labels;
    std::string weights_blob;  // best-validation weights
    int best_epoch = -1;
    double best_val_accuracy = 0.0;
    std::vector<EpochStats> history;
};

namespace detail {

inline Tensor batch_tensor(const std::vector<Example>& ex, const std::vector<std::size_t>& idx,
                           std::size_t lo, std::size_t hi) {
    const ModelInput& first = ex[idx[lo]].input;
    Tensor t(static_cast<int>(hi - lo), first.channels, first.height, first.width);
    const std::size_t per = first.values.size();
    for (std::size_t i = lo; i < hi; ++i) {
        if (ex[idx[i]].input.values.size() != per)
            throw ParameterError("batch_tensor: inconsistent input shapes");
        std::copy(ex[idx[i]].input.values.begin(), ex[idx[i]].input.values.end(),
                  t.data.begin() + static_cast<std::ptrdiff_t>((i - lo) * per));
    }
    return t;
}

inline double eval_accuracy(Sequential& net, const std::vector<Example>& ex, int batch_size) {
    if (ex.empty()) throw ParameterError("eval_accuracy: no examples");
    std::vector<std::size_t> idx(ex.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::size_t correct = 0;
    for (std::size_t lo = 0; lo < ex.size(); lo += batch_size) {
        const std::size_t hi = std::min(ex.size(), lo + batch_size);
        Tensor logits = net.forward(batch_tensor(ex, idx, lo, hi), false);
        for (std::size_t i = lo; i < hi; ++i)
            if (argmax_class(logits, static_cast<int>(i - lo)) == ex[idx[i]].label) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(ex.size());
}

}  // namespace detail

inline TrainResult train_classifier(const std::vector<LabeledSignal>& train_clips,
                                    const std::vector<LabeledSignal>& val_clips,
                                    const TrainConfig& cfg) {
    if (train_clips.empty() || val_clips.empty())
        throw ParameterError("train_classifier: empty dataset");
    TrainResult res;
    res.class_labels = sorted_labels(train_clips);

    // validation set: fixed impairment plan, featurized once
    std::vector<LabeledSignal> val_impaired;
    for (const auto& c : val_clips)
        val_impaired.push_back({c.omp_label, apply_plan(c.signal, fixed_val_plan())});
    const std::vector<Example> val_ex = featurize_clips(val_impaired, res.class_labels,
                                                        cfg.window_s, cfg.window_s, cfg.spec);

    Sequential net = make_classifier(3, static_cast<int>(res.class_labels.size()), cfg.widths,
                                     derive_seed(cfg.seed, hash_string("init")));
    SgdMomentum opt(cfg.lr, cfg.momentum);
    EarlyStopper stopper(cfg.patience);

    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        const std::uint64_t epoch_seed = derive_seed(cfg.seed, hash_string("epoch"),
                                                     static_cast<std::uint64_t>(epoch));
        std::vector<Example> train_ex;
        if (cfg.augment) {
            train_ex = featurize_clips(
                expand_training_set(train_clips, cfg.aug_ranges, epoch_seed, 5, cfg.aug_mask),
                res.class_labels, cfg.window_s, cfg.train_shift_s, cfg.spec);
        } else {
            train_ex = featurize_clips(train_clips, res.class_labels, cfg.window_s,
                                       cfg.train_shift_s, cfg.spec);
        }

        std::vector<std::size_t> order(train_ex.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        Rng shuffle_rng(derive_seed(cfg.seed, hash_string("shuffle"),
                                    static_cast<std::uint64_t>(epoch)));
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[shuffle_rng.uniform_int(i)]);

        double loss_sum = 0.0;
        std::size_t batches = 0;
        for (std::size_t lo = 0; lo < order.size(); lo += cfg.batch_size) {
            const std::size_t hi = std::min(order.size(), lo + cfg.batch_size);
            Tensor x = detail::batch_tensor(train_ex, order, lo, hi);
            std::vector<int> labels;
            for (std::size_t i = lo; i < hi; ++i) labels.push_back(train_ex[order[i]].label);
            Tensor logits = net.forward(x, true);
            Tensor dlogits;
            loss_sum += softmax_cross_entropy(logits, labels, &dlogits);
            net.backward(dlogits);
            auto params = net.params();
            opt.step(params);
            ++batches;
        }

        const double val_acc = detail::eval_accuracy(net, val_ex, cfg.batch_size);
        res.history.push_back({epoch, epoch_seed, loss_sum / static_cast<double>(batches), val_acc});

        if (val_acc > res.best_val_accuracy || res.best_epoch < 0) {
            res.best_val_accuracy = val_acc;
            res.best_epoch = epoch;
            res.weights_blob = serialize_weights(net.params());
        }
        if (stopper.update(epoch, val_acc)) break;
    }
    return res;
}

// Inference wrapper around a trained set of weights.
struct Classifier {
    std::vector<std::string> class_labels;
    TrainConfig config;
    Sequential net;

    static Classifier from_result(const TrainResult& res, const TrainConfig& cfg) {
        Classifier c;
        c.class_labels = res.class_labels;
        c.config = cfg;
        c.net = make_classifier(3, static_cast<int>(res.class_labels.size()), cfg.widths, 0);
        auto params = c.net.params();
        deserialize_weights(res.weights_blob, params);
        return c;
    }

    // Predicted class index per example.
    std::vector<int> predict(const std::vector<Example>& ex) {
        std::vector<std::size_t> idx(ex.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::vector<int> out(ex.size());
        for (std::size_t lo = 0; lo < ex.size(); lo += config.batch_size) {
            const std::size_t hi = std::min(ex.size(), lo + static_cast<std::size_t>(config.batch_size));
            Tensor logits = net.forward(detail::batch_tensor(ex, idx, lo, hi), false);
            for (std::size_t i = lo; i < hi; ++i)
                out[i] = argmax_class(logits, static_cast<int>(i - lo));
        }
        return out;
    }
};

}  // namespace omr
