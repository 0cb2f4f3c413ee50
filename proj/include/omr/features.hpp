// Log-magnitude spectrogram features and the sliding evaluation windows.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "omr/fft.hpp"
#include "omr/signal.hpp"

namespace omr {

struct SpectrogramConfig {
    int n_fft = 128;     // 64, 128 or 256
    int hop = 0;         // defaults to n_fft / 2
    double floor_db = -80.0;

    int effective_hop() const { return hop > 0 ? hop : n_fft / 2; }

    void validate() const {
        if (n_fft < 8 || (n_fft & (n_fft - 1)) != 0)
            throw ParameterError("SpectrogramConfig: n_fft must be a power of two >= 8");
        if (hop < 0 || effective_hop() > n_fft)
            throw ParameterError("SpectrogramConfig: invalid hop");
        if (floor_db >= 0.0) throw ParameterError("SpectrogramConfig: floor must be negative");
    }
};

// Row-major [freq_bins x frames] log-power image.
struct Spectrogram {
    int freq_bins = 0;
    int frames = 0;
    std::vector<double> values;  // dB, clamped at config floor

    double at(int f, int t) const { return values[static_cast<std::size_t>(f) * frames + t]; }
    double& at(int f, int t) { return values[static_cast<std::size_t>(f) * frames + t]; }
};

// Hann-windowed STFT magnitude in dB. freq_bins = n_fft/2 + 1, frames =
// floor((N - n_fft)/hop) + 1; throws if the signal is shorter than one frame.
inline Spectrogram spectrogram(const RealSignal& s, const SpectrogramConfig& cfg = {}) {
    cfg.validate();
    const int n_fft = cfg.n_fft;
    const int hop = cfg.effective_hop();
    if (static_cast<int>(s.samples.size()) < n_fft)
        throw ParameterError("spectrogram: signal shorter than one analysis frame");

    Spectrogram out;
    out.freq_bins = n_fft / 2 + 1;
    out.frames = static_cast<int>((s.samples.size() - n_fft) / hop) + 1;
    out.values.assign(static_cast<std::size_t>(out.freq_bins) * out.frames, cfg.floor_db);

    std::vector<double> window(n_fft);
    for (int i = 0; i < n_fft; ++i)
        window[i] = 0.5 - 0.5 * std::cos(kTwoPi * i / static_cast<double>(n_fft));

    std::vector<cplx> frame(n_fft);
    for (int t = 0; t < out.frames; ++t) {
        const std::size_t off = static_cast<std::size_t>(t) * hop;
        for (int i = 0; i < n_fft; ++i)
            frame[i] = cplx(s.samples[off + i] * window[i], 0.0);
        fft(frame, false);
        for (int f = 0; f < out.freq_bins; ++f) {
            const double p = std::norm(frame[f]);
            const double v = (p > 0.0) ? 10.0 * std::log10(p) : cfg.floor_db;
            out.at(f, t) = std::max(v, cfg.floor_db);
        }
    }
    return out;
}

// Model input: per-image min-max normalization to [0,1], replicated across
// three identical channels (channel-major). A constant image maps to 0.5.
struct ModelInput {
    int channels = 3;
    int height = 0;  // freq bins
    int width = 0;   // frames
    std::vector<double> values;
};

inline ModelInput to_model_input(const Spectrogram& sg) {
    if (sg.values.empty()) throw ParameterError("to_model_input: empty spectrogram");
    const auto [mn_it, mx_it] = std::minmax_element(sg.values.begin(), sg.values.end());
    const double mn = *mn_it, mx = *mx_it;
    ModelInput in;
    in.height = sg.freq_bins;
    in.width = sg.frames;
    const std::size_t plane = sg.values.size();
    in.values.resize(3 * plane);
    for (std::size_t i = 0; i < plane; ++i) {
        const double v = (mx > mn) ? (sg.values[i] - mn) / (mx - mn) : 0.5;
        in.values[i] = v;
        in.values[plane + i] = v;
        in.values[2 * plane + i] = v;
    }
    return in;
}

struct WindowSlice {
    std::size_t start = 0;  // sample index
    std::size_t length = 0;
};

// Sliding windows of window_s seconds every shift_s seconds; count is
// floor((T - d)/s) + 1. Throws when the signal is shorter than one window.
inline std::vector<WindowSlice> window_slices(std::size_t n_samples, int rate_hz, double window_s,
                                              double shift_s) {
    if (window_s <= 0.0 || shift_s <= 0.0)
        throw ParameterError("window_slices: durations must be positive");
    const std::size_t win = static_cast<std::size_t>(std::llround(window_s * rate_hz));
    const std::size_t shift = static_cast<std::size_t>(std::llround(shift_s * rate_hz));
    if (win == 0 || shift == 0 || n_samples < win)
        throw ParameterError("window_slices: signal shorter than one window");
    std::vector<WindowSlice> out;
    for (std::size_t start = 0; start + win <= n_samples; start += shift)
        out.push_back({start, win});
    return out;
}

inline RealSignal extract(const RealSignal& s, const WindowSlice& w) {
    if (w.start + w.length > s.samples.size())
        throw ParameterError("extract: slice out of range");
    std::vector<double> v(s.samples.begin() + static_cast<std::ptrdiff_t>(w.start),
                          s.samples.begin() + static_cast<std::ptrdiff_t>(w.start + w.length));
    return RealSignal(std::move(v), s.sample_rate_hz);
}

}  // namespace omr
