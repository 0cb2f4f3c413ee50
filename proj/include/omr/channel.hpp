// Channel-impairment augmentation pipeline: Amplify, FreqShift, SimTone,
// Noise, applied in that order. Training plans draw parameters uniformly
// from the standard ranges; validation uses one fixed plan.
#pragma once

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "omr/dsp.hpp"
#include "omr/rng.hpp"
#include "omr/signal.hpp"

namespace omr {

struct Amplify {
    double factor = 1.0;
};
struct FreqShift {
    double shift_hz = 0.0;
};
struct SimTone {
    double freq_hz = 1000.0;
    double amplitude = 0.0;
};
struct Noise {
    double snr_db = 30.0;
};

using AugOp = std::variant<Amplify, FreqShift, SimTone, Noise>;

inline std::string aug_op_name(const AugOp& op) {
    struct V {
        std::string operator()(const Amplify&) const { return "Amplify"; }
        std::string operator()(const FreqShift&) const { return "FreqShift"; }
        std::string operator()(const SimTone&) const { return "SimTone"; }
        std::string operator()(const Noise&) const { return "Noise"; }
    };
    return std::visit(V{}, op);
}

struct AugPlan {
    std::vector<AugOp> ops;
    std::uint64_t rng_seed = 0;
};

struct AugRanges {
    double amplify_lo = 0.1, amplify_hi = 2.0;
    double freq_shift_lo = -500.0, freq_shift_hi = 500.0;
    double sim_tone_freq_lo = 10.0, sim_tone_freq_hi = 2990.0;
    double sim_tone_amp_lo = 0.0, sim_tone_amp_hi = 0.3;
    double noise_snr_lo = -6.0, noise_snr_hi = 42.0;
};

inline RealSignal amplify(const RealSignal& s, double factor) {
    if (factor <= 0.0) throw ParameterError("amplify: factor must be positive");
    RealSignal out = s;
    for (double& v : out.samples) v *= factor;
    return out;
}

// Analytic -> complex exponential -> lower-sideband removal -> real part.
inline RealSignal freq_shift(const RealSignal& s, double shift_hz) {
    if (std::fabs(shift_hz) >= s.sample_rate_hz / 2.0)
        throw ParameterError("freq_shift: shift beyond Nyquist");
    IqSignal shifted = mix(analytic(s), shift_hz);
    // content pushed below 0 Hz is removed, not aliased
    IqSignal usb = suppress_negative_freqs(shifted);
    std::vector<double> out(usb.samples.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = usb.samples[i].real();
    return RealSignal(std::move(out), s.sample_rate_hz);
}

inline RealSignal sim_tone(const RealSignal& s, double freq_hz, double amplitude,
                           double phase = 0.0) {
    if (freq_hz <= 0.0 || freq_hz >= s.sample_rate_hz / 2.0)
        throw ParameterError("sim_tone: frequency out of range");
    if (amplitude < 0.0) throw ParameterError("sim_tone: negative amplitude");
    RealSignal out = s;
    for (std::size_t i = 0; i < out.samples.size(); ++i)
        out.samples[i] +=
            amplitude * std::sin(kTwoPi * freq_hz * static_cast<double>(i) / s.sample_rate_hz + phase);
    return out;
}

// Gaussian noise scaled so the realized (not just expected) noise power
// hits the target SNR exactly.
inline RealSignal add_noise_snr(const RealSignal& s, double snr_db, Rng& rng) {
    const double psig = power(s);
    if (psig <= 0.0) throw ParameterError("add_noise_snr: zero-power input");
    const double ptarget = psig / std::pow(10.0, snr_db / 10.0);
    std::vector<double> n(s.samples.size());
    double pn = 0.0;
    for (double& v : n) {
        v = rng.normal();
        pn += v * v;
    }
    pn /= static_cast<double>(n.size());
    const double g = std::sqrt(ptarget / pn);
    RealSignal out = s;
    for (std::size_t i = 0; i < n.size(); ++i) out.samples[i] += g * n[i];
    return out;
}

// Time-varying shift ramping linearly from 0 to total_drift_hz. Optional
// impairment, off by default in every standard plan.
inline RealSignal linear_drift(const RealSignal& s, double total_drift_hz) {
    if (std::fabs(total_drift_hz) > 500.0) throw ParameterError("linear_drift: out of range");
    IqSignal a = analytic(s);
    const double n_total = static_cast<double>(a.samples.size());
    std::vector<cplx> out(a.samples.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        // instantaneous shift f(t) = drift * t/T; phase = integral of f
        const double t = static_cast<double>(i) / s.sample_rate_hz;
        const double ph = kTwoPi * 0.5 * total_drift_hz * t * t /
                          (n_total / s.sample_rate_hz);
        out[i] = a.samples[i] * cplx(std::cos(ph), std::sin(ph));
    }
    IqSignal usb = suppress_negative_freqs(IqSignal(std::move(out), s.sample_rate_hz));
    std::vector<double> r(usb.samples.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = usb.samples[i].real();
    return RealSignal(std::move(r), s.sample_rate_hz);
}

// Applies ops strictly in sequence. Deterministic given (signal, rng_seed).
// `trace` (optional) records the op order actually executed.
inline RealSignal apply_plan(const RealSignal& signal, const AugPlan& plan,
                             std::vector<std::string>* trace = nullptr) {
    Rng rng(plan.rng_seed);
    RealSignal cur = signal;
    for (const AugOp& op : plan.ops) {
        if (trace) trace->push_back(aug_op_name(op));
        if (const auto* a = std::get_if<Amplify>(&op)) {
            cur = amplify(cur, a->factor);
        } else if (const auto* f = std::get_if<FreqShift>(&op)) {
            cur = freq_shift(cur, f->shift_hz);
        } else if (const auto* t = std::get_if<SimTone>(&op)) {
            // random initial phase from the plan generator
            cur = sim_tone(cur, t->freq_hz, t->amplitude, rng.uniform(0.0, kTwoPi));
        } else if (const auto* n = std::get_if<Noise>(&op)) {
            cur = add_noise_snr(cur, n->snr_db, rng);
        }
    }
    return cur;
}

// Per-op switch for ablation studies; all on by default.
struct OpMask {
    bool amplify = true;
    bool freq_shift = true;
    bool sim_tone1 = true;
    bool sim_tone2 = true;
    bool noise = true;

    bool all_off() const { return !amplify && !freq_shift && !sim_tone1 && !sim_tone2 && !noise; }
};

// One Amplify, one FreqShift, two SimTone, one Noise, parameters uniform
// over their ranges, canonical order. Masked ops are skipped; their
// parameters are still drawn so the remaining ops see identical values.
inline AugPlan sample_train_plan(const AugRanges& r, Rng& rng, const OpMask& mask = {}) {
    AugPlan p;
    p.rng_seed = rng.next_u64();
    const double amp = rng.uniform(r.amplify_lo, r.amplify_hi);
    const double fs = rng.uniform(r.freq_shift_lo, r.freq_shift_hi);
    const double t1f = rng.uniform(r.sim_tone_freq_lo, r.sim_tone_freq_hi);
    const double t1a = rng.uniform(r.sim_tone_amp_lo, r.sim_tone_amp_hi);
    const double t2f = rng.uniform(r.sim_tone_freq_lo, r.sim_tone_freq_hi);
    const double t2a = rng.uniform(r.sim_tone_amp_lo, r.sim_tone_amp_hi);
    const double snr = rng.uniform(r.noise_snr_lo, r.noise_snr_hi);
    if (mask.amplify) p.ops.push_back(Amplify{amp});
    if (mask.freq_shift) p.ops.push_back(FreqShift{fs});
    if (mask.sim_tone1) p.ops.push_back(SimTone{t1f, t1a});
    if (mask.sim_tone2) p.ops.push_back(SimTone{t2f, t2a});
    if (mask.noise) p.ops.push_back(Noise{snr});
    return p;
}

// The standard fixed validation plan.
inline AugPlan fixed_val_plan(std::uint64_t seed = 0xf17ed0001ULL) {
    AugPlan p;
    p.rng_seed = seed;
    p.ops.push_back(Amplify{0.5});
    p.ops.push_back(FreqShift{400.0});
    p.ops.push_back(SimTone{1000.0, 0.03});
    p.ops.push_back(SimTone{2300.0, 0.015});
    p.ops.push_back(Noise{30.0});
    return p;
}

struct LabeledSignal {
    std::string omp_label;
    RealSignal signal;
};

// 5 independently sampled augmented copies + 1 clean copy per input.
// Call with a fresh epoch_seed each epoch for new impairments.
inline std::vector<LabeledSignal> expand_training_set(const std::vector<LabeledSignal>& in,
                                                      const AugRanges& ranges,
                                                      std::uint64_t epoch_seed,
                                                      int augmented_copies = 5,
                                                      const OpMask& mask = {}) {
    if (in.empty()) throw ParameterError("expand_training_set: empty input");
    std::vector<LabeledSignal> out;
    out.reserve(in.size() * (augmented_copies + 1));
    for (std::size_t i = 0; i < in.size(); ++i) {
        for (int c = 0; c < augmented_copies; ++c) {
            Rng rng(derive_seed(epoch_seed, i, static_cast<std::uint64_t>(c)));
            AugPlan plan = sample_train_plan(ranges, rng, mask);
            out.push_back({in[i].omp_label, apply_plan(in[i].signal, plan)});
        }
        out.push_back(in[i]);  // unaugmented instance
    }
    return out;
}

}  // namespace omr
