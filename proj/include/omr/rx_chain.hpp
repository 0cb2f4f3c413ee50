// Simulated transmit/receive chain: USB modulation of AF content onto an
// offset carrier inside a wideband I/Q stream, then the receive-side
// channelizer (mix down, 3 kHz channel filter, staged decimation to 6 kHz)
// and USB demodulation back to real AF.
#pragma once

#include <cmath>
#include <vector>

#include "omr/dsp.hpp"
#include "omr/signal.hpp"

namespace omr {

struct ChannelizerConfig {
    int wideband_rate_hz = 1'000'000;
    double carrier_offset_hz = 200'000.0;
    double channel_bw_hz = 3000.0;
    int af_rate_hz = 6000;

    void validate() const {
        if (carrier_offset_hz + channel_bw_hz >= wideband_rate_hz / 2.0)
            throw ParameterError("ChannelizerConfig: channel exceeds wideband Nyquist");
        if (af_rate_hz < 2.0 * channel_bw_hz)
            throw ParameterError("ChannelizerConfig: AF rate below channel bandwidth");
    }
};

// AF (real, af_rate) -> wideband I/Q containing only the upper sideband at
// carrier_offset_hz. Staging: analytic, x5, /3, x10, x10, mix up.
inline IqSignal usb_modulate(const RealSignal& af, const ChannelizerConfig& cfg = {}) {
    cfg.validate();
    if (af.sample_rate_hz != cfg.af_rate_hz)
        throw ParameterError("usb_modulate: AF signal must be at the configured AF rate");
    const double edge = cfg.channel_bw_hz - 50.0;  // passband edge, 2950 Hz

    IqSignal a = analytic(af);
    IqSignal s1 = resample(a, cfg.af_rate_hz * 5, edge);            // 30 kHz
    IqSignal s2 = resample(s1, cfg.af_rate_hz * 5 / 3, edge);       // 10 kHz
    IqSignal s3 = resample(s2, cfg.af_rate_hz * 5 / 3 * 10, edge);  // 100 kHz
    IqSignal s4 = resample(s3, cfg.wideband_rate_hz, edge);         // 1 MHz
    return mix(s4, cfg.carrier_offset_hz);
}

// Wideband I/Q -> complex baseband channel at af_rate_hz.
inline IqSignal channelize(const IqSignal& wideband, const ChannelizerConfig& cfg = {}) {
    cfg.validate();
    if (wideband.sample_rate_hz != cfg.wideband_rate_hz)
        throw ParameterError("channelize: input not at wideband rate");
    if (wideband.samples.empty()) return IqSignal(std::vector<cplx>{}, cfg.af_rate_hz);
    const double edge = cfg.channel_bw_hz - 50.0;

    IqSignal bb = mix(wideband, -cfg.carrier_offset_hz);
    IqSignal d1 = resample(bb, cfg.wideband_rate_hz / 10, edge);  // 100 kHz
    IqSignal d2 = resample(d1, cfg.wideband_rate_hz / 100, edge);  // 10 kHz
    // the 3 kHz channel filter: USB content lives in (0, bw), so apply a
    // complex bandpass made from a +bw/2-shifted lowpass
    FirFilter lp = design_lowpass(cfg.channel_bw_hz / 2.0 - 25.0, 150.0, 61.0, d2.sample_rate_hz);
    const double fshift = cfg.channel_bw_hz / 2.0;
    std::vector<cplx> taps_c(lp.taps.size());
    const double mid = (lp.taps.size() - 1) / 2.0;
    std::vector<cplx> chan(d2.samples.size(), cplx{});
    {
        for (std::size_t j = 0; j < lp.taps.size(); ++j) {
            const double ph = kTwoPi * fshift * (static_cast<double>(j) - mid) / d2.sample_rate_hz;
            taps_c[j] = lp.taps[j] * cplx(std::cos(ph), std::sin(ph));
        }
        const std::ptrdiff_t d = static_cast<std::ptrdiff_t>((lp.taps.size() - 1) / 2);
        const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(d2.samples.size());
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            cplx acc{};
            for (std::size_t j = 0; j < taps_c.size(); ++j) {
                const std::ptrdiff_t idx = i + d - static_cast<std::ptrdiff_t>(j);
                if (idx >= 0 && idx < n) acc += taps_c[j] * d2.samples[static_cast<std::size_t>(idx)];
            }
            chan[static_cast<std::size_t>(i)] = acc;
        }
    }
    IqSignal filtered(std::move(chan), d2.sample_rate_hz);
    IqSignal u1 = resample(filtered, d2.sample_rate_hz * 3, edge);  // 30 kHz
    return resample(u1, cfg.af_rate_hz, edge);                      // 6 kHz
}

// Channelized USB baseband -> real AF. The channel signal is already an
// upper-sideband analytic representation, so the real part recovers AF; a
// 50 Hz high-pass removes DC/carrier leakage.
inline RealSignal usb_demodulate(const IqSignal& chan, const ChannelizerConfig& cfg = {}) {
    if (chan.samples.empty()) return RealSignal(std::vector<double>{}, cfg.af_rate_hz);
    std::vector<double> re(chan.samples.size());
    for (std::size_t i = 0; i < re.size(); ++i) re[i] = chan.samples[i].real();
    FirFilter hp = design_highpass(30.0, 40.0, 60.0, chan.sample_rate_hz);
    return filter(RealSignal(std::move(re), chan.sample_rate_hz), hp);
}

// 10 log10(P_clean / P_residual), assuming gain-aligned inputs. Capped at
// +120 dB when the residual vanishes.
inline double estimate_snr(const RealSignal& clean, const RealSignal& received) {
    if (clean.samples.size() != received.samples.size())
        throw ParameterError("estimate_snr: length mismatch");
    double pc = 0.0, pr = 0.0;
    for (std::size_t i = 0; i < clean.samples.size(); ++i) {
        pc += clean.samples[i] * clean.samples[i];
        const double d = received.samples[i] - clean.samples[i];
        pr += d * d;
    }
    if (pr <= 0.0 || pc / pr > 1e12) return 120.0;
    return db(pc / pr);
}

// Receiver presets reproducing the reported R0/R1 conditions.
struct ReceiverPreset {
    const char* name;
    double snr_db;
    double max_drift_hz;
};
inline constexpr ReceiverPreset kReceiverR0{"R0", 35.0, 14.0};   // heterodyne
inline constexpr ReceiverPreset kReceiverR1{"R1", 31.0, 160.0};  // direct conversion

}  // namespace omr
