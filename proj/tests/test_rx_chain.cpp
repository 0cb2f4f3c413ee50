#include "doctest.h"
#include "omr/channel.hpp"
#include "omr/rx_chain.hpp"
#include "test_helpers.hpp"

using namespace omr;
using namespace omr::test;

namespace {

// middle of a signal with the edge transients of the filter cascade trimmed
RealSignal trimmed(const RealSignal& s, double trim_s) {
    const std::size_t t = static_cast<std::size_t>(trim_s * s.sample_rate_hz);
    std::vector<double> mid(s.samples.begin() + t, s.samples.end() - t);
    return RealSignal(std::move(mid), s.sample_rate_hz);
}

RealSignal roundtrip(const RealSignal& af, const ChannelizerConfig& cfg = {}) {
    return usb_demodulate(channelize(usb_modulate(af, cfg), cfg), cfg);
}

}  // namespace

TEST_CASE("roundtrip preserves a grid of AF tones within 1 Hz and 1 dB") {
    // one multitone block exercises every stage of the cascade at once
    const double amps = 0.12;
    std::vector<double> freqs{300, 700, 1100, 1500, 1900, 2300, 2700};
    RealSignal af = make_tone(freqs[0], amps, 3.0, 6000);
    for (std::size_t i = 1; i < freqs.size(); ++i) {
        RealSignal t = make_tone(freqs[i], amps, 3.0, 6000, 0.37 * static_cast<double>(i));
        for (std::size_t k = 0; k < af.samples.size(); ++k) af.samples[k] += t.samples[k];
    }
    RealSignal rec = roundtrip(af);
    REQUIRE(rec.samples.size() == af.samples.size());
    REQUIRE(rec.sample_rate_hz == 6000);

    auto spec_in = spectrum(trimmed(af, 0.5));
    auto spec_out = spectrum(trimmed(rec, 0.5));
    const std::size_t n = spec_out.size();
    for (double f : freqs) {
        CAPTURE(f);
        // frequency: strongest bin within +-20 Hz of the nominal tone
        std::size_t best = 0;
        double bm = -1.0;
        for (std::size_t k = 0; k < n / 2; ++k) {
            double fk = static_cast<double>(k) * 6000.0 / static_cast<double>(n);
            if (std::fabs(fk - f) <= 20.0 && std::abs(spec_out[k]) > bm) {
                bm = std::abs(spec_out[k]);
                best = k;
            }
        }
        double f_rec = static_cast<double>(best) * 6000.0 / static_cast<double>(n);
        CHECK(std::fabs(f_rec - f) <= 1.0);
        // amplitude: output line magnitude vs the input line, +-1 dB
        double gain_db = db(std::norm(spec_out[best]) /
                            std::norm(spec_in[best]));
        CHECK(std::fabs(gain_db) <= 1.0);
    }
}

TEST_CASE("roundtrip reproduces band-limited noise sample-for-sample") {
    Rng rng(314);
    std::vector<double> w(18000);
    for (auto& v : w) v = 0.2 * rng.normal();
    FirFilter band = design_lowpass(2400, 200, 60, 6000);
    RealSignal af = freq_shift(filter(RealSignal(std::move(w), 6000), band), 300);
    RealSignal rec = roundtrip(af);
    RealSignal a = trimmed(af, 0.5), b = trimmed(rec, 0.5);
    CHECK(rms_diff(a.samples, b.samples) / rms(a.samples) <= 0.05);
    CHECK(estimate_snr(a, b) >= 26.0);
}

TEST_CASE("usb_modulate places energy only in the upper sideband slot") {
    RealSignal af = make_tone(1000, 0.6, 2.0, 6000);
    IqSignal wb = usb_modulate(af);
    CHECK(wb.sample_rate_hz == 1'000'000);
    CHECK(wb.samples.size() == af.samples.size() * 1'000'000 / 6000);

    auto spec = spectrum(wb);
    double carrier = spectrum_peak_near(spec, 1'000'000, 201'000, 100);
    // lower-sideband image and far out-of-band leakage
    double lsb = spectrum_peak_near(spec, 1'000'000, 199'000, 1500);
    double far = spectrum_peak_near(spec, 1'000'000, 300'000, 40'000);
    double dc = spectrum_peak_near(spec, 1'000'000, 0, 40'000);
    CHECK(db(lsb * lsb / (carrier * carrier)) <= -50.0);
    CHECK(db(far * far / (carrier * carrier)) <= -50.0);
    CHECK(db(dc * dc / (carrier * carrier)) <= -50.0);
}

TEST_CASE("channelize rejects out-of-channel wideband content by 60 dB") {
    // in-channel reference: complex tone where USB content for AF 1 kHz sits
    IqSignal inside = make_cplx_tone(201'000, 0.5, 1.0, 1'000'000);
    IqSignal outside = make_cplx_tone(230'000, 0.5, 1.0, 1'000'000);
    double p_in = power(channelize(inside));
    double p_out = power(channelize(outside));
    CHECK(db(p_out / p_in) <= -60.0);
}

TEST_CASE("chain stages are linear and preserve silence") {
    RealSignal a = make_tone(800, 0.3, 1.0, 6000);
    RealSignal b = make_tone(2100, 0.25, 1.0, 6000);
    RealSignal sum(std::vector<double>(a.samples.size()), 6000);
    for (std::size_t i = 0; i < sum.samples.size(); ++i)
        sum.samples[i] = a.samples[i] + b.samples[i];

    IqSignal wa = usb_modulate(a), wb = usb_modulate(b), ws = usb_modulate(sum);
    std::vector<double> resid(ws.samples.size());
    for (std::size_t i = 0; i < resid.size(); ++i)
        resid[i] = std::abs(ws.samples[i] - wa.samples[i] - wb.samples[i]);
    double peak = *std::max_element(resid.begin(), resid.end());
    CHECK(peak <= 1e-9);

    // scaling passes through
    RealSignal half = amplify(a, 0.5);
    IqSignal wh = usb_modulate(half);
    double sc = 0.0;
    for (std::size_t i = 0; i < wh.samples.size(); ++i)
        sc = std::max(sc, std::abs(wh.samples[i] - 0.5 * wa.samples[i]));
    CHECK(sc <= 1e-9);

    // silence in, silence out
    RealSignal zero(std::vector<double>(6000, 0.0), 6000);
    RealSignal rz = roundtrip(zero);
    CHECK(rms(rz.samples) <= 1e-12);
}

TEST_CASE("configuration and rate validation") {
    ChannelizerConfig cfg;
    cfg.carrier_offset_hz = 499'000.0;
    CHECK_THROWS_AS(cfg.validate(), ParameterError);

    RealSignal wrong_rate = make_tone(1000, 0.5, 1.0, 8000);
    CHECK_THROWS_AS(usb_modulate(wrong_rate), ParameterError);
    IqSignal not_wideband = make_cplx_tone(1000, 0.5, 1.0, 48'000);
    CHECK_THROWS_AS(channelize(not_wideband), ParameterError);
}

TEST_CASE("estimate_snr inverts a known injection and caps at 120 dB") {
    RealSignal clean = make_tone(1200, 0.7, 2.0, 6000);
    CHECK(estimate_snr(clean, clean) == 120.0);

    for (double target : {10.0, 30.0}) {
        Rng rng(static_cast<std::uint64_t>(target));
        RealSignal noisy = add_noise_snr(clean, target, rng);
        CHECK(estimate_snr(clean, noisy) == doctest::Approx(target).epsilon(1e-3));
    }
    RealSignal shorter = make_tone(1200, 0.7, 1.0, 6000);
    CHECK_THROWS_AS(estimate_snr(clean, shorter), ParameterError);
}

TEST_CASE("receiver presets carry the reported operating conditions") {
    CHECK(std::string(kReceiverR0.name) == "R0");
    CHECK(kReceiverR0.snr_db == 35.0);
    CHECK(kReceiverR0.max_drift_hz == 14.0);
    CHECK(std::string(kReceiverR1.name) == "R1");
    CHECK(kReceiverR1.snr_db == 31.0);
    CHECK(kReceiverR1.max_drift_hz == 160.0);
}
