#include "doctest.h"

#include "omr/dsp.hpp"
#include "omr/rng.hpp"
#include "test_helpers.hpp"

using namespace omr;
using namespace omr::test;

TEST_CASE("fft matches naive dft on odd and pow2 lengths") {
    Rng rng(7);
    for (std::size_t n : {8u, 64u, 100u, 243u}) {
        std::vector<cplx> x(n);
        for (auto& v : x) v = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
        std::vector<cplx> ref(n);
        for (std::size_t k = 0; k < n; ++k) {
            cplx acc{};
            for (std::size_t i = 0; i < n; ++i) {
                double a = -kTwoPi * static_cast<double>(k * i % n) / static_cast<double>(n);
                acc += x[i] * cplx(std::cos(a), std::sin(a));
            }
            ref[k] = acc;
        }
        std::vector<cplx> y = x;
        fft(y, false);
        for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(y[k] - ref[k]) < 1e-9 * std::sqrt(n));
        fft(y, true);
        for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(y[k] - x[k]) < 1e-12);
    }
}

TEST_CASE("power basics") {
    CHECK(power(make_tone(1000, 1.0, 1.0, 6000)) == doctest::Approx(0.5).epsilon(1e-6));
    RealSignal z(std::vector<double>(100, 0.0), 6000);
    CHECK(power(z) == 0.0);
    CHECK_THROWS_AS(power(RealSignal()), ParameterError);

    // concatenation of two equal-length signals -> mean of their powers
    RealSignal a = make_tone(500, 0.5, 1.0, 6000);
    RealSignal b = make_tone(700, 1.0, 1.0, 6000);
    std::vector<double> cat = a.samples;
    cat.insert(cat.end(), b.samples.begin(), b.samples.end());
    CHECK(power(RealSignal(cat, 6000)) ==
          doctest::Approx(0.5 * (power(a) + power(b))).epsilon(1e-9));
}

TEST_CASE("design_lowpass rejects bad band edges") {
    CHECK_THROWS_AS(design_lowpass(2990, 1000, 60, 6000), ParameterError);
    CHECK_THROWS_AS(design_lowpass(-5, 100, 60, 6000), ParameterError);
    CHECK_THROWS_AS(design_lowpass(1000, 100, 10, 6000), ParameterError);
}

TEST_CASE("designed lowpass meets its attenuation contract") {
    // 3 kHz channel filter at 1 MHz: 4 kHz tone must drop >= 60 dB vs 1 kHz
    FirFilter f = design_lowpass(3000, 300, 60, 1'000'000);
    CHECK(f.taps.size() % 2 == 1);
    RealSignal t1 = make_tone(1000, 1.0, 0.05, 1'000'000);
    RealSignal t4 = make_tone(4000, 1.0, 0.05, 1'000'000);
    auto m1 = spectrum_peak_near(spectrum(filter(t1, f)), 1'000'000, 1000, 100);
    auto m4 = spectrum_peak_near(spectrum(filter(t4, f)), 1'000'000, 4000, 100);
    CHECK(db(m4 * m4 / (m1 * m1)) <= -60.0);
}

TEST_CASE("unit impulse through a filter returns the taps") {
    FirFilter f = design_lowpass(1000, 200, 40, 6000);
    std::vector<double> imp(f.taps.size(), 0.0);
    imp[f.delay()] = 1.0;  // centered so aligned output reproduces the taps
    RealSignal y = filter(RealSignal(imp, 6000), f);
    for (std::size_t i = 0; i < f.taps.size(); ++i)
        CHECK(y.samples[i] == doctest::Approx(f.taps[i]).epsilon(1e-12));
}

TEST_CASE("filter preserves DC and zeros") {
    FirFilter f = design_lowpass(1000, 200, 60, 6000);
    RealSignal dc(std::vector<double>(4000, 0.7), 6000);
    RealSignal y = filter(dc, f);
    // away from edges
    for (std::size_t i = 1000; i < 3000; ++i) CHECK(std::fabs(y.samples[i] - 0.7) < 1e-6);
    RealSignal z(std::vector<double>(512, 0.0), 6000);
    for (double v : filter(z, f).samples) CHECK(v == 0.0);
}

TEST_CASE("filter suppresses out-of-band tone in a mix") {
    FirFilter f = design_lowpass(3000, 300, 60, 48000);
    RealSignal mixsig = make_tone(1000, 1.0, 0.5, 48000);
    RealSignal t4 = make_tone(4000, 1.0, 0.5, 48000);
    for (std::size_t i = 0; i < mixsig.size(); ++i) mixsig.samples[i] += t4.samples[i];
    auto spec = spectrum(filter(mixsig, f));
    double p1 = spectrum_peak_near(spec, 48000, 1000, 50);
    double p4 = spectrum_peak_near(spec, 48000, 4000, 50);
    CHECK(db(p4 * p4 / (p1 * p1)) <= -60.0);
}

TEST_CASE("filter linearity property") {
    Rng rng(42);
    FirFilter f = design_lowpass(1200, 300, 50, 6000);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> a(2000), b(2000), s(2000);
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] = rng.uniform(-1, 1);
            b[i] = rng.uniform(-1, 1);
            s[i] = a[i] + b[i];
        }
        auto ya = filter(RealSignal(a, 6000), f).samples;
        auto yb = filter(RealSignal(b, 6000), f).samples;
        auto ys = filter(RealSignal(s, 6000), f).samples;
        for (std::size_t i = 0; i < ys.size(); ++i)
            CHECK(std::fabs(ys[i] - ya[i] - yb[i]) < 1e-9);
    }
}

TEST_CASE("analytic signal of a cosine") {
    RealSignal x = make_tone(1000, 1.0, 1.0, 6000);
    IqSignal a = analytic(x);
    // magnitude envelope ~1 away from edges
    for (std::size_t i = 300; i + 300 < a.size(); ++i)
        CHECK(std::abs(a.samples[i]) == doctest::Approx(1.0).epsilon(0.02));
    // real part equals input
    double err = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a.samples[i].real() - x.samples[i];
        err += d * d;
    }
    CHECK(std::sqrt(err / a.size()) <= 1e-3);
    // negative-frequency energy
    auto spec = spectrum(a);
    double pos = spectrum_peak_near(spec, 6000, 1000, 50);
    double neg = spectrum_peak_near(spec, 6000, -1000, 50);
    CHECK(db((neg * neg + 1e-300) / (pos * pos)) <= -40.0);
    CHECK_THROWS_AS(analytic(RealSignal(std::vector<double>(32, 1.0), 6000)), ParameterError);
}

TEST_CASE("analytic negative-frequency suppression on random band-limited input") {
    Rng rng(99);
    FirFilter bp = design_lowpass(2000, 300, 60, 6000);
    for (int trial = 0; trial < 4; ++trial) {
        std::vector<double> w(6000);
        for (auto& v : w) v = rng.normal();
        RealSignal x = filter(RealSignal(w, 6000), bp);
        auto spec = spectrum(analytic(x));
        double pos = 0.0, neg = 0.0;
        const std::size_t n = spec.size();
        for (std::size_t k = 1; k < n / 2; ++k) pos += std::norm(spec[k]);
        for (std::size_t k = n / 2 + 1; k < n; ++k) neg += std::norm(spec[k]);
        CHECK(db((neg + 1e-300) / (pos + neg)) <= -40.0);
    }
}

TEST_CASE("mix shifts tones and preserves energy") {
    IqSignal t = make_cplx_tone(1000, 1.0, 1.0, 6000);
    IqSignal up = mix(t, 400);
    CHECK(dominant_freq(spectrum(up), 6000) == doctest::Approx(1400).epsilon(1e-3));
    CHECK(power(up) == doctest::Approx(power(t)).epsilon(1e-6));

    IqSignal t4 = make_cplx_tone(400, 1.0, 1.0, 6000);
    CHECK(dominant_freq(spectrum(mix(t4, -500)), 6000) == doctest::Approx(-100).epsilon(1e-2));

    IqSignal ident = mix(t, 0);
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(std::abs(ident.samples[i] - t.samples[i]) < 1e-12);
    CHECK_THROWS_AS(mix(t, 3500), ParameterError);
}

TEST_CASE("mix roundtrip property") {
    Rng rng(5);
    std::vector<cplx> v(4096);
    for (auto& x : v) x = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    IqSignal s(v, 6000);
    IqSignal back = mix(mix(s, 713.3), -713.3);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        num += std::norm(back.samples[i] - s.samples[i]);
        den += std::norm(s.samples[i]);
    }
    CHECK(std::sqrt(num / den) < 1e-9);
}

TEST_CASE("resample integer factors preserve tones") {
    // decimate /2 of a 100 Hz tone at 12 kHz -> 100 Hz tone at 6 kHz
    IqSignal t = make_cplx_tone(100, 1.0, 1.0, 12000);
    IqSignal d = resample(t, 6000);
    CHECK(d.sample_rate_hz == 6000);
    CHECK(dominant_freq(spectrum(d), 6000) == doctest::Approx(100).epsilon(1e-2));

    // same-rate request is identity
    IqSignal same = resample(t, 12000);
    CHECK(same.samples.size() == t.samples.size());
    CHECK(std::abs(same.samples[100] - t.samples[100]) == 0.0);

    CHECK_THROWS_AS(resample(t, 5000), ParameterError);

    // interpolation x3 keeps the tone where it was
    IqSignal u = resample(t, 36000);
    CHECK(u.sample_rate_hz == 36000);
    CHECK(dominant_freq(spectrum(u), 36000) == doctest::Approx(100).epsilon(1e-2));
    // amplitude within 1 dB mid-signal
    double mid = std::abs(u.samples[u.size() / 2]);
    CHECK(db(mid * mid) == doctest::Approx(0.0).epsilon(1.0));
}

TEST_CASE("staged 1 MHz to 6 kHz chain preserves tone frequency") {
    // tone at 1 kHz in a 1 MHz stream, decimated /10 /10 then x3 /5
    IqSignal t = make_cplx_tone(1000, 1.0, 0.2, 1'000'000);
    IqSignal a = resample(t, 100000, 2950);
    IqSignal b = resample(a, 10000, 2950);
    IqSignal c = resample(b, 30000, 2950);
    IqSignal d = resample(c, 6000, 2700);
    CHECK(d.sample_rate_hz == 6000);
    CHECK(dominant_freq(spectrum(d), 6000) == doctest::Approx(1000).epsilon(1e-2));
}

TEST_CASE("dsp primitives are deterministic") {
    RealSignal x = make_tone(700, 0.9, 0.5, 6000);
    auto a1 = analytic(x), a2 = analytic(x);
    CHECK(a1.samples == a2.samples);
    FirFilter f1 = design_lowpass(1000, 200, 60, 6000);
    FirFilter f2 = design_lowpass(1000, 200, 60, 6000);
    CHECK(f1.taps == f2.taps);
    CHECK(filter(x, f1).samples == filter(x, f2).samples);
}
