#include <map>
#include <set>

#include "doctest.h"
#include "omr/dataset.hpp"
#include "omr/modes.hpp"
#include "omr/synth.hpp"
#include "test_helpers.hpp"

using namespace omr;
using namespace omr::test;

TEST_CASE("catalog cardinalities: 98 OMP over 17 OM") {
    const auto& cat = catalog();
    CHECK(cat.size() == 98);
    std::set<std::string> oms, omps;
    for (const auto& m : cat) {
        oms.insert(m.om_label);
        omps.insert(m.omp_label);
    }
    CHECK(oms.size() == 17);
    CHECK(omps.size() == 98);  // omp labels unique
}

TEST_CASE("catalog rows match the published table") {
    // rebuild each OM's parameter list and compare against the row strings
    std::map<std::string, std::string> rows;
    for (const auto& m : catalog()) {
        auto& r = rows[m.om_label];
        if (!r.empty()) r += ", ";
        r += m.param;
    }
    CHECK(catalog_table().size() == 17);
    for (const auto& [om, params] : catalog_table()) {
        CAPTURE(om);
        CHECK(rows[om] == params);
    }
}

TEST_CASE("catalog entry sanity") {
    for (const auto& m : catalog()) {
        CAPTURE(m.omp_label);
        CHECK(m.nominal_bandwidth_hz <= 3000.0);
        CHECK(m.center_hz - m.nominal_bandwidth_hz / 2 > 0.0);
        CHECK(m.center_hz + m.nominal_bandwidth_hz / 2 <= 3000.0);
        if (m.family == ModeFamily::MFSK || m.family == ModeFamily::IFK ||
            m.family == ModeFamily::THROB) {
            CHECK(m.tones >= 2);
            CHECK(m.tone_spacing_hz > 0.0);
        }
    }
    // repeated calls identical
    CHECK(&catalog() == &catalog());
}

TEST_CASE("Throb OMPs are exactly the six table entries") {
    std::set<std::string> params;
    for (const auto& m : catalog())
        if (m.om_label == "Throb") params.insert(m.param);
    CHECK(params == std::set<std::string>{"BX1", "BX2", "BX4", "OB1", "OB2", "OB4"});
}

TEST_CASE("Olivia 8/250 parameters follow the bandwidth/tones convention") {
    const ModeSpec& m = find_mode("Olivia 8/250");
    CHECK(m.tone_spacing_hz == doctest::Approx(31.25));
    CHECK(m.baud == doctest::Approx(31.25));
    CHECK(m.tones == 8);
}

TEST_CASE("rollup_om maps OMP to its owning OM") {
    CHECK(rollup_om("Olivia 8/250") == "Olivia");
    CHECK(rollup_om("Noise") == "Noise");
    std::set<std::string> oms;
    for (const auto& m : catalog()) oms.insert(rollup_om(m.omp_label));
    CHECK(oms.size() == 17);
    CHECK_THROWS_AS(rollup_om("Olivia 9/999"), ParameterError);
}

TEST_CASE("synthesize is deterministic and respects length contract") {
    const ModeSpec& m = find_mode("BPSK 31");
    Payload p;
    p.seed = 1234;
    RealSignal a = synthesize(m, p, 2.5, 6000);
    RealSignal b = synthesize(m, p, 2.5, 6000);
    CHECK(a.samples == b.samples);
    CHECK(a.size() == 15000);
    CHECK(peak_abs(a) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK_THROWS_AS(synthesize(m, p, -1.0, 6000), ParameterError);
    CHECK_THROWS_AS(synthesize(find_mode("Noise"), p, 1.0, 4000), ParameterError);
}

TEST_CASE("noise mode is flat over 100-2900 Hz") {
    Payload p;
    p.seed = 77;
    RealSignal s = synthesize(find_mode("Noise"), p, 8.0, 6000);
    // Welch-style average of short periodograms
    const std::size_t seg = 1024;
    std::vector<double> psd(seg / 2 + 1, 0.0);
    std::size_t count = 0;
    for (std::size_t off = 0; off + seg <= s.size(); off += seg / 2) {
        std::vector<cplx> a(seg);
        for (std::size_t i = 0; i < seg; ++i) a[i] = cplx(s.samples[off + i], 0.0);
        fft(a, false);
        for (std::size_t k = 0; k <= seg / 2; ++k) psd[k] += std::norm(a[k]);
        ++count;
    }
    double lo = 1e300, hi = 0.0;
    for (std::size_t k = 0; k <= seg / 2; ++k) {
        double f = static_cast<double>(k) * 6000.0 / seg;
        if (f >= 150 && f <= 2850) {  // inside band edges and filter transitions
            lo = std::min(lo, psd[k]);
            hi = std::max(hi, psd[k]);
        }
    }
    CHECK(db(hi / lo) <= 6.0);  // +-3 dB about the mean
}

TEST_CASE("every catalog entry meets the bandwidth and centering contract") {
    for (const ModeSpec& m : catalog()) {
        CAPTURE(m.omp_label);
        Payload p;
        p.seed = derive_seed(1, hash_string(m.omp_label));
        RealSignal s = synthesize(m, p, 4.0, 6000);
        CHECK(s.size() == 24000);
        auto ob = occupied_band(s);
        const double ratio = ob.width() / m.nominal_bandwidth_hz;
        CHECK(ratio >= 0.5);
        CHECK(ratio <= 1.5);
        CHECK(std::fabs(ob.center() - m.center_hz) <= 50.0);
    }
}

TEST_CASE("MFSK-family tone grid: ridge histogram shows exactly `tones` peaks") {
    // spectrogram-ridge oracle: peak frequency of each symbol-centered
    // frame must land on the tone grid, and all tones must occur
    for (const char* label : {"MFSK 16", "Olivia 8/250", "Thor 16", "DominoEx X16"}) {
        CAPTURE(std::string(label));
        const ModeSpec& m = find_mode(label);
        Payload p;
        p.seed = 4242;
        RealSignal s = synthesize(m, p, 30.0, 6000);
        const double f0 = m.center_hz - (m.tones - 1) / 2.0 * m.tone_spacing_hz;
        const std::size_t win = static_cast<std::size_t>(0.8 / m.baud * 6000);
        const std::size_t pad = 1;
        std::size_t fftn = 1;
        while (fftn < win * 32) fftn <<= pad;
        std::set<int> seen;
        int frames = 0, on_grid = 0;
        const int nsym = static_cast<int>(30.0 * m.baud) - 1;
        for (int k = 1; k < nsym; ++k) {
            const double tc = (k + 0.5) / m.baud;
            const std::size_t i0 = static_cast<std::size_t>(tc * 6000 - win / 2.0);
            if (i0 + win >= s.size()) break;
            std::vector<cplx> a(fftn, cplx{});
            for (std::size_t i = 0; i < win; ++i) {
                double h = 0.5 - 0.5 * std::cos(kTwoPi * i / (win - 1));  // Hann
                a[i] = cplx(s.samples[i0 + i] * h, 0.0);
            }
            fft(a, false);
            std::size_t best = 0;
            double bm = -1.0;
            for (std::size_t b = 0; b < fftn / 2; ++b)
                if (std::abs(a[b]) > bm) bm = std::abs(a[best = b]);
            const double f = static_cast<double>(best) * 6000.0 / fftn;
            const double idxf = (f - f0) / m.tone_spacing_hz;
            const int idx = static_cast<int>(std::lround(idxf));
            ++frames;
            if (idx >= 0 && idx < m.tones &&
                std::fabs(f - (f0 + idx * m.tone_spacing_hz)) <= 2.0) {
                ++on_grid;
                seen.insert(idx);
            }
        }
        CHECK(frames > 100);
        CHECK(static_cast<double>(on_grid) / frames >= 0.9);
        CHECK(static_cast<int>(seen.size()) == m.tones);
    }
}

TEST_CASE("build_dataset defaults and split disjointness") {
    auto train = build_dataset("train", kDefaultTrainSeconds, 9);
    auto val = build_dataset("val", kDefaultValSeconds, 9);
    auto test = build_dataset("test", kDefaultTestSeconds, 9);
    CHECK(train.size() == 98);
    CHECK(val.size() == 98);
    CHECK(test.size() == 98);
    CHECK(train[0].duration_s == 180.0);
    CHECK(val[0].duration_s == 60.0);
    CHECK(test[0].duration_s == 75.0);
    for (std::size_t i = 0; i < train.size(); ++i) {
        CHECK(train[i].omp_label == test[i].omp_label);
        CHECK(train[i].seed != test[i].seed);
        CHECK(train[i].seed != val[i].seed);
    }
    // desk-scale override passes straight through
    auto small = build_dataset("train", 60.0, 9);
    CHECK(small[0].duration_s == 60.0);
    CHECK_THROWS_AS(build_dataset("foo", 1.0, 9), ParameterError);
}

TEST_CASE("waveform-distinct subset drops degenerate duplicates") {
    auto distinct = waveform_distinct_omps();
    CHECK(distinct.size() < 98);
    CHECK(distinct.size() >= 60);
    std::set<std::string> groups;
    for (const auto& label : distinct) {
        const ModeSpec& m = find_mode(label);
        if (m.waveform_degenerate_group) {
            CHECK(groups.count(*m.waveform_degenerate_group) == 0);
            groups.insert(*m.waveform_degenerate_group);
        }
    }
}
