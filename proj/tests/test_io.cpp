#include <filesystem>

#include "doctest.h"
#include "omr/dataset.hpp"
#include "omr/io.hpp"
#include "test_helpers.hpp"

using namespace omr;
using namespace omr::test;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path dir;
    TempDir() : dir(fs::temp_directory_path() / "omr_io_test") {
        fs::create_directories(dir);
    }
    ~TempDir() { fs::remove_all(dir); }
    std::string file(const std::string& name) const { return (dir / name).string(); }
};

}  // namespace

TEST_CASE("WAV roundtrip is within one quantization step and re-read exact") {
    TempDir tmp;
    RealSignal s = make_tone(700, 0.8, 1.0, 6000);
    const std::string path = tmp.file("tone.wav");
    write_wav(path, s);
    RealSignal back = read_wav(path);
    REQUIRE(back.samples.size() == s.samples.size());
    CHECK(back.sample_rate_hz == 6000);
    double worst = 0.0;
    for (std::size_t i = 0; i < s.samples.size(); ++i)
        worst = std::max(worst, std::fabs(back.samples[i] - s.samples[i]));
    CHECK(worst <= 1.0 / 32767.0);  // one LSB

    // 16-bit data survives a second trip exactly
    write_wav(tmp.file("again.wav"), back);
    RealSignal twice = read_wav(tmp.file("again.wav"));
    CHECK(twice.samples == back.samples);
}

TEST_CASE("WAV clipping policy and rate gate") {
    TempDir tmp;
    RealSignal hot = make_tone(500, 1.4, 0.1, 6000);
    CHECK_THROWS_AS(write_wav(tmp.file("hot.wav"), hot), FormatError);
    write_wav(tmp.file("hot.wav"), hot, true);  // allow-clip saturates
    RealSignal back = read_wav(tmp.file("hot.wav"));
    CHECK(peak_abs(back) <= 1.0);

    RealSignal wrong_rate = make_tone(500, 0.5, 0.1, 8000);
    CHECK_THROWS_AS(write_wav(tmp.file("rate.wav"), wrong_rate), FormatError);
}

TEST_CASE("malformed WAV reports the byte offset") {
    TempDir tmp;
    write_wav(tmp.file("ok.wav"), make_tone(500, 0.5, 0.1, 6000));
    std::string bytes;
    {
        std::ifstream f(tmp.file("ok.wav"), std::ios::binary);
        bytes.assign((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    }
    // wrong sample rate in the fmt chunk (offset 24)
    std::string bad = bytes;
    bad[24] = static_cast<char>(0x80);
    bad[25] = static_cast<char>(0x3e);  // 16000 Hz
    std::ofstream(tmp.file("bad.wav"), std::ios::binary) << bad;
    try {
        read_wav(tmp.file("bad.wav"));
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("byte offset") != std::string::npos);
        CHECK(msg.find("6000") != std::string::npos);
    }

    std::string headless = bytes;
    headless[0] = 'X';
    std::ofstream(tmp.file("bad2.wav"), std::ios::binary) << headless;
    CHECK_THROWS_AS(read_wav(tmp.file("bad2.wav")), FormatError);
}

TEST_CASE("raw f32 and I/Q formats round-trip losslessly at float precision") {
    TempDir tmp;
    RealSignal s = make_tone(900, 0.6, 0.5, 6000);
    write_raw_f32(tmp.file("s.f32"), s);
    RealSignal back = read_raw_f32(tmp.file("s.f32"), 6000);
    REQUIRE(back.samples.size() == s.samples.size());
    for (std::size_t i = 0; i < s.samples.size(); ++i)
        CHECK(static_cast<float>(back.samples[i]) == static_cast<float>(s.samples[i]));

    IqSignal iq = make_cplx_tone(1000, 0.4, 0.01, 1'000'000);
    write_iq_f32(tmp.file("w.iq"), iq);
    CHECK(fs::exists(tmp.file("w.iq.json")));
    IqSignal iqb = read_iq_f32(tmp.file("w.iq"));
    CHECK(iqb.sample_rate_hz == 1'000'000);
    REQUIRE(iqb.samples.size() == iq.samples.size());
    for (std::size_t i = 0; i < iq.samples.size(); ++i) {
        CHECK(static_cast<float>(iqb.samples[i].real()) == static_cast<float>(iq.samples[i].real()));
        CHECK(static_cast<float>(iqb.samples[i].imag()) == static_cast<float>(iq.samples[i].imag()));
    }

    // truncated payload vs sidecar is an error
    fs::resize_file(tmp.file("w.iq"), 16);
    CHECK_THROWS_AS(read_iq_f32(tmp.file("w.iq")), FormatError);
}

TEST_CASE("manifest round-trips and enforces referential integrity") {
    TempDir tmp;
    write_wav(tmp.file("a.wav"), make_tone(600, 0.5, 0.2, 6000));
    write_wav(tmp.file("b.wav"), make_tone(800, 0.5, 0.2, 6000));

    Manifest m;
    m.entries.push_back({tmp.file("a.wav"), "CW", "CW", "train", 11, 0.2, 6000, ""});
    m.entries.push_back({tmp.file("b.wav"), "Olivia 8/250", "Olivia", "test", 22, 0.2, 6000, "fp1"});
    const std::string path = tmp.file("manifest.json");
    write_manifest(path, m);
    Manifest back = load_manifest(path);
    REQUIRE(back.entries.size() == 2);
    CHECK(back.entries[0].omp_label == "CW");
    CHECK(back.entries[1].augmentation_fingerprint == "fp1");
    CHECK(back.entries[1].seed == 22);

    // missing file fails fast naming the entry
    Manifest missing = m;
    missing.entries[0].path = tmp.file("gone.wav");
    write_manifest(path, missing);
    CHECK_THROWS_AS(load_manifest(path), FormatError);

    // wrong family label
    Manifest badfam = m;
    badfam.entries[1].om_label = "CW";
    write_manifest(path, badfam);
    CHECK_THROWS_AS(load_manifest(path), FormatError);

    // same seed in two splits
    Manifest dup = m;
    dup.entries[1].seed = 11;
    write_manifest(path, dup);
    CHECK_THROWS_AS(load_manifest(path), FormatError);

    std::ofstream(path) << "{not json";
    CHECK_THROWS_AS(load_manifest(path), FormatError);
}
