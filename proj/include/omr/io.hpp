// File formats: 16-bit PCM WAVE for AF interchange, raw f32 for lossless
// chains, interleaved f32 I/Q pairs with a JSON sidecar for wideband data,
// and JSON dataset manifests with referential integrity checks.
#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "omr/modes.hpp"
#include "omr/signal.hpp"

namespace omr {

namespace detail {

inline void io_put_u16(std::string& b, std::uint16_t v) {
    b.push_back(static_cast<char>(v & 0xff));
    b.push_back(static_cast<char>((v >> 8) & 0xff));
}
inline void io_put_u32(std::string& b, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
inline std::uint16_t io_get_u16(const std::string& b, std::size_t off) {
    return static_cast<std::uint16_t>(static_cast<unsigned char>(b[off]) |
                                      (static_cast<unsigned char>(b[off + 1]) << 8));
}
inline std::uint32_t io_get_u32(const std::string& b, std::size_t off) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[off + i])) << (8 * i);
    return v;
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open " + path);
    return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

inline void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open " + path + " for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw FormatError("write failed for " + path);
}

}  // namespace detail

inline constexpr int kWavRateHz = 6000;

// RIFF WAVE, mono, 16-bit PCM, 6000 Hz. Samples outside [-1, 1] are a
// clipping error unless allow_clip, in which case they saturate.
inline void write_wav(const std::string& path, const RealSignal& s, bool allow_clip = false) {
    if (s.sample_rate_hz != kWavRateHz)
        throw FormatError("write_wav: AF interchange requires 6000 Hz, got " +
                          std::to_string(s.sample_rate_hz));
    std::vector<std::int16_t> pcm(s.samples.size());
    for (std::size_t i = 0; i < pcm.size(); ++i) {
        const double v = s.samples[i];
        if (!allow_clip && (v > 1.0 || v < -1.0))
            throw FormatError("write_wav: sample " + std::to_string(i) +
                              " clips (" + std::to_string(v) + "); pass allow-clip to saturate");
        const double c = std::min(1.0, std::max(-1.0, v));
        pcm[i] = static_cast<std::int16_t>(std::lround(c * 32767.0));
    }
    const std::uint32_t data_bytes = static_cast<std::uint32_t>(pcm.size() * 2);
    std::string b;
    b.reserve(44 + data_bytes);
    b.append("RIFF");
    detail::io_put_u32(b, 36 + data_bytes);
    b.append("WAVE");
    b.append("fmt ");
    detail::io_put_u32(b, 16);
    detail::io_put_u16(b, 1);  // PCM
    detail::io_put_u16(b, 1);  // mono
    detail::io_put_u32(b, kWavRateHz);
    detail::io_put_u32(b, kWavRateHz * 2);  // byte rate
    detail::io_put_u16(b, 2);               // block align
    detail::io_put_u16(b, 16);              // bits per sample
    b.append("data");
    detail::io_put_u32(b, data_bytes);
    for (std::int16_t v : pcm)
        detail::io_put_u16(b, static_cast<std::uint16_t>(v));
    detail::write_file(path, b);
}

inline RealSignal read_wav(const std::string& path) {
    const std::string b = detail::read_file(path);
    auto fail = [&](std::size_t off, const std::string& what) -> void {
        throw FormatError(path + ": " + what + " at byte offset " + std::to_string(off));
    };
    if (b.size() < 12) fail(0, "truncated RIFF header");
    if (b.compare(0, 4, "RIFF") != 0) fail(0, "missing RIFF magic");
    if (b.compare(8, 4, "WAVE") != 0) fail(8, "missing WAVE form type");

    // chunk walk
    std::size_t off = 12;
    bool have_fmt = false;
    std::size_t data_off = 0, data_len = 0;
    while (off + 8 <= b.size()) {
        const std::string id = b.substr(off, 4);
        const std::uint32_t len = detail::io_get_u32(b, off + 4);
        if (off + 8 + len > b.size()) fail(off, "chunk '" + id + "' overruns file");
        if (id == "fmt ") {
            if (len < 16) fail(off, "fmt chunk too short");
            const std::uint16_t fmt = detail::io_get_u16(b, off + 8);
            const std::uint16_t ch = detail::io_get_u16(b, off + 10);
            const std::uint32_t rate = detail::io_get_u32(b, off + 12);
            const std::uint16_t bits = detail::io_get_u16(b, off + 22);
            if (fmt != 1) fail(off + 8, "not PCM");
            if (ch != 1) fail(off + 10, "not mono");
            if (rate != kWavRateHz)
                fail(off + 12, "sample rate " + std::to_string(rate) + ", expected 6000 Hz");
            if (bits != 16) fail(off + 22, "not 16-bit");
            have_fmt = true;
        } else if (id == "data") {
            data_off = off + 8;
            data_len = len;
        }
        off += 8 + len + (len % 2);
    }
    if (!have_fmt) fail(12, "no fmt chunk");
    if (data_off == 0) fail(12, "no data chunk");
    if (data_len % 2 != 0) fail(data_off, "odd data length for 16-bit samples");
    std::vector<double> out(data_len / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const std::int16_t v =
            static_cast<std::int16_t>(detail::io_get_u16(b, data_off + 2 * i));
        out[i] = static_cast<double>(v) / 32767.0;
    }
    return RealSignal(std::move(out), kWavRateHz);
}

// Raw little-endian f32, lossless for float-precision chains.
inline void write_raw_f32(const std::string& path, const RealSignal& s) {
    std::string b;
    b.reserve(s.samples.size() * 4);
    for (double d : s.samples) {
        const float f = static_cast<float>(d);
        std::uint32_t bits;
        std::memcpy(&bits, &f, 4);
        detail::io_put_u32(b, bits);
    }
    detail::write_file(path, b);
}

inline RealSignal read_raw_f32(const std::string& path, int rate_hz) {
    const std::string b = detail::read_file(path);
    if (b.size() % 4 != 0)
        throw FormatError(path + ": size not a multiple of 4 at byte offset " +
                          std::to_string(b.size() - b.size() % 4));
    std::vector<double> out(b.size() / 4);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const std::uint32_t bits = detail::io_get_u32(b, 4 * i);
        float f;
        std::memcpy(&f, &bits, 4);
        out[i] = static_cast<double>(f);
    }
    return RealSignal(std::move(out), rate_hz);
}

// Wideband I/Q: interleaved little-endian f32 pairs plus a JSON sidecar
// (`<path>.json`) carrying rate and sample count. WAVE is rejected for this
// path by construction (distinct format + required sidecar).
inline void write_iq_f32(const std::string& path, const IqSignal& s) {
    std::string b;
    b.reserve(s.samples.size() * 8);
    for (const cplx& v : s.samples) {
        for (double d : {v.real(), v.imag()}) {
            const float f = static_cast<float>(d);
            std::uint32_t bits;
            std::memcpy(&bits, &f, 4);
            detail::io_put_u32(b, bits);
        }
    }
    detail::write_file(path, b);
    nlohmann::ordered_json side;
    side["schema_version"] = 1;
    side["format"] = "iq-f32le";
    side["sample_rate_hz"] = s.sample_rate_hz;
    side["samples"] = s.samples.size();
    detail::write_file(path + ".json", side.dump(2) + "\n");
}

inline IqSignal read_iq_f32(const std::string& path) {
    nlohmann::ordered_json side;
    try {
        side = nlohmann::ordered_json::parse(detail::read_file(path + ".json"));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path + ".json: " + e.what());
    }
    if (side.value("format", "") != "iq-f32le")
        throw FormatError(path + ".json: sidecar format is not iq-f32le");
    const int rate = side.at("sample_rate_hz").get<int>();
    const std::size_t n = side.at("samples").get<std::size_t>();
    const std::string b = detail::read_file(path);
    if (b.size() != n * 8)
        throw FormatError(path + ": expected " + std::to_string(n * 8) + " bytes, found " +
                          std::to_string(b.size()) + " at byte offset 0");
    std::vector<cplx> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        float re, im;
        std::uint32_t bits = detail::io_get_u32(b, 8 * i);
        std::memcpy(&re, &bits, 4);
        bits = detail::io_get_u32(b, 8 * i + 4);
        std::memcpy(&im, &bits, 4);
        out[i] = cplx(re, im);
    }
    return IqSignal(std::move(out), rate);
}

// ---- dataset manifest ----------------------------------------------------

struct ManifestEntry {
    std::string path;
    std::string omp_label;
    std::string om_label;
    std::string split;
    std::uint64_t seed = 0;
    double duration_s = 0.0;
    int sample_rate_hz = kWavRateHz;
    std::string augmentation_fingerprint;  // empty = clean
};

struct Manifest {
    int schema_version = 1;
    std::vector<ManifestEntry> entries;
};

inline void write_manifest(const std::string& path, const Manifest& m) {
    nlohmann::ordered_json j;
    j["schema_version"] = m.schema_version;
    j["entries"] = nlohmann::ordered_json::array();
    for (const auto& e : m.entries) {
        nlohmann::ordered_json ej;
        ej["path"] = e.path;
        ej["omp_label"] = e.omp_label;
        ej["om_label"] = e.om_label;
        ej["split"] = e.split;
        ej["seed"] = e.seed;
        ej["duration_s"] = e.duration_s;
        ej["sample_rate_hz"] = e.sample_rate_hz;
        ej["augmentation_fingerprint"] = e.augmentation_fingerprint;
        j["entries"].push_back(std::move(ej));
    }
    detail::write_file(path, j.dump(2) + "\n");
}

// Load with referential integrity: every referenced file must exist, labels
// must match the catalog, and a payload seed may not appear in two splits.
inline Manifest load_manifest(const std::string& path, bool check_paths = true) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(detail::read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path + ": " + e.what());
    }
    Manifest m;
    m.schema_version = j.at("schema_version").get<int>();
    if (m.schema_version != 1)
        throw FormatError(path + ": unsupported manifest schema_version " +
                          std::to_string(m.schema_version));
    std::map<std::uint64_t, std::string> seed_split;
    for (const auto& ej : j.at("entries")) {
        ManifestEntry e;
        e.path = ej.at("path").get<std::string>();
        e.omp_label = ej.at("omp_label").get<std::string>();
        e.om_label = ej.at("om_label").get<std::string>();
        e.split = ej.at("split").get<std::string>();
        e.seed = ej.at("seed").get<std::uint64_t>();
        e.duration_s = ej.at("duration_s").get<double>();
        e.sample_rate_hz = ej.at("sample_rate_hz").get<int>();
        e.augmentation_fingerprint = ej.value("augmentation_fingerprint", "");
        if (rollup_om(e.omp_label) != e.om_label)
            throw FormatError(path + ": entry '" + e.path + "' labels " + e.omp_label +
                              " under wrong family " + e.om_label);
        if (check_paths && !std::filesystem::exists(e.path))
            throw FormatError(path + ": missing referenced file " + e.path);
        auto [it, inserted] = seed_split.try_emplace(e.seed, e.split);
        if (!inserted && it->second != e.split)
            throw FormatError(path + ": seed " + std::to_string(e.seed) +
                              " appears in splits " + it->second + " and " + e.split);
        m.entries.push_back(std::move(e));
    }
    return m;
}

}  // namespace omr
