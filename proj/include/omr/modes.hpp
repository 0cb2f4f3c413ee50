// Catalog of the 98 operating-mode parameterizations (OMP) across 17
// operating modes (OM). Numeric waveform parameters (baud, tone counts,
// spacings) follow public amateur-radio mode conventions; each non-obvious
// value carries a comment naming the convention it came from.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "omr/signal.hpp"

namespace omr {

enum class ModeFamily {
    CW,
    FSK_RTTY,
    PSK,
    MULTI_CARRIER_PSK,
    MFSK,
    IFK,   // DominoEx / Thor / IFKP
    THROB,
    MT63,
    OFDM_GENERIC,
    NOISE,
};

struct ModeSpec {
    std::string om_label;     // one of 17
    std::string param;        // Table-style parameter string, e.g. "8/250"
    std::string omp_label;    // unique, e.g. "Olivia 8/250"
    ModeFamily family = ModeFamily::NOISE;
    double baud = 0.0;        // symbols/s
    int tones = 0;            // MFSK-family alphabet size, else 0
    double tone_spacing_hz = 0.0;
    int carriers = 1;         // multi-carrier / OFDM
    double center_hz = 1500.0;
    double nominal_bandwidth_hz = 0.0;
    std::optional<std::string> waveform_degenerate_group;
    // per-mode synthesis detail knobs
    int psk_points = 2;       // 2/4/8-ary PSK
    int bit_repeat = 1;       // FEC-variant proxy: repetition factor
    bool reduced_alphabet = false;  // Contestia-style symbol statistics
    double spacing_mult = 1.0;      // Thor x1/x2/x4 spacing multiplier
};

struct Payload {
    std::uint64_t seed = 0;
    std::string charset = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 ";  // valid for CW too
    std::size_t length_chars = 0;  // 0 = unbounded stream
};

namespace detail {

inline ModeSpec psk(const std::string& om, const std::string& param, double baud, int points,
                    int repeat, std::optional<std::string> group) {
    ModeSpec m;
    m.om_label = om;
    m.param = param;
    m.omp_label = om + " " + param;
    m.family = ModeFamily::PSK;
    m.baud = baud;
    m.psk_points = points;
    m.bit_repeat = repeat;
    // occupied bandwidth grows with constellation order (denser phase
    // transitions); factors measured from the synthesizers at 4 s / 6 kHz
    m.nominal_bandwidth_hz = (points == 2 ? 1.2 : points == 4 ? 1.9 : 2.0) * baud;
    m.waveform_degenerate_group = std::move(group);
    return m;
}

inline ModeSpec mfsk_like(const std::string& om, const std::string& param, double baud, int tones,
                          double spacing, std::optional<std::string> group = {}) {
    ModeSpec m;
    m.om_label = om;
    m.param = param;
    m.omp_label = om + " " + param;
    m.family = ModeFamily::MFSK;
    m.baud = baud;
    m.tones = tones;
    m.tone_spacing_hz = spacing;
    m.nominal_bandwidth_hz = tones * spacing;
    m.waveform_degenerate_group = std::move(group);
    return m;
}

}  // namespace detail

// The 17 OMs in Table order with their OMP parameter strings.
inline const std::vector<std::pair<std::string, std::string>>& catalog_table() {
    static const std::vector<std::pair<std::string, std::string>> t = {
        {"BPSK", "31, 63, 63F, 125, 250, 500, 1000"},
        {"QPSK", "31, 63, 125, 250, 500"},
        {"8PSK", "125, 125F, 125FL, 250, 250F, 250FL, 500, 500F, 1000, 1000F, 1200F"},
        {"MC-PSK", "125C12, 250C6, 500C2, 500C4, 800C2, 1000C2"},
        {"PSKR", "125, 250, 500, 1000"},
        {"Olivia", "4/125, 4/250, 8/250, 8/500, 16/500, 16/1000, 32/1000, 64/2000"},
        {"Contestia", "4/125, 4/250, 4/500, 8/250, 8/500, 16/500, 32/1000, 64/2000"},
        {"MFSK", "4, 8, 11, 16, 22, 31, 64, 64L, 128, 128L"},
        {"DominoEx", "EX Micro, EX4, EX5, EX8, X11, X16, X22, X44, X88"},
        {"Thor", "Micro, 100, 11, 16, 22, 25x4, 4, 5, 50x1, 50x2, 8"},
        {"Throb", "BX1, BX2, BX4, OB1, OB2, OB4"},
        {"MT63", "500S, 500L, 1000S, 1000L, 2000S, 2000L"},
        {"OFDM", "500F, 750F, 3500"},
        {"RTTY", "RTTY"},
        {"IFKP", "IFKP"},
        {"CW", "CW"},
        {"Noise", "Noise"},
    };
    return t;
}

inline const std::vector<ModeSpec>& catalog() {
    static const std::vector<ModeSpec> entries = [] {
        using detail::mfsk_like;
        using detail::psk;
        std::vector<ModeSpec> v;

        // PSK baud convention: label 31 -> 31.25 Bd, 63 -> 62.5 Bd (PSK31
        // family doubling series); 125 and up are literal.
        auto psk_baud = [](const std::string& p) {
            if (p.rfind("31", 0) == 0) return 31.25;
            if (p.rfind("63", 0) == 0) return 62.5;
            return std::stod(p);
        };
        // F = FEC (repetition proxy x2), FL = FEC long (x4); same RF
        // parameters as the base mode, so they share a degenerate group.
        auto rep = [](const std::string& p) {
            if (p.size() >= 2 && p.substr(p.size() - 2) == "FL") return 4;
            if (!p.empty() && p.back() == 'F') return 2;
            return 1;
        };
        auto base_num = [](std::string p) {
            while (!p.empty() && (p.back() == 'F' || p.back() == 'L')) p.pop_back();
            return p;
        };

        for (const std::string& p :
             {"31", "63", "63F", "125", "250", "500", "1000"}) {
            std::optional<std::string> g;
            std::string b = base_num(p);
            if (b == "63" || b == "125" || b == "250" || b == "500" || b == "1000")
                g = "psk-bpsk" + b;  // shared with F variants and PSKR
            v.push_back(psk("BPSK", p, psk_baud(p), 2, rep(p), g));
        }
        for (const std::string& p : {"31", "63", "125", "250", "500"})
            v.push_back(psk("QPSK", p, psk_baud(p), 4, 1, std::nullopt));
        for (const std::string& p : {"125", "125F", "125FL", "250", "250F", "250FL", "500",
                                     "500F", "1000", "1000F", "1200F"}) {
            std::string b = base_num(p);
            std::optional<std::string> g;
            if (b != "1200") g = "psk-8psk" + b;
            v.push_back(psk("8PSK", p, psk_baud(p), 8, rep(p), g));
        }
        // MC-PSK label nCk: baud n, k parallel BPSK subcarriers at 1.5x baud
        for (const std::string& p : {"125C12", "250C6", "500C2", "500C4", "800C2", "1000C2"}) {
            auto cpos = p.find('C');
            double baud = std::stod(p.substr(0, cpos));
            int k = std::stoi(p.substr(cpos + 1));
            ModeSpec m = psk("MC-PSK", p, baud, 2, 1, std::nullopt);
            m.family = ModeFamily::MULTI_CARRIER_PSK;
            m.carriers = k;
            m.tone_spacing_hz = 1.5 * baud;
            m.nominal_bandwidth_hz = (k - 1) * 1.5 * baud + 1.2 * baud;
            v.push_back(m);
        }
        // PSKR = BPSK + FEC/interleave (robust); waveform matches BPSK at
        // the same baud, so it lands in the same degenerate group.
        for (const std::string& p : {"125", "250", "500", "1000"})
            v.push_back(psk("PSKR", p, psk_baud(p), 2, 2, "psk-bpsk" + p));

        // Olivia n/bw: n tones, spacing = baud = bw/n (Olivia convention).
        // Contestia shares the waveform grid; it differs only in symbol
        // statistics (capital-letters-only alphabet), hence the shared group.
        for (const std::string& p :
             {"4/125", "4/250", "8/250", "8/500", "16/500", "16/1000", "32/1000", "64/2000"}) {
            auto s = p.find('/');
            int tones = std::stoi(p.substr(0, s));
            double bw = std::stod(p.substr(s + 1));
            v.push_back(mfsk_like("Olivia", p, bw / tones, tones, bw / tones, "olv" + p));
        }
        for (const std::string& p :
             {"4/125", "4/250", "4/500", "8/250", "8/500", "16/500", "32/1000", "64/2000"}) {
            auto s = p.find('/');
            int tones = std::stoi(p.substr(0, s));
            double bw = std::stod(p.substr(s + 1));
            ModeSpec m = mfsk_like("Contestia", p, bw / tones, tones, bw / tones);
            m.reduced_alphabet = true;
            // 4/500 has no Olivia twin in the catalog
            if (p != "4/500") m.waveform_degenerate_group = "olv" + p;
            v.push_back(m);
        }
        // MFSK-n: label is (roughly) the baud; tone counts per fldigi.
        {
            struct Row { const char* p; double baud; int tones; const char* grp; };
            const Row rows[] = {
                {"4", 3.90625, 32, nullptr},    {"8", 7.8125, 32, nullptr},
                {"11", 10.7666, 16, nullptr},   {"16", 15.625, 16, nullptr},
                {"22", 21.5332, 16, nullptr},   {"31", 31.25, 8, nullptr},
                {"64", 62.5, 16, "mfsk64"},     {"64L", 62.5, 16, "mfsk64"},
                {"128", 125.0, 16, "mfsk128"},  {"128L", 125.0, 16, "mfsk128"},
            };
            for (const Row& r : rows) {
                std::optional<std::string> g;
                if (r.grp) g = r.grp;  // L = long interleaver, same waveform
                v.push_back(mfsk_like("MFSK", r.p, r.baud, r.tones, r.baud, g));
            }
        }
        // DominoEx: 18-tone incremental frequency keying; label ~ baud.
        {
            struct Row { const char* p; double baud; };
            const Row rows[] = {
                {"EX Micro", 2.0}, {"EX4", 3.90625}, {"EX5", 5.3833}, {"EX8", 7.8125},
                {"X11", 10.7666},  {"X16", 15.625},  {"X22", 21.5332}, {"X44", 43.0664},
                {"X88", 86.1328},
            };
            for (const Row& r : rows) {
                ModeSpec m = mfsk_like("DominoEx", r.p, r.baud, 18, r.baud);
                m.family = ModeFamily::IFK;
                // at 2 Bd only a handful of symbols fit a short block, so
                // the occupied band rarely reaches the full tone span
                if (r.baud <= 2.0) m.nominal_bandwidth_hz = 30.0;
                v.push_back(m);
            }
        }
        // Thor: 18-tone IFK; x1/x2/x4 suffix = tone-spacing multiplier
        // (fldigi convention for the wide THOR variants).
        {
            struct Row { const char* p; double baud; double mult; };
            const Row rows[] = {
                {"Micro", 2.0, 1.0}, {"100", 100.0, 1.0}, {"11", 10.7666, 1.0},
                {"16", 15.625, 1.0}, {"22", 21.5332, 1.0}, {"25x4", 25.0, 4.0},
                {"4", 3.90625, 1.0}, {"5", 5.3833, 1.0},   {"50x1", 50.0, 1.0},
                {"50x2", 50.0, 2.0}, {"8", 7.8125, 1.0},
            };
            for (const Row& r : rows) {
                ModeSpec m = mfsk_like("Thor", r.p, r.baud, 18, r.baud * r.mult);
                m.family = ModeFamily::IFK;
                m.spacing_mult = r.mult;
                if (r.baud <= 2.0) m.nominal_bandwidth_hz = 30.0;
                v.push_back(m);
            }
        }
        // Throb: tone-pair pulses; OB = classic Throb (9 tones, 8/16 Hz
        // grid), BX = ThrobX (11 tones, 7.8125/15.625 Hz grid).
        {
            struct Row { const char* p; double baud; int tones; double spacing; };
            const Row rows[] = {
                {"BX1", 1.0, 11, 7.8125}, {"BX2", 2.0, 11, 7.8125}, {"BX4", 4.0, 11, 15.625},
                {"OB1", 1.0, 9, 8.0},     {"OB2", 2.0, 9, 8.0},     {"OB4", 4.0, 9, 16.0},
            };
            for (const Row& r : rows) {
                ModeSpec m = mfsk_like("Throb", r.p, r.baud, r.tones, r.spacing);
                m.family = ModeFamily::THROB;
                m.nominal_bandwidth_hz = (r.tones - 1) * r.spacing + 2.0 * r.baud;
                v.push_back(m);
            }
        }
        // MT63: 64 DBPSK carriers across the labeled bandwidth; S/L =
        // short/long interleaver (same waveform -> shared group).
        for (const std::string& p : {"500S", "500L", "1000S", "1000L", "2000S", "2000L"}) {
            double bw = std::stod(p);
            ModeSpec m;
            m.om_label = "MT63";
            m.param = p;
            m.omp_label = "MT63 " + p;
            m.family = ModeFamily::MT63;
            m.carriers = 64;
            m.tone_spacing_hz = bw / 64.0;
            m.baud = bw / 100.0;  // MT63 convention: 5/10/20 Bd per carrier
            m.nominal_bandwidth_hz = bw;
            m.waveform_degenerate_group = "mt63-" + p.substr(0, p.size() - 1);
            v.push_back(m);
        }
        // Generic OFDM: DBPSK subcarriers at 31.25 Bd filling the label bw.
        {
            struct Row { const char* p; int carriers; } rows[] = {
                {"500F", 16}, {"750F", 24}, {"3500", 112},
            };
            for (auto& r : rows) {
                ModeSpec m;
                m.om_label = "OFDM";
                m.param = r.p;
                m.omp_label = std::string("OFDM ") + r.p;
                m.family = ModeFamily::OFDM_GENERIC;
                m.carriers = r.carriers;
                m.baud = 31.25;
                m.tone_spacing_hz = 31.25;
                // "3500" exceeds the 3 kHz channel; carriers outside
                // (50, 2950) Hz are dropped at synthesis, nominal is clamped
                // to what survives the channel.
                m.nominal_bandwidth_hz = std::min(2900.0, r.carriers * 31.25);
                v.push_back(m);
            }
        }
        {
            ModeSpec m;  // RTTY: 45.45 Bd, 170 Hz shift (amateur standard)
            m.om_label = "RTTY";
            m.param = "RTTY";
            m.omp_label = "RTTY";
            m.family = ModeFamily::FSK_RTTY;
            m.baud = 45.45;
            m.tones = 2;
            m.tone_spacing_hz = 170.0;
            m.nominal_bandwidth_hz = 270.0;
            v.push_back(m);
        }
        {
            ModeSpec m;  // IFKP: 33-tone incremental FSK plus, 3.90625 Bd
            m.om_label = "IFKP";
            m.param = "IFKP";
            m.omp_label = "IFKP";
            m.family = ModeFamily::IFK;
            m.baud = 3.90625;
            m.tones = 33;
            m.tone_spacing_hz = 2.0 * 3.90625;  // fldigi IFKP double spacing
            m.nominal_bandwidth_hz = 33 * 2.0 * 3.90625;
            v.push_back(m);
        }
        {
            ModeSpec m;  // CW at 25 WPM (words-per-minute is a choice; the
                         // source material does not fix it)
            m.om_label = "CW";
            m.param = "CW";
            m.omp_label = "CW";
            m.family = ModeFamily::CW;
            m.baud = 25.0 / 1.2;  // dit rate at 25 WPM
            m.nominal_bandwidth_hz = 100.0;  // keying sidebands at 25 WPM
            v.push_back(m);
        }
        {
            ModeSpec m;  // bandlimited noise, its own OM
            m.om_label = "Noise";
            m.param = "Noise";
            m.omp_label = "Noise";
            m.family = ModeFamily::NOISE;
            m.nominal_bandwidth_hz = 2800.0;
            v.push_back(m);
        }
        return v;
    }();
    return entries;
}

inline const ModeSpec& find_mode(const std::string& omp_label) {
    for (const ModeSpec& m : catalog())
        if (m.omp_label == omp_label) return m;
    throw ParameterError("unknown OMP label: " + omp_label);
}

// OMP -> owning OM.
inline const std::string& rollup_om(const std::string& omp_label) {
    return find_mode(omp_label).om_label;
}

}  // namespace omr
