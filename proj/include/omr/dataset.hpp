// Dataset manifests: one synthesized signal per catalog OMP and split,
// with split-disjoint payload seeds. Rendering is lazy; entries are cheap.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "omr/modes.hpp"
#include "omr/rng.hpp"
#include "omr/synth.hpp"

namespace omr {

inline constexpr double kDefaultTrainSeconds = 180.0;
inline constexpr double kDefaultValSeconds = 60.0;
inline constexpr double kDefaultTestSeconds = 75.0;
inline constexpr int kAfRateHz = 6000;

struct DatasetEntry {
    std::string omp_label;
    std::string om_label;
    std::string split;  // train | val | test
    std::uint64_t seed = 0;
    double duration_s = 0.0;
};

inline std::vector<DatasetEntry> build_dataset(const std::string& split, double duration_per_omp_s,
                                               std::uint64_t seed,
                                               const std::vector<std::string>& omp_subset = {}) {
    if (duration_per_omp_s <= 0.0) throw ParameterError("build_dataset: duration must be positive");
    if (split != "train" && split != "val" && split != "test")
        throw ParameterError("build_dataset: unknown split " + split);
    std::vector<DatasetEntry> out;
    for (const ModeSpec& m : catalog()) {
        if (!omp_subset.empty() &&
            std::find(omp_subset.begin(), omp_subset.end(), m.omp_label) == omp_subset.end())
            continue;
        DatasetEntry e;
        e.omp_label = m.omp_label;
        e.om_label = m.om_label;
        e.split = split;
        e.seed = derive_seed(seed, hash_string(split), hash_string(m.omp_label));
        e.duration_s = duration_per_omp_s;
        out.push_back(std::move(e));
    }
    return out;
}

inline RealSignal render(const DatasetEntry& e, int rate_hz = kAfRateHz) {
    Payload p;
    p.seed = e.seed;
    return synthesize(find_mode(e.omp_label), p, e.duration_s, rate_hz);
}

// One OMP per waveform-degenerate group (ungrouped entries always qualify).
inline std::vector<std::string> waveform_distinct_omps() {
    std::vector<std::string> out, seen;
    for (const ModeSpec& m : catalog()) {
        if (m.waveform_degenerate_group) {
            if (std::find(seen.begin(), seen.end(), *m.waveform_degenerate_group) != seen.end())
                continue;
            seen.push_back(*m.waveform_degenerate_group);
        }
        out.push_back(m.omp_label);
    }
    return out;
}

// Waveform-distinct subset of n classes, spread round-robin across the OM
// families so a small subset still spans the catalog's variety instead of
// exhausting one family first.
inline std::vector<std::string> spread_subset(int n) {
    const auto distinct = waveform_distinct_omps();
    if (n < 1 || n > static_cast<int>(distinct.size()))
        throw ParameterError("spread_subset: need 1..." + std::to_string(distinct.size()) +
                             " classes");
    std::vector<std::string> family_order;
    std::map<std::string, std::vector<std::string>> per_family;
    for (const auto& omp : distinct) {
        const std::string om = rollup_om(omp);
        if (!per_family.count(om)) family_order.push_back(om);
        per_family[om].push_back(omp);
    }
    std::vector<std::string> out;
    for (std::size_t round = 0; static_cast<int>(out.size()) < n; ++round)
        for (const auto& om : family_order) {
            const auto& v = per_family[om];
            if (round < v.size()) {
                out.push_back(v[round]);
                if (static_cast<int>(out.size()) == n) break;
            }
        }
    return out;
}

}  // namespace omr
