// Run configuration: every knob of a training/evaluation run, serialized
// into the run directory so any archived run can be re-executed exactly.
#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "omr/eval.hpp"

namespace omr {

struct RunConfig {
    int schema_version = 1;
    ExperimentPlan plan;  // dataset + impairment + training settings
};

inline nlohmann::ordered_json run_config_to_json(const RunConfig& rc) {
    nlohmann::ordered_json j;
    j["schema_version"] = rc.schema_version;
    const ExperimentPlan& p = rc.plan;
    j["dataset"] = {{"subset", p.subset},
                    {"train_s", p.train_s},
                    {"val_s", p.val_s},
                    {"test_s", p.test_s},
                    {"shift_s", p.shift_s},
                    {"seed", p.seed},
                    {"n_seeds", p.n_seeds},
                    {"test_impair_seed", p.test_impair_seed}};
    const TrainConfig& t = p.train;
    j["train"] = {{"lr", t.lr},
                  {"momentum", t.momentum},
                  {"batch_size", t.batch_size},
                  {"patience", t.patience},
                  {"max_epochs", t.max_epochs},
                  {"window_s", t.window_s},
                  {"train_shift_s", t.train_shift_s},
                  {"n_fft", t.spec.n_fft},
                  {"hop", t.spec.hop},
                  {"floor_db", t.spec.floor_db},
                  {"widths", t.widths},
                  {"augment", t.augment},
                  {"seed", t.seed}};
    const AugRanges& r = t.aug_ranges;
    j["aug_ranges"] = {{"amplify", {r.amplify_lo, r.amplify_hi}},
                       {"freq_shift", {r.freq_shift_lo, r.freq_shift_hi}},
                       {"sim_tone_freq", {r.sim_tone_freq_lo, r.sim_tone_freq_hi}},
                       {"sim_tone_amp", {r.sim_tone_amp_lo, r.sim_tone_amp_hi}},
                       {"noise_snr", {r.noise_snr_lo, r.noise_snr_hi}}};
    const OpMask& m = t.aug_mask;
    j["aug_mask"] = {{"amplify", m.amplify},
                     {"freq_shift", m.freq_shift},
                     {"sim_tone1", m.sim_tone1},
                     {"sim_tone2", m.sim_tone2},
                     {"noise", m.noise}};
    return j;
}

inline RunConfig run_config_from_json(const nlohmann::ordered_json& j) {
    RunConfig rc;
    rc.schema_version = j.at("schema_version").get<int>();
    if (rc.schema_version != 1)
        throw FormatError("run config: unsupported schema_version " +
                          std::to_string(rc.schema_version));
    ExperimentPlan& p = rc.plan;
    const auto& d = j.at("dataset");
    p.subset = d.at("subset").get<std::vector<std::string>>();
    p.train_s = d.at("train_s").get<double>();
    p.val_s = d.at("val_s").get<double>();
    p.test_s = d.at("test_s").get<double>();
    p.shift_s = d.at("shift_s").get<double>();
    p.seed = d.at("seed").get<std::uint64_t>();
    p.n_seeds = d.at("n_seeds").get<int>();
    p.test_impair_seed = d.at("test_impair_seed").get<std::uint64_t>();
    TrainConfig& t = p.train;
    const auto& tj = j.at("train");
    t.lr = tj.at("lr").get<double>();
    t.momentum = tj.at("momentum").get<double>();
    t.batch_size = tj.at("batch_size").get<int>();
    t.patience = tj.at("patience").get<int>();
    t.max_epochs = tj.at("max_epochs").get<int>();
    t.window_s = tj.at("window_s").get<double>();
    t.train_shift_s = tj.at("train_shift_s").get<double>();
    t.spec.n_fft = tj.at("n_fft").get<int>();
    t.spec.hop = tj.at("hop").get<int>();
    t.spec.floor_db = tj.at("floor_db").get<double>();
    t.widths = tj.at("widths").get<std::vector<int>>();
    t.augment = tj.at("augment").get<bool>();
    t.seed = tj.at("seed").get<std::uint64_t>();
    const auto& rj = j.at("aug_ranges");
    AugRanges& r = t.aug_ranges;
    r.amplify_lo = rj.at("amplify")[0].get<double>();
    r.amplify_hi = rj.at("amplify")[1].get<double>();
    r.freq_shift_lo = rj.at("freq_shift")[0].get<double>();
    r.freq_shift_hi = rj.at("freq_shift")[1].get<double>();
    r.sim_tone_freq_lo = rj.at("sim_tone_freq")[0].get<double>();
    r.sim_tone_freq_hi = rj.at("sim_tone_freq")[1].get<double>();
    r.sim_tone_amp_lo = rj.at("sim_tone_amp")[0].get<double>();
    r.sim_tone_amp_hi = rj.at("sim_tone_amp")[1].get<double>();
    r.noise_snr_lo = rj.at("noise_snr")[0].get<double>();
    r.noise_snr_hi = rj.at("noise_snr")[1].get<double>();
    const auto& mj = j.at("aug_mask");
    OpMask& m = t.aug_mask;
    m.amplify = mj.at("amplify").get<bool>();
    m.freq_shift = mj.at("freq_shift").get<bool>();
    m.sim_tone1 = mj.at("sim_tone1").get<bool>();
    m.sim_tone2 = mj.at("sim_tone2").get<bool>();
    m.noise = mj.at("noise").get<bool>();
    return rc;
}

}  // namespace omr
