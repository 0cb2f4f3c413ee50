// Evaluation protocols: sliding-window decisions with coarse-label rollup,
// confusion matrices, the duration x n_fft grid, the augmentation ablation
// table, and the SNR sweep. Reports serialize to versioned JSON.
#pragma once

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "omr/classifier.hpp"
#include "omr/dataset.hpp"

namespace omr {

using RollupFn = std::function<std::string(const std::string&)>;

struct EvalReport {
    std::vector<std::string> omp_labels;  // fine classes, sorted
    std::vector<std::string> om_labels;   // coarse classes, sorted
    double omp_accuracy = 0.0;            // percent
    double om_accuracy = 0.0;             // percent
    std::size_t decisions = 0;
    std::vector<double> confusion_omp;  // N x N row-normalized (0 rows for absent classes)
    std::vector<double> confusion_om;   // M x M row-normalized
    std::map<std::string, double> per_class_accuracy;  // omp -> percent
};

// Builds a report from (true, predicted) fine-class index pairs. Kept
// separate from the model so synthetic decision streams can be scored.
inline EvalReport tally_decisions(const std::vector<std::string>& omp_labels,
                                  const std::vector<std::pair<int, int>>& true_pred,
                                  const RollupFn& rollup = [](const std::string& s) {
                                      return rollup_om(s);
                                  }) {
    const int n = static_cast<int>(omp_labels.size());
    if (n == 0) throw ParameterError("tally_decisions: no classes");
    EvalReport rep;
    rep.omp_labels = omp_labels;
    std::vector<std::string> oms;
    std::vector<int> om_of(n);
    for (int i = 0; i < n; ++i) oms.push_back(rollup(omp_labels[i]));
    std::sort(oms.begin(), oms.end());
    oms.erase(std::unique(oms.begin(), oms.end()), oms.end());
    rep.om_labels = oms;
    for (int i = 0; i < n; ++i)
        om_of[i] = static_cast<int>(std::lower_bound(oms.begin(), oms.end(), rollup(omp_labels[i])) -
                                    oms.begin());
    const int m = static_cast<int>(oms.size());

    std::vector<double> counts_omp(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<double> counts_om(static_cast<std::size_t>(m) * m, 0.0);
    std::size_t correct_omp = 0, correct_om = 0;
    for (const auto& [t, p] : true_pred) {
        if (t < 0 || t >= n || p < 0 || p >= n)
            throw ParameterError("tally_decisions: class index out of range");
        counts_omp[static_cast<std::size_t>(t) * n + p] += 1.0;
        counts_om[static_cast<std::size_t>(om_of[t]) * m + om_of[p]] += 1.0;
        if (t == p) ++correct_omp;
        if (om_of[t] == om_of[p]) ++correct_om;
    }
    rep.decisions = true_pred.size();
    if (rep.decisions > 0) {
        rep.omp_accuracy = 100.0 * static_cast<double>(correct_omp) / rep.decisions;
        rep.om_accuracy = 100.0 * static_cast<double>(correct_om) / rep.decisions;
    }

    auto normalize = [](std::vector<double>& mat, int k) {
        for (int r = 0; r < k; ++r) {
            double sum = 0.0;
            for (int c = 0; c < k; ++c) sum += mat[static_cast<std::size_t>(r) * k + c];
            if (sum > 0.0)
                for (int c = 0; c < k; ++c) mat[static_cast<std::size_t>(r) * k + c] /= sum;
        }
    };
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int c = 0; c < n; ++c) row += counts_omp[static_cast<std::size_t>(i) * n + c];
        if (row > 0.0)
            rep.per_class_accuracy[omp_labels[i]] =
                100.0 * counts_omp[static_cast<std::size_t>(i) * n + i] / row;
    }
    normalize(counts_omp, n);
    normalize(counts_om, m);
    rep.confusion_omp = std::move(counts_omp);
    rep.confusion_om = std::move(counts_om);
    return rep;
}

// Windowed evaluation: one decision per window of window_s seconds, slid by
// shift_s. max_windows_per_clip (0 = all) equalizes decision counts across
// models with different window lengths.
inline EvalReport evaluate(Classifier& clf, const std::vector<LabeledSignal>& test_clips,
                           double window_s, double shift_s = 0.5,
                           std::size_t max_windows_per_clip = 0,
                           const RollupFn& rollup = [](const std::string& s) {
                               return rollup_om(s);
                           }) {
    if (window_s != clf.config.window_s)
        throw ParameterError("evaluate: window duration does not match the trained model");
    std::vector<std::pair<int, int>> decisions;
    for (const auto& clip : test_clips) {
        const int t = label_index(clf.class_labels, clip.omp_label);
        auto slices = window_slices(clip.signal.samples.size(), clip.signal.sample_rate_hz,
                                    window_s, shift_s);
        if (max_windows_per_clip > 0 && slices.size() > max_windows_per_clip)
            slices.resize(max_windows_per_clip);
        std::vector<Example> ex;
        for (const auto& w : slices)
            ex.push_back({to_model_input(spectrogram(extract(clip.signal, w), clf.config.spec)), t});
        auto pred = clf.predict(ex);
        for (int p : pred) decisions.emplace_back(t, p);
    }
    return tally_decisions(clf.class_labels, decisions, rollup);
}

// ---- experiment plans ----------------------------------------------------

struct ExperimentPlan {
    std::vector<std::string> subset;  // OMP labels; empty = full catalog
    double train_s = 60.0;
    double val_s = 20.0;
    double test_s = 30.0;
    double shift_s = 0.5;
    std::uint64_t seed = 1;
    int n_seeds = 3;
    TrainConfig train;
    // held-out seed for the impaired (fixed-plan style) test condition
    std::uint64_t test_impair_seed = 0x7e57c0deULL;
};

inline std::vector<LabeledSignal> render_split(const std::string& split, double duration_s,
                                               std::uint64_t seed,
                                               const std::vector<std::string>& subset = {}) {
    std::vector<LabeledSignal> out;
    for (const DatasetEntry& e : build_dataset(split, duration_s, seed, subset))
        out.push_back({e.omp_label, render(e)});
    return out;
}

// Fixed-plan-style impairment of each test clip with a held-out seed.
inline std::vector<LabeledSignal> impair_test_set(const std::vector<LabeledSignal>& clips,
                                                  std::uint64_t impair_seed) {
    std::vector<LabeledSignal> out;
    for (std::size_t i = 0; i < clips.size(); ++i)
        out.push_back({clips[i].omp_label,
                       apply_plan(clips[i].signal, fixed_val_plan(derive_seed(impair_seed, i)))});
    return out;
}

struct ExperimentResult {
    TrainResult train;
    EvalReport report;
};

// One train + impaired-test evaluation under the plan, for a given run seed.
inline ExperimentResult run_experiment(const ExperimentPlan& plan, const TrainConfig& cfg,
                                       std::uint64_t run_seed,
                                       std::size_t max_windows_per_clip = 0) {
    TrainConfig tc = cfg;
    tc.seed = run_seed;
    auto train_clips = render_split("train", plan.train_s, run_seed, plan.subset);
    auto val_clips = render_split("val", plan.val_s, run_seed, plan.subset);
    ExperimentResult res;
    res.train = train_classifier(train_clips, val_clips, tc);
    Classifier clf = Classifier::from_result(res.train, tc);
    auto test_clips = impair_test_set(render_split("test", plan.test_s, run_seed, plan.subset),
                                      plan.test_impair_seed);
    res.report = evaluate(clf, test_clips, tc.window_s, plan.shift_s, max_windows_per_clip);
    return res;
}

// ---- grid ----------------------------------------------------------------

inline const std::vector<double>& grid_durations() {
    static const std::vector<double> v{4.0, 3.0, 2.0, 1.0};
    return v;
}
inline const std::vector<int>& grid_n_ffts() {
    static const std::vector<int> v{256, 128, 64};
    return v;
}

struct GridCell {
    double duration_s = 0.0;
    int n_fft = 0;
    double mean_omp_accuracy = 0.0;  // percent, over seeds
    double spread = 0.0;             // max deviation from the mean
    std::vector<EvalReport> reports;
};

// 12 independently trained cells; every cell scores the same number of
// decisions (capped by the longest window's count).
inline std::vector<GridCell> run_grid(const ExperimentPlan& plan) {
    const double max_dur = *std::max_element(grid_durations().begin(), grid_durations().end());
    const std::size_t cap = static_cast<std::size_t>((plan.test_s - max_dur) / plan.shift_s) + 1;
    std::vector<GridCell> cells;
    for (double dur : grid_durations()) {
        for (int n_fft : grid_n_ffts()) {
            GridCell cell;
            cell.duration_s = dur;
            cell.n_fft = n_fft;
            double sum = 0.0;
            for (int s = 0; s < plan.n_seeds; ++s) {
                TrainConfig tc = plan.train;
                tc.window_s = dur;
                tc.train_shift_s = dur;
                tc.spec.n_fft = n_fft;
                tc.spec.hop = 0;
                ExperimentResult r = run_experiment(
                    plan, tc, derive_seed(plan.seed, hash_string("grid-seed"), s), cap);
                sum += r.report.omp_accuracy;
                cell.reports.push_back(std::move(r.report));
            }
            cell.mean_omp_accuracy = sum / plan.n_seeds;
            for (const auto& r : cell.reports)
                cell.spread = std::max(cell.spread,
                                       std::fabs(r.omp_accuracy - cell.mean_omp_accuracy));
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

// ---- ablation ------------------------------------------------------------

struct AblationRow {
    std::string name;
    EvalReport report;
};

inline const std::vector<std::pair<std::string, OpMask>>& ablation_conditions() {
    static const std::vector<std::pair<std::string, OpMask>> rows = [] {
        std::vector<std::pair<std::string, OpMask>> v;
        v.push_back({"with all", OpMask{}});
        v.push_back({"-Amplify", OpMask{false, true, true, true, true}});
        v.push_back({"-FreqShift", OpMask{true, false, true, true, true}});
        v.push_back({"-SimTone1", OpMask{true, true, false, true, true}});
        v.push_back({"-SimTone1/2", OpMask{true, true, false, false, true}});
        v.push_back({"-Noise", OpMask{true, true, true, true, false}});
        v.push_back({"without all", OpMask{false, false, false, false, false}});
        return v;
    }();
    return rows;
}

// Each row is a full train + impaired-test run with one augmentation
// condition removed from training.
inline std::vector<AblationRow> run_ablation(const ExperimentPlan& plan) {
    std::vector<AblationRow> out;
    for (const auto& [name, mask] : ablation_conditions()) {
        TrainConfig tc = plan.train;
        tc.aug_mask = mask;
        tc.augment = !mask.all_off();  // "without all" trains on clean data only
        out.push_back({name, run_experiment(plan, tc, plan.seed).report});
    }
    return out;
}

// ---- SNR sweep -----------------------------------------------------------

struct SnrPoint {
    double snr_db = 0.0;
    double omp_accuracy = 0.0;
    double om_accuracy = 0.0;
};

inline std::vector<double> default_snr_list() {
    std::vector<double> v;
    for (double s = -6.0; s <= 27.0; s += 3.0) v.push_back(s);
    return v;
}

// Accuracy vs SNR: the standard receive impairment applied to the clean
// test clips with its noise stage pinned to each sweep SNR, one evaluation
// per point. Varying only the noise level of the full impairment keeps
// every point on the same condition family as the impaired test.
inline std::vector<SnrPoint> run_snr_sweep(Classifier& clf,
                                           const std::vector<LabeledSignal>& clean_test,
                                           const std::vector<double>& snr_list,
                                           double shift_s = 0.5, std::uint64_t noise_seed = 99,
                                           std::size_t max_windows_per_clip = 0) {
    std::vector<SnrPoint> out;
    for (std::size_t si = 0; si < snr_list.size(); ++si) {
        std::vector<LabeledSignal> noisy;
        for (std::size_t i = 0; i < clean_test.size(); ++i) {
            AugPlan plan = fixed_val_plan(derive_seed(noise_seed, si, i));
            std::get<Noise>(plan.ops.back()).snr_db = snr_list[si];
            noisy.push_back({clean_test[i].omp_label, apply_plan(clean_test[i].signal, plan)});
        }
        EvalReport rep = evaluate(clf, noisy, clf.config.window_s, shift_s, max_windows_per_clip);
        out.push_back({snr_list[si], rep.omp_accuracy, rep.om_accuracy});
    }
    return out;
}

// ---- report emission -----------------------------------------------------

inline constexpr int kReportSchemaVersion = 1;

inline nlohmann::ordered_json report_to_json(const EvalReport& rep) {
    nlohmann::ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["kind"] = "eval_report";
    j["omp_accuracy"] = rep.omp_accuracy;
    j["om_accuracy"] = rep.om_accuracy;
    j["decisions"] = rep.decisions;
    j["omp_labels"] = rep.omp_labels;
    j["om_labels"] = rep.om_labels;
    j["confusion_omp"] = rep.confusion_omp;
    j["confusion_om"] = rep.confusion_om;
    j["per_class_accuracy"] = rep.per_class_accuracy;
    return j;
}

inline nlohmann::ordered_json grid_to_json(const std::vector<GridCell>& cells) {
    nlohmann::ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["kind"] = "grid_report";
    j["cells"] = nlohmann::ordered_json::array();
    for (const auto& c : cells) {
        nlohmann::ordered_json cj;
        cj["duration_s"] = c.duration_s;
        cj["n_fft"] = c.n_fft;
        cj["mean_omp_accuracy"] = c.mean_omp_accuracy;
        cj["spread"] = c.spread;
        cj["seed_reports"] = nlohmann::ordered_json::array();
        for (const auto& r : c.reports) cj["seed_reports"].push_back(report_to_json(r));
        j["cells"].push_back(std::move(cj));
    }
    return j;
}

inline nlohmann::ordered_json ablation_to_json(const std::vector<AblationRow>& rows) {
    nlohmann::ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["kind"] = "ablation_report";
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json rj;
        rj["name"] = r.name;
        rj["report"] = report_to_json(r.report);
        j["rows"].push_back(std::move(rj));
    }
    return j;
}

inline nlohmann::ordered_json sweep_to_json(const std::vector<SnrPoint>& points) {
    nlohmann::ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["kind"] = "snr_sweep";
    j["points"] = nlohmann::ordered_json::array();
    for (const auto& p : points) {
        nlohmann::ordered_json pj;
        pj["snr_db"] = p.snr_db;
        pj["omp_accuracy"] = p.omp_accuracy;
        pj["om_accuracy"] = p.om_accuracy;
        j["points"].push_back(std::move(pj));
    }
    return j;
}

inline void write_json(const std::string& path, const nlohmann::ordered_json& j) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw FormatError("write_json: cannot open " + path);
    f << j.dump(2) << "\n";
    if (!f) throw FormatError("write_json: write failed for " + path);
}

inline nlohmann::ordered_json read_json(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw FormatError("read_json: cannot open " + path);
    try {
        return nlohmann::ordered_json::parse(f);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("read_json: " + path + ": " + e.what());
    }
}

}  // namespace omr
