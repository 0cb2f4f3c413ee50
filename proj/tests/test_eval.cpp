#include "doctest.h"
#include "omr/eval.hpp"
#include "test_helpers.hpp"

using namespace omr;
using namespace omr::test;

namespace {

const RollupFn identity_rollup = [](const std::string& s) { return s; };

}  // namespace

TEST_CASE("all-correct decisions give 100% at both granularities") {
    std::vector<std::string> labels{"CW", "Olivia 8/250", "RTTY"};
    std::vector<std::pair<int, int>> dec{{0, 0}, {1, 1}, {2, 2}, {1, 1}};
    EvalReport rep = tally_decisions(labels, dec);
    CHECK(rep.omp_accuracy == 100.0);
    CHECK(rep.om_accuracy == 100.0);
    CHECK(rep.decisions == 4);
    CHECK(rep.per_class_accuracy.at("CW") == 100.0);
}

TEST_CASE("rollup merges within-family errors but never splits correct ones") {
    std::vector<std::string> labels{"Olivia 16/500", "Olivia 8/250", "CW"};
    // one within-Olivia confusion, one cross-family error, two correct
    std::vector<std::pair<int, int>> dec{{0, 1}, {1, 1}, {2, 2}, {2, 0}};
    EvalReport rep = tally_decisions(labels, dec);
    CHECK(rep.omp_accuracy == 50.0);
    CHECK(rep.om_accuracy == 75.0);  // the Olivia mix-up becomes correct
    CHECK(rep.om_labels == std::vector<std::string>{"CW", "Olivia"});
    CHECK(rep.om_accuracy >= rep.omp_accuracy);

    // confusion rows sum to 1 (or 0 when a class never appears)
    const int n = 3;
    for (int r = 0; r < n; ++r) {
        double sum = 0.0;
        for (int c = 0; c < n; ++c) sum += rep.confusion_omp[r * n + c];
        CHECK((std::fabs(sum - 1.0) <= 1e-9 || sum == 0.0));
    }
}

TEST_CASE("uniform random decisions land at the class-count chance levels") {
    std::vector<std::string> labels;
    for (const ModeSpec& m : catalog()) labels.push_back(m.omp_label);
    std::sort(labels.begin(), labels.end());

    // expected coarse-level chance from the catalog's family sizes
    std::map<std::string, int> sizes;
    for (const auto& l : labels) sizes[rollup_om(l)]++;
    double om_chance = 0.0;
    for (const auto& [om, k] : sizes) om_chance += static_cast<double>(k) * k / (98.0 * 98.0);

    Rng rng(5150);
    std::vector<std::pair<int, int>> dec;
    for (int i = 0; i < 200000; ++i)
        dec.emplace_back(static_cast<int>(rng.uniform_int(98)),
                         static_cast<int>(rng.uniform_int(98)));
    EvalReport rep = tally_decisions(labels, dec);
    CHECK(rep.omp_accuracy == doctest::Approx(100.0 / 98.0).epsilon(0.15));
    CHECK(rep.om_accuracy == doctest::Approx(100.0 * om_chance).epsilon(0.10));
    CHECK(rep.om_accuracy >= rep.omp_accuracy);
    CHECK(rep.om_labels.size() == 17);
}

TEST_CASE("windowed evaluation, the decision cap, and the SNR sweep") {
    // small real-catalog problem so the default rollup applies
    const std::vector<std::string> subset{"CW", "Noise"};
    auto train_clips = render_split("train", 20.0, 3, subset);
    auto val_clips = render_split("val", 6.0, 3, subset);
    TrainConfig cfg;
    cfg.widths = {8, 8};
    cfg.window_s = 1.0;
    cfg.spec.n_fft = 64;
    cfg.batch_size = 8;
    cfg.lr = 0.01;
    cfg.max_epochs = 12;
    cfg.seed = 17;
    TrainResult tr = train_classifier(train_clips, val_clips, cfg);
    Classifier clf = Classifier::from_result(tr, cfg);

    auto test_clips = render_split("test", 6.0, 3, subset);
    EvalReport rep = evaluate(clf, test_clips, 1.0, 0.5);
    // floor((6 - 1)/0.5) + 1 = 11 windows per clip, two clips
    CHECK(rep.decisions == 22);
    CHECK(rep.om_accuracy >= rep.omp_accuracy);
    CHECK(rep.omp_accuracy >= 90.0);  // two very distinct modes

    EvalReport capped = evaluate(clf, test_clips, 1.0, 0.5, 5);
    CHECK(capped.decisions == 10);

    CHECK_THROWS_AS(evaluate(clf, test_clips, 2.0, 0.5), ParameterError);

    // evaluation is pure: identical reports on repeat
    EvalReport rep2 = evaluate(clf, test_clips, 1.0, 0.5);
    CHECK(report_to_json(rep2).dump() == report_to_json(rep).dump());

    // sweep over the default domain
    auto snrs = default_snr_list();
    REQUIRE(snrs.size() == 12);
    CHECK(snrs.front() == -6.0);
    CHECK(snrs.back() == 27.0);
    auto curve = run_snr_sweep(clf, test_clips, {snrs.front(), snrs.back()}, 0.5, 42);
    REQUIRE(curve.size() == 2);
    CHECK(curve[1].omp_accuracy >= curve[0].omp_accuracy - 2.0);
    auto curve2 = run_snr_sweep(clf, test_clips, {snrs.front(), snrs.back()}, 0.5, 42);
    CHECK(curve2[0].omp_accuracy == curve[0].omp_accuracy);
    CHECK(curve2[1].omp_accuracy == curve[1].omp_accuracy);
}

TEST_CASE("ablation table lists the seven standard conditions") {
    const auto& rows = ablation_conditions();
    REQUIRE(rows.size() == 7);
    std::vector<std::string> names;
    for (const auto& [name, mask] : rows) names.push_back(name);
    CHECK(names == std::vector<std::string>{"with all", "-Amplify", "-FreqShift", "-SimTone1",
                                            "-SimTone1/2", "-Noise", "without all"});
    CHECK(rows[0].second.noise);
    CHECK_FALSE(rows[5].second.noise);
    CHECK(rows[5].second.amplify);
    CHECK(rows[6].second.all_off());
    CHECK_FALSE(rows[4].second.sim_tone1);
    CHECK_FALSE(rows[4].second.sim_tone2);
    CHECK(rows[3].second.sim_tone2);
}

TEST_CASE("grid axes and masked plan sampling") {
    CHECK(grid_durations() == std::vector<double>{4.0, 3.0, 2.0, 1.0});
    CHECK(grid_n_ffts() == std::vector<int>{256, 128, 64});

    // masked ops are skipped while shared draws keep surviving params stable
    AugRanges ranges;
    Rng a(9), b(9);
    AugPlan full = sample_train_plan(ranges, a);
    AugPlan no_noise = sample_train_plan(ranges, b, OpMask{true, true, true, true, false});
    REQUIRE(full.ops.size() == 5);
    REQUIRE(no_noise.ops.size() == 4);
    CHECK(std::get<Amplify>(no_noise.ops[0]).factor == std::get<Amplify>(full.ops[0]).factor);
    CHECK(std::get<SimTone>(no_noise.ops[3]).freq_hz == std::get<SimTone>(full.ops[3]).freq_hz);
}

TEST_CASE("report JSON is stable, versioned, and parses back") {
    std::vector<std::string> labels{"Olivia 16/500", "Olivia 8/250", "CW"};
    std::vector<std::pair<int, int>> dec{{0, 1}, {1, 1}, {2, 2}};
    EvalReport rep = tally_decisions(labels, dec);
    nlohmann::ordered_json j = report_to_json(rep);
    CHECK(j["schema_version"] == 1);
    CHECK(j["kind"] == "eval_report");
    CHECK(j.dump() == report_to_json(rep).dump());  // re-emit identical

    const std::string path = "/tmp/omr_report_test.json";
    write_json(path, j);
    nlohmann::ordered_json back = read_json(path);
    CHECK(back == j);
    write_json(path, j);
    CHECK(read_json(path) == back);
    std::remove(path.c_str());

    // confusion rows from the emitted file sum to 1
    auto conf = back["confusion_omp"].get<std::vector<double>>();
    for (int r = 0; r < 3; ++r) {
        double sum = 0.0;
        for (int c = 0; c < 3; ++c) sum += conf[r * 3 + c];
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }

    std::vector<SnrPoint> pts{{-6.0, 10.0, 20.0}, {27.0, 90.0, 95.0}};
    nlohmann::ordered_json sj = sweep_to_json(pts);
    CHECK(sj["points"].size() == 2);
    CHECK(sj["points"][1]["snr_db"] == 27.0);
    CHECK_THROWS_AS(read_json("/tmp/does_not_exist_omr.json"), FormatError);
}
