// Command-line front end for the mode-classification toolkit: synthesis,
// impairment, TX/RX simulation, feature extraction, training, and the
// evaluation studies. Every run directory archives its full configuration
// so runs can be re-executed byte-identically.
#include <filesystem>
#include <iostream>
#include <set>

#include "CLI11.hpp"
#include "omr/eval.hpp"
#include "omr/io.hpp"
#include "omr/rx_chain.hpp"
#include "omr/runconfig.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::vector<std::string> resolve_subset(const std::vector<std::string>& subset, int distinct_n) {
    if (!subset.empty()) {
        for (const auto& l : subset) omr::find_mode(l);  // validate
        return subset;
    }
    if (distinct_n > 0) return omr::spread_subset(distinct_n);
    return {};  // full catalog
}

void write_run_dir(const std::string& dir, const omr::RunConfig& rc,
                   const omr::TrainResult& result) {
    fs::create_directories(dir);
    omr::write_json(dir + "/config.json", omr::run_config_to_json(rc));
    {
        std::ofstream f(dir + "/weights.bin", std::ios::binary);
        f.write(result.weights_blob.data(),
                static_cast<std::streamsize>(result.weights_blob.size()));
    }
    ordered_json hist;
    hist["schema_version"] = omr::kReportSchemaVersion;
    hist["kind"] = "train_history";
    hist["class_labels"] = result.class_labels;
    hist["best_epoch"] = result.best_epoch;
    hist["best_val_accuracy"] = result.best_val_accuracy;
    hist["epochs"] = ordered_json::array();
    for (const auto& h : result.history)
        hist["epochs"].push_back({{"epoch", h.epoch},
                                  {"epoch_seed", h.epoch_seed},
                                  {"train_loss", h.train_loss},
                                  {"val_accuracy", h.val_accuracy}});
    omr::write_json(dir + "/history.json", hist);
}

omr::TrainResult run_training(const omr::RunConfig& rc) {
    const auto& plan = rc.plan;
    auto train_clips = omr::render_split("train", plan.train_s, plan.train.seed, plan.subset);
    auto val_clips = omr::render_split("val", plan.val_s, plan.train.seed, plan.subset);
    return omr::train_classifier(train_clips, val_clips, plan.train);
}

omr::Classifier load_run(const std::string& dir, omr::RunConfig* rc_out = nullptr) {
    omr::RunConfig rc = omr::run_config_from_json(omr::read_json(dir + "/config.json"));
    ordered_json hist = omr::read_json(dir + "/history.json");
    omr::Classifier clf;
    clf.class_labels = hist.at("class_labels").get<std::vector<std::string>>();
    clf.config = rc.plan.train;
    clf.net = omr::make_classifier(3, static_cast<int>(clf.class_labels.size()),
                                   clf.config.widths, 0);
    auto params = clf.net.params();
    omr::load_weights(dir + "/weights.bin", params);
    if (rc_out) *rc_out = rc;
    return clf;
}

void add_plan_options(CLI::App* cmd, omr::ExperimentPlan& plan,
                      std::vector<std::string>& subset, int& distinct_n) {
    cmd->add_option("--subset", subset, "explicit OMP labels to include");
    cmd->add_option("--classes", distinct_n, "N waveform-distinct OMPs spread across the OM families");
    cmd->add_option("--train-seconds", plan.train_s, "training audio per class");
    cmd->add_option("--val-seconds", plan.val_s, "validation audio per class");
    cmd->add_option("--test-seconds", plan.test_s, "test audio per class");
    cmd->add_option("--shift", plan.shift_s, "evaluation window shift in seconds");
    cmd->add_option("--impair-seed", plan.test_impair_seed, "held-out impairment seed");
    cmd->add_option("--seed", plan.seed, "global experiment seed");
}

void add_train_options(CLI::App* cmd, omr::TrainConfig& tc) {
    cmd->add_option("--lr", tc.lr, "SGD learning rate");
    cmd->add_option("--momentum", tc.momentum, "SGD momentum");
    cmd->add_option("--batch", tc.batch_size, "minibatch size");
    cmd->add_option("--patience", tc.patience, "early-stopping patience");
    cmd->add_option("--epochs", tc.max_epochs, "maximum epochs");
    cmd->add_option("--window", tc.window_s, "classification window seconds");
    cmd->add_option("--n-fft", tc.spec.n_fft, "spectrogram FFT size");
    cmd->add_option("--widths", tc.widths, "convolution block channel widths");
    cmd->add_flag_callback("--no-augment", [&tc] { tc.augment = false; },
                           "train on clean data only");
}

int real_main(int argc, char** argv) {
    CLI::App app{"amateur-radio digital-mode synthesis and classification toolkit"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "machine-readable output");

    // ---- catalog ----
    auto* c_catalog = app.add_subcommand("catalog", "list operating modes and parameters");
    bool counts_only = false;
    c_catalog->add_flag("--counts", counts_only, "print only the class counts");
    std::uint64_t catalog_seed = 1;
    c_catalog->add_option("--seed", catalog_seed, "unused; accepted for uniformity");
    c_catalog->callback([&] {
        const auto& cat = omr::catalog();
        std::set<std::string> oms;
        for (const auto& m : cat) oms.insert(m.om_label);
        if (counts_only) {
            std::cout << cat.size() << " OMP / " << oms.size() << " OM\n";
            return;
        }
        if (as_json) {
            ordered_json j = ordered_json::array();
            for (const auto& m : cat)
                j.push_back({{"omp", m.omp_label},
                             {"om", m.om_label},
                             {"param", m.param},
                             {"baud", m.baud},
                             {"center_hz", m.center_hz},
                             {"nominal_bandwidth_hz", m.nominal_bandwidth_hz}});
            std::cout << j.dump(2) << "\n";
            return;
        }
        for (const auto& [om, params] : omr::catalog_table())
            std::cout << om << ": " << params << "\n";
    });

    // ---- gen ----
    auto* c_gen = app.add_subcommand("gen", "synthesize a labeled dataset split");
    std::string gen_split = "train", gen_out = "data";
    double gen_duration = -1.0;
    std::uint64_t gen_seed = 1;
    std::vector<std::string> gen_subset;
    int gen_distinct = 0;
    c_gen->add_option("--split", gen_split, "train | val | test");
    c_gen->add_option("--duration", gen_duration, "seconds per OMP (default per split)");
    c_gen->add_option("--seed", gen_seed, "dataset seed");
    c_gen->add_option("--out", gen_out, "output directory");
    c_gen->add_option("--subset", gen_subset, "explicit OMP labels");
    c_gen->add_option("--classes", gen_distinct, "N waveform-distinct OMPs spread across the OM families");
    c_gen->callback([&] {
        if (gen_duration <= 0.0)
            gen_duration = gen_split == "train" ? omr::kDefaultTrainSeconds
                           : gen_split == "val" ? omr::kDefaultValSeconds
                                                : omr::kDefaultTestSeconds;
        auto subset = resolve_subset(gen_subset, gen_distinct);
        auto entries = omr::build_dataset(gen_split, gen_duration, gen_seed, subset);
        fs::create_directories(gen_out);
        omr::Manifest man;
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const auto& e = entries[i];
            const std::string path =
                gen_out + "/" + gen_split + "_" + std::to_string(i) + ".wav";
            omr::write_wav(path, omr::render(e));
            man.entries.push_back({path, e.omp_label, e.om_label, e.split, e.seed, e.duration_s,
                                   omr::kAfRateHz, ""});
        }
        omr::write_manifest(gen_out + "/manifest_" + gen_split + ".json", man);
        std::cout << "wrote " << man.entries.size() << " entries of " << gen_duration
                  << " s to " << gen_out << "\n";
    });

    // ---- augment ----
    auto* c_aug = app.add_subcommand("augment", "apply channel impairments to an AF file");
    std::string aug_in, aug_out;
    std::uint64_t aug_seed = 1;
    bool aug_sampled = false;
    c_aug->add_option("--in", aug_in, "input WAV")->required();
    c_aug->add_option("--out", aug_out, "output WAV")->required();
    c_aug->add_option("--seed", aug_seed, "plan seed");
    c_aug->add_flag("--sample", aug_sampled, "sample a training plan instead of the fixed one");
    c_aug->callback([&] {
        omr::RealSignal s = omr::read_wav(aug_in);
        omr::AugPlan plan;
        if (aug_sampled) {
            omr::Rng rng(aug_seed);
            plan = omr::sample_train_plan(omr::AugRanges{}, rng);
        } else {
            plan = omr::fixed_val_plan(aug_seed);
        }
        std::vector<std::string> trace;
        omr::RealSignal out = omr::apply_plan(s, plan, &trace);
        omr::write_wav(aug_out, out, true);
        if (as_json) {
            ordered_json j;
            j["ops"] = trace;
            j["seed"] = aug_seed;
            std::cout << j.dump(2) << "\n";
        } else {
            for (const auto& t : trace) std::cout << t << " ";
            std::cout << "-> " << aug_out << "\n";
        }
    });

    // ---- txsim ----
    auto* c_tx = app.add_subcommand("txsim", "USB-modulate AF into wideband I/Q");
    std::string tx_in, tx_out;
    c_tx->add_option("--in", tx_in, "input AF WAV")->required();
    c_tx->add_option("--out", tx_out, "output I/Q file (f32-pair + sidecar)")->required();
    c_tx->callback([&] {
        omr::write_iq_f32(tx_out, omr::usb_modulate(omr::read_wav(tx_in)));
        std::cout << "wrote " << tx_out << "\n";
    });

    // ---- rx ----
    auto* c_rx = app.add_subcommand("rx", "channelize and USB-demodulate wideband I/Q");
    std::string rx_in, rx_out;
    c_rx->add_option("--in", rx_in, "input I/Q file")->required();
    c_rx->add_option("--out", rx_out, "output AF WAV")->required();
    c_rx->callback([&] {
        omr::IqSignal wb = omr::read_iq_f32(rx_in);
        omr::write_wav(rx_out, omr::usb_demodulate(omr::channelize(wb)), true);
        std::cout << "wrote " << rx_out << "\n";
    });

    // ---- featurize ----
    auto* c_feat = app.add_subcommand("featurize", "compute a spectrogram from an AF file");
    std::string feat_in, feat_out;
    omr::SpectrogramConfig feat_cfg;
    c_feat->add_option("--in", feat_in, "input WAV")->required();
    c_feat->add_option("--out", feat_out, "output JSON")->required();
    c_feat->add_option("--n-fft", feat_cfg.n_fft, "FFT size");
    c_feat->add_option("--hop", feat_cfg.hop, "hop size (default n_fft/2)");
    c_feat->callback([&] {
        omr::Spectrogram sg = omr::spectrogram(omr::read_wav(feat_in), feat_cfg);
        ordered_json j;
        j["schema_version"] = omr::kReportSchemaVersion;
        j["kind"] = "spectrogram";
        j["n_fft"] = feat_cfg.n_fft;
        j["freq_bins"] = sg.freq_bins;
        j["frames"] = sg.frames;
        j["values_db"] = sg.values;
        omr::write_json(feat_out, j);
        std::cout << sg.freq_bins << " x " << sg.frames << " -> " << feat_out << "\n";
    });

    // ---- train ----
    auto* c_train = app.add_subcommand("train", "train a classifier into a run directory");
    std::string train_out = "run";
    std::string repro_dir;
    omr::ExperimentPlan train_plan;
    std::vector<std::string> train_subset;
    int train_distinct = 0;
    c_train->add_option("--out", train_out, "run directory");
    c_train->add_option("--repro", repro_dir, "re-execute an archived run directory");
    add_plan_options(c_train, train_plan, train_subset, train_distinct);
    add_train_options(c_train, train_plan.train);
    c_train->callback([&] {
        omr::RunConfig rc;
        std::string out_dir = train_out;
        if (!repro_dir.empty()) {
            rc = omr::run_config_from_json(omr::read_json(repro_dir + "/config.json"));
            out_dir = repro_dir;
        } else {
            rc.plan = train_plan;
            rc.plan.subset = resolve_subset(train_subset, train_distinct);
            rc.plan.train.seed = rc.plan.seed;
        }
        omr::TrainResult result = run_training(rc);
        write_run_dir(out_dir, rc, result);
        std::cout << "best epoch " << result.best_epoch << ", val accuracy "
                  << 100.0 * result.best_val_accuracy << "% -> " << out_dir << "\n";
    });

    // ---- eval ----
    auto* c_eval = app.add_subcommand("eval", "evaluate an archived run on a test split");
    std::string eval_run = "run";
    double eval_duration = -1.0, eval_shift = 0.5, eval_test_s = -1.0;
    bool eval_clean = false;
    std::uint64_t eval_seed = 0;
    c_eval->add_option("--run", eval_run, "run directory");
    c_eval->add_option("--duration", eval_duration, "window seconds (must match the model)");
    c_eval->add_option("--shift", eval_shift, "window shift seconds");
    c_eval->add_option("--test-seconds", eval_test_s, "test audio per class");
    c_eval->add_option("--seed", eval_seed, "override dataset seed");
    c_eval->add_flag("--clean", eval_clean, "skip the impairment plan on the test set");
    c_eval->callback([&] {
        omr::RunConfig rc;
        omr::Classifier clf = load_run(eval_run, &rc);
        if (eval_duration <= 0.0) eval_duration = clf.config.window_s;
        if (eval_test_s <= 0.0) eval_test_s = rc.plan.test_s;
        const std::uint64_t seed = eval_seed ? eval_seed : rc.plan.seed;
        auto test_clips = omr::render_split("test", eval_test_s, seed, rc.plan.subset);
        if (!eval_clean) test_clips = omr::impair_test_set(test_clips, rc.plan.test_impair_seed);
        omr::EvalReport rep = omr::evaluate(clf, test_clips, eval_duration, eval_shift);
        omr::write_json(eval_run + "/report.json", omr::report_to_json(rep));
        const std::size_t per_class = rep.decisions / test_clips.size();
        if (as_json) {
            std::cout << omr::report_to_json(rep).dump(2) << "\n";
        } else {
            std::cout << per_class << " windows/OMP, " << rep.decisions << " decisions\n"
                      << "OMP accuracy " << rep.omp_accuracy << "%\n"
                      << "OM accuracy " << rep.om_accuracy << "%\n";
        }
    });

    // ---- grid ----
    auto* c_grid = app.add_subcommand("grid", "duration x n_fft study (12 trained cells)");
    std::string grid_out = "grid_run";
    omr::ExperimentPlan grid_plan;
    std::vector<std::string> grid_subset;
    int grid_distinct = 0;
    c_grid->add_option("--out", grid_out, "output directory");
    c_grid->add_option("--seeds", grid_plan.n_seeds, "seeds per cell");
    add_plan_options(c_grid, grid_plan, grid_subset, grid_distinct);
    add_train_options(c_grid, grid_plan.train);
    c_grid->callback([&] {
        grid_plan.subset = resolve_subset(grid_subset, grid_distinct);
        auto cells = omr::run_grid(grid_plan);
        fs::create_directories(grid_out);
        omr::RunConfig rc;
        rc.plan = grid_plan;
        omr::write_json(grid_out + "/config.json", omr::run_config_to_json(rc));
        omr::write_json(grid_out + "/grid.json", omr::grid_to_json(cells));
        for (const auto& c : cells)
            std::cout << c.duration_s << " s / n_fft " << c.n_fft << ": "
                      << c.mean_omp_accuracy << "% +- " << c.spread << "\n";
    });

    // ---- snr-sweep ----
    auto* c_snr = app.add_subcommand("snr-sweep", "accuracy vs SNR for an archived run");
    std::string snr_run = "run";
    double snr_from = -6.0, snr_to = 27.0, snr_step = 3.0, snr_test_s = -1.0;
    std::uint64_t snr_noise_seed = 99;
    c_snr->add_option("--run", snr_run, "run directory");
    c_snr->add_option("--from", snr_from, "lowest SNR dB");
    c_snr->add_option("--to", snr_to, "highest SNR dB");
    c_snr->add_option("--step", snr_step, "SNR step dB");
    c_snr->add_option("--test-seconds", snr_test_s, "test audio per class");
    c_snr->add_option("--seed", snr_noise_seed, "noise seed");
    c_snr->callback([&] {
        omr::RunConfig rc;
        omr::Classifier clf = load_run(snr_run, &rc);
        if (snr_test_s <= 0.0) snr_test_s = rc.plan.test_s;
        auto clean = omr::render_split("test", snr_test_s, rc.plan.seed, rc.plan.subset);
        std::vector<double> snrs;
        for (double s = snr_from; s <= snr_to + 1e-9; s += snr_step) snrs.push_back(s);
        auto curve = omr::run_snr_sweep(clf, clean, snrs, rc.plan.shift_s, snr_noise_seed);
        omr::write_json(snr_run + "/sweep.json", omr::sweep_to_json(curve));
        for (const auto& p : curve)
            std::cout << p.snr_db << " dB: OMP " << p.omp_accuracy << "%, OM "
                      << p.om_accuracy << "%\n";
    });

    // ---- ablate ----
    auto* c_abl = app.add_subcommand("ablate", "augmentation ablation (7 trained rows)");
    std::string abl_out = "ablation_run";
    omr::ExperimentPlan abl_plan;
    std::vector<std::string> abl_subset;
    int abl_distinct = 0;
    c_abl->add_option("--out", abl_out, "output directory");
    add_plan_options(c_abl, abl_plan, abl_subset, abl_distinct);
    add_train_options(c_abl, abl_plan.train);
    c_abl->callback([&] {
        abl_plan.subset = resolve_subset(abl_subset, abl_distinct);
        auto rows = omr::run_ablation(abl_plan);
        fs::create_directories(abl_out);
        omr::RunConfig rc;
        rc.plan = abl_plan;
        omr::write_json(abl_out + "/config.json", omr::run_config_to_json(rc));
        omr::write_json(abl_out + "/ablation.json", omr::ablation_to_json(rows));
        for (const auto& r : rows)
            std::cout << r.name << ": OMP " << r.report.omp_accuracy << "%\n";
    });

    // ---- report ----
    auto* c_rep = app.add_subcommand("report", "render an emitted JSON report");
    std::string rep_in, rep_format = "table", rep_out;
    c_rep->add_option("--in", rep_in, "report JSON file")->required();
    c_rep->add_option("--format", rep_format, "table | plot");
    c_rep->add_option("--out", rep_out, "write plot-ready CSV here instead of stdout");
    c_rep->callback([&] {
        ordered_json j = omr::read_json(rep_in);
        const std::string kind = j.value("kind", "");
        std::ostringstream csv;
        if (kind == "eval_report") {
            if (rep_format == "table") {
                std::cout << "decisions " << j["decisions"] << "\nOMP accuracy "
                          << j["omp_accuracy"] << "%\nOM accuracy " << j["om_accuracy"] << "%\n";
                return;
            }
            csv << "true_label,pred_label,fraction\n";
            auto labels = j["omp_labels"].get<std::vector<std::string>>();
            auto conf = j["confusion_omp"].get<std::vector<double>>();
            const std::size_t n = labels.size();
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t c = 0; c < n; ++c)
                    csv << labels[r] << "," << labels[c] << "," << conf[r * n + c] << "\n";
        } else if (kind == "snr_sweep") {
            csv << "snr_db,omp_accuracy,om_accuracy\n";
            for (const auto& p : j["points"])
                csv << p["snr_db"] << "," << p["omp_accuracy"] << "," << p["om_accuracy"] << "\n";
            if (rep_format == "table") {
                std::cout << csv.str();
                return;
            }
        } else if (kind == "grid_report") {
            csv << "duration_s,n_fft,mean_omp_accuracy,spread\n";
            for (const auto& c : j["cells"])
                csv << c["duration_s"] << "," << c["n_fft"] << "," << c["mean_omp_accuracy"]
                    << "," << c["spread"] << "\n";
            if (rep_format == "table") {
                std::cout << csv.str();
                return;
            }
        } else if (kind == "ablation_report") {
            csv << "condition,omp_accuracy,om_accuracy\n";
            for (const auto& r : j["rows"])
                csv << r["name"].get<std::string>() << "," << r["report"]["omp_accuracy"] << ","
                    << r["report"]["om_accuracy"] << "\n";
            if (rep_format == "table") {
                std::cout << csv.str();
                return;
            }
        } else {
            throw omr::FormatError(rep_in + ": unknown report kind '" + kind + "'");
        }
        if (rep_out.empty()) {
            std::cout << csv.str();
        } else {
            std::ofstream f(rep_out);
            f << csv.str();
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage errors are exit 2
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return real_main(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
