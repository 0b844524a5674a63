#include "workflow.hpp"

#include <cmath>
#include <filesystem>

#include "errors.hpp"
#include "persist.hpp"
#include "textio.hpp"

namespace idob {

CnnWorkflow train_cnn_workflow(const Config& c) {
    c.validate();
    const auto images = generate_images(c.n_images, c.n_classes, c.seed);
    const DataSplit split = split_dataset(images, c.n_train, c.n_val, c.seed + 1);
    CnnModel init = make_cnn(32, 32, c.cnn_filters, 3, c.n_classes, c.seed + 2);
    CnnWorkflow w;
    w.train = cnn_train(split.train, split.validation, init, c.cnn_epochs, c.cnn_lr, c.seed + 3);
    w.test_accuracy = cnn_accuracy(split.test, w.train.model);
    return w;
}

LstmWorkflow train_lstm_workflow(const Config& c) {
    c.validate();
    LstmDataset ds = generate_lstm_dataset(c, c.lstm_samples, c.seed + 10);
    LstmModel init = make_lstm(c.lstm_hidden, c.seed + 11);
    fit_lstm_scales(init, ds.pairs);
    LstmWorkflow w;
    w.train = lstm_train(ds.pairs, init, c.lstm_epochs, c.lstm_batch, c.lstm_lr, c.seed + 12);
    w.samples = static_cast<int>(ds.pairs.size());
    w.skipped = ds.skipped;
    return w;
}

SynthesisReport synthesize_workflow(const Config& c) {
    c.validate();
    SynthesisOptions opt;
    opt.training_disturbance = make_trapezoid(1.0, c.timing(), c.dt).samples;
    opt.pad_seconds = c.pad_seconds;
    opt.gamma_cap = c.gamma_cap;
    const DobConfig dc = config_dob(c);
    return synthesize_L(config_gn(c), dc.d_block, dc.q_block, config_c_block(c), c.n_taps, opt);
}

ModelPaths::ModelPaths(const std::string& dir)
    : cnn((std::filesystem::path(dir) / "cnn.txt").string()),
      lstm((std::filesystem::path(dir) / "lstm.txt").string()),
      filter((std::filesystem::path(dir) / "L.txt").string()) {}

Models load_or_build_models(const Config& c, const std::string& dir) {
    std::filesystem::create_directories(dir);
    const ModelPaths p(dir);
    Models m;
    if (std::filesystem::exists(p.cnn)) {
        m.cnn = load_cnn(p.cnn);
    } else {
        m.cnn = train_cnn_workflow(c).train.model;
        save_cnn(m.cnn, p.cnn);
    }
    if (std::filesystem::exists(p.lstm)) {
        m.lstm = load_lstm(p.lstm);
    } else {
        m.lstm = train_lstm_workflow(c).train.model;
        save_lstm(m.lstm, p.lstm);
    }
    if (std::filesystem::exists(p.filter)) {
        double dt = 0;
        m.L = load_filter(p.filter, &dt);
        if (std::abs(dt - c.dt) > 1e-12)
            throw Error(ErrorCode::Config, p.filter + ": sample time differs from config dt");
    } else {
        m.L = synthesize_workflow(c).filter;
        save_filter(m.L, c.dt, p.filter);
    }
    return m;
}

}  // namespace idob

namespace idob {

namespace {

std::string csv_path(const std::string& dir, CaseKind k) {
    return (std::filesystem::path(dir) / (std::string(case_name(k)) + ".csv")).string();
}

std::string metrics_line(const char* name, const Metrics& m) {
    return std::string(name) + " ez_norm=" + format_double(m.ez_norm) +
           " max_z_dev=" + format_double(m.max_z_dev) + " crashed=" + (m.crashed ? "1" : "0") + "\n";
}

// Relative names keep the script usable from inside the output directory.
PlotInputs relative_plot_inputs() {
    return {std::string(case_name(CaseKind::NoDob)) + ".csv",
            std::string(case_name(CaseKind::ConventionalDob)) + ".csv",
            std::string(case_name(CaseKind::ImageDob)) + ".csv"};
}

void write_plot(const std::string& dir) {
    const PlotInputs rel = relative_plot_inputs();
    for (CaseKind k : {CaseKind::NoDob, CaseKind::ConventionalDob, CaseKind::ImageDob})
        if (!std::filesystem::exists(csv_path(dir, k)))
            throw Error(ErrorCode::Io, "plot input missing: " + csv_path(dir, k));
    write_text_file((std::filesystem::path(dir) / "plot.gp").string(),
                    plot_script(rel, "comparison.png"));
}

}  // namespace

void write_comparison(const Comparison& cmp, const std::string& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& r : cmp.results) export_csv(r.flight.log, csv_path(dir, r.scenario.kind));
    write_text_file((std::filesystem::path(dir) / "comparison.txt").string(), cmp.table);
    write_plot(dir);
}

void write_single(const ScenarioResult& res, const std::string& dir) {
    std::filesystem::create_directories(dir);
    export_csv(res.flight.log, csv_path(dir, res.scenario.kind));
    std::string s = metrics_line(case_name(res.scenario.kind), res.flight.metrics);
    if (res.flight.diverged) s += "diverged last_valid_step=" + std::to_string(res.flight.last_valid_step) + "\n";
    write_text_file((std::filesystem::path(dir) / "metrics.txt").string(), s);
}

std::string regenerate_report(const std::string& dir) {
    if (!std::filesystem::is_directory(dir)) throw Error(ErrorCode::Io, "not a directory: " + dir);
    std::string s;
    int found = 0;
    for (CaseKind k : {CaseKind::NoDob, CaseKind::ConventionalDob, CaseKind::ImageDob}) {
        const std::string p = csv_path(dir, k);
        if (!std::filesystem::exists(p)) continue;
        ++found;
        s += metrics_line(case_name(k), compute_metrics(import_csv(p)));
    }
    if (found == 0) throw Error(ErrorCode::Io, dir + ": no case CSV files found");
    write_text_file((std::filesystem::path(dir) / "metrics.txt").string(), s);
    if (found == 3) write_plot(dir);
    return s;
}

}  // namespace idob
