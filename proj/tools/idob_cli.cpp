// Command-line front end; talks to the library only through the C API.
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "idob/idob.h"

namespace {

int report(idob_status s) {
    if (s != IDOB_OK)
        std::fprintf(stderr, "error [%s]: %s\n", idob_status_name(s), idob_last_error());
    return static_cast<int>(s);
}

struct Common {
    std::string config_path;
    long long seed = -1;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config_path, "key = value configuration file");
    cmd->add_option("--seed", c.seed, "random seed (overrides the config)");
    cmd->add_option("--set", c.overrides, "extra key=value override, repeatable");
}

// Builds the config; on failure prints the error and returns nullptr.
idob_config* make_config(const Common& c, int* code) {
    idob_config* cfg = nullptr;
    idob_status s = c.config_path.empty() ? idob_config_create(&cfg)
                                          : idob_config_load(c.config_path.c_str(), &cfg);
    if (s == IDOB_OK && c.seed >= 0)
        s = idob_config_set(cfg, "seed", std::to_string(c.seed).c_str());
    for (const auto& kv : c.overrides) {
        if (s != IDOB_OK) break;
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "error [invalid-input]: --set expects key=value, got '%s'\n", kv.c_str());
            idob_config_free(cfg);
            *code = IDOB_E_INVALID_INPUT;
            return nullptr;
        }
        s = idob_config_set(cfg, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
    }
    if (s != IDOB_OK) {
        *code = report(s);
        idob_config_free(cfg);
        return nullptr;
    }
    return cfg;
}

int set_int(idob_config* cfg, const char* key, long long v) {
    return v >= 0 ? report(idob_config_set(cfg, key, std::to_string(v).c_str())) : 0;
}

int set_real(idob_config* cfg, const char* key, double v) {
    if (!(v > 0)) return 0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return report(idob_config_set(cfg, key, buf));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quadrotor payload simulator with conventional and image-based disturbance observers"};
    app.require_subcommand(1);

    Common sim_c, cmp_c, cnn_c, lstm_c, syn_c;
    std::string sim_case = "cdob", sim_out = "out", sim_models = "models";
    int sim_class = 3;
    auto* sim = app.add_subcommand("simulate", "run one case and write its CSV and metrics");
    add_common(sim, sim_c);
    sim->add_option("--case", sim_case, "nodob | cdob | idob")
        ->check(CLI::IsMember({"nodob", "cdob", "idob"}));
    sim->add_option("--class", sim_class, "payload weight class");
    sim->add_option("--out", sim_out, "output directory");
    sim->add_option("--models", sim_models,
                    "model directory; existing cnn.txt, lstm.txt and L.txt are loaded, missing ones are built");

    std::string cmp_out = "out", cmp_models = "models";
    int cmp_class = 3;
    auto* cmp = app.add_subcommand("compare", "run all three cases and write CSVs, table and plot script");
    add_common(cmp, cmp_c);
    cmp->add_option("--class", cmp_class, "payload weight class");
    cmp->add_option("--out", cmp_out, "output directory");
    cmp->add_option("--models", cmp_models, "model directory (see simulate)");

    std::string cnn_out = "models/cnn.txt";
    long long cnn_epochs = -1;
    double cnn_lr = 0;
    long long cnn_batch = -1;
    auto* tcnn = app.add_subcommand("train-cnn", "train the weight classifier on synthetic images");
    add_common(tcnn, cnn_c);
    tcnn->add_option("--epochs", cnn_epochs);
    tcnn->add_option("--lr", cnn_lr);
    tcnn->add_option("--batch", cnn_batch, "only 1 is supported");
    tcnn->add_option("--out", cnn_out);

    std::string lstm_out = "models/lstm.txt";
    long long lstm_epochs = -1, lstm_batch = -1;
    double lstm_lr = 0;
    auto* tlstm = app.add_subcommand("train-lstm", "train the output-to-input disturbance network");
    add_common(tlstm, lstm_c);
    tlstm->add_option("--epochs", lstm_epochs);
    tlstm->add_option("--lr", lstm_lr);
    tlstm->add_option("--batch", lstm_batch);
    tlstm->add_option("--out", lstm_out);

    std::string syn_out = "models/L.txt";
    auto* syn = app.add_subcommand("synthesize-l", "synthesize the learning filter");
    add_common(syn, syn_c);
    syn->add_option("--out", syn_out);

    std::string rep_in;
    auto* rep = app.add_subcommand("report", "recompute metrics and plot script from CSVs");
    rep->add_option("--in", rep_in, "directory written by simulate or compare")->required();

    CLI11_PARSE(app, argc, argv);

    int code = 0;
    if (*sim) {
        idob_config* cfg = make_config(sim_c, &code);
        if (!cfg) return code;
        const idob_case k = sim_case == "nodob" ? IDOB_CASE_NODOB
                            : sim_case == "idob" ? IDOB_CASE_IDOB
                                                 : IDOB_CASE_CDOB;
        idob_result* res = nullptr;
        code = report(idob_simulate(cfg, k, sim_class, sim_models.c_str(), &res));
        if (code == 0) code = report(idob_result_write(res, sim_out.c_str()));
        if (code == 0) {
            idob_metrics m{};
            idob_result_metrics(res, &m);
            std::printf("%s class %d: ez_norm %.6f max_z_dev %.6f crashed %s%s\n", sim_case.c_str(),
                        sim_class, m.ez_norm, m.max_z_dev, m.crashed ? "yes" : "no",
                        m.diverged ? " (diverged)" : "");
        }
        idob_result_free(res);
        idob_config_free(cfg);
        return code;
    }
    if (*cmp) {
        idob_config* cfg = make_config(cmp_c, &code);
        if (!cfg) return code;
        code = report(idob_compare(cfg, cmp_class, cmp_models.c_str(), cmp_out.c_str()));
        idob_config_free(cfg);
        if (code == 0) {
            std::vector<char> buf(1 << 16);
            code = report(idob_report(cmp_out.c_str(), buf.data(), buf.size()));
            if (code == 0) std::fputs(buf.data(), stdout);
        }
        return code;
    }
    if (*tcnn) {
        idob_config* cfg = make_config(cnn_c, &code);
        if (!cfg) return code;
        if (cnn_batch > 1) {
            std::fprintf(stderr, "error [invalid-input]: the classifier trains with batch size 1\n");
            idob_config_free(cfg);
            return IDOB_E_INVALID_INPUT;
        }
        code = set_int(cfg, "cnn_epochs", cnn_epochs);
        if (code == 0) code = set_real(cfg, "cnn_lr", cnn_lr);
        double tr = 0, va = 0, te = 0;
        if (code == 0) code = report(idob_train_cnn(cfg, cnn_out.c_str(), &tr, &va, &te));
        if (code == 0)
            std::printf("train %.4f validation %.4f test %.4f -> %s\n", tr, va, te, cnn_out.c_str());
        idob_config_free(cfg);
        return code;
    }
    if (*tlstm) {
        idob_config* cfg = make_config(lstm_c, &code);
        if (!cfg) return code;
        code = set_int(cfg, "lstm_epochs", lstm_epochs);
        if (code == 0) code = set_int(cfg, "lstm_batch", lstm_batch);
        if (code == 0) code = set_real(cfg, "lstm_lr", lstm_lr);
        double r0 = 0, r1 = 0;
        if (code == 0) code = report(idob_train_lstm(cfg, lstm_out.c_str(), &r0, &r1));
        if (code == 0)
            std::printf("rmse initial %.6f final %.6f -> %s\n", r0, r1, lstm_out.c_str());
        idob_config_free(cfg);
        return code;
    }
    if (*syn) {
        idob_config* cfg = make_config(syn_c, &code);
        if (!cfg) return code;
        double rho = 0, gamma = 0, ratio = 0;
        code = report(idob_synthesize_l(cfg, syn_out.c_str(), &rho, &gamma, &ratio));
        if (code == 0)
            std::printf("rho %.6f gamma %.6f energy ratio %.6f -> %s\n", rho, gamma, ratio, syn_out.c_str());
        idob_config_free(cfg);
        return code;
    }
    if (*rep) {
        std::vector<char> buf(1 << 16);
        code = report(idob_report(rep_in.c_str(), buf.data(), buf.size()));
        if (code == 0) std::fputs(buf.data(), stdout);
        return code;
    }
    return 0;
}
