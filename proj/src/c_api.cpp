#include "idob/idob.h"

#include <cstring>
#include <string>

#include "config.hpp"
#include "errors.hpp"
#include "persist.hpp"
#include "workflow.hpp"

struct idob_config {
    idob::Config cfg;
};

struct idob_result {
    idob::ScenarioResult res;
};

namespace {

thread_local std::string g_last_error;

idob_status fail(idob_status s, const std::string& msg) {
    g_last_error = msg;
    return s;
}

template <class F>
idob_status guard(F&& f) {
    try {
        f();
        g_last_error.clear();
        return IDOB_OK;
    } catch (const idob::Error& e) {
        return fail(static_cast<idob_status>(static_cast<int>(e.code())), e.what());
    } catch (const std::bad_alloc&) {
        return fail(IDOB_E_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(IDOB_E_INTERNAL, e.what());
    } catch (...) {
        return fail(IDOB_E_INTERNAL, "unknown exception");
    }
}

#define IDOB_REQUIRE(p)                                                       \
    do {                                                                      \
        if (!(p)) return fail(IDOB_E_INVALID_INPUT, #p " must not be NULL"); \
    } while (0)

void copy_out(const std::string& s, char* buf, size_t cap) {
    if (s.size() + 1 > cap) throw idob::Error(idob::ErrorCode::InvalidInput, "output buffer too small");
    std::memcpy(buf, s.c_str(), s.size() + 1);
}

idob::CaseKind to_kind(idob_case c) {
    switch (c) {
    case IDOB_CASE_NODOB: return idob::CaseKind::NoDob;
    case IDOB_CASE_CDOB: return idob::CaseKind::ConventionalDob;
    case IDOB_CASE_IDOB: return idob::CaseKind::ImageDob;
    }
    throw idob::Error(idob::ErrorCode::InvalidInput, "unknown case selector");
}

}  // namespace

extern "C" {

const char* idob_last_error(void) { return g_last_error.c_str(); }

const char* idob_status_name(idob_status s) {
    if (s == IDOB_OK) return "ok";
    if (s >= IDOB_E_INVALID_INPUT && s <= IDOB_E_CONFIG)
        return idob::error_code_name(static_cast<idob::ErrorCode>(static_cast<int>(s)));
    return "internal";
}

idob_status idob_config_create(idob_config** out) {
    IDOB_REQUIRE(out);
    return guard([&] { *out = new idob_config{}; });
}

idob_status idob_config_load(const char* path, idob_config** out) {
    IDOB_REQUIRE(path);
    IDOB_REQUIRE(out);
    return guard([&] { *out = new idob_config{idob::load_config(path)}; });
}

idob_status idob_config_save(const idob_config* cfg, const char* path) {
    IDOB_REQUIRE(cfg);
    IDOB_REQUIRE(path);
    return guard([&] { idob::save_config(cfg->cfg, path); });
}

idob_status idob_config_set(idob_config* cfg, const char* key, const char* value) {
    IDOB_REQUIRE(cfg);
    IDOB_REQUIRE(key);
    IDOB_REQUIRE(value);
    return guard([&] { cfg->cfg.set(key, value); });
}

idob_status idob_config_get(const idob_config* cfg, const char* key, char* buf, size_t cap) {
    IDOB_REQUIRE(cfg);
    IDOB_REQUIRE(key);
    IDOB_REQUIRE(buf);
    return guard([&] { copy_out(cfg->cfg.get(key), buf, cap); });
}

void idob_config_free(idob_config* cfg) { delete cfg; }

idob_status idob_train_cnn(const idob_config* cfg, const char* out_path, double* train_acc,
                           double* val_acc, double* test_acc) {
    IDOB_REQUIRE(cfg);
    IDOB_REQUIRE(out_path);
    return guard([&] {
        const auto w = idob::train_cnn_workflow(cfg->cfg);
        idob::save_cnn(w.train.model, out_path);
        const int b = w.train.best_epoch;  // 1-based, 0 when no epoch ran
        if (train_acc) *train_acc = b > 0 ? w.train.train_accuracy.at(b - 1) : 0.0;
        if (val_acc) *val_acc = b > 0 ? w.train.validation_accuracy.at(b - 1) : 0.0;
        if (test_acc) *test_acc = w.test_accuracy;
    });
}

idob_status idob_train_lstm(const idob_config* cfg, const char* out_path, double* rmse_initial,
                            double* rmse_final) {
    IDOB_REQUIRE(cfg);
    IDOB_REQUIRE(out_path);
    return guard([&] {
        const auto w = idob::train_lstm_workflow(cfg->cfg);
        idob::save_lstm(w.train.model, out_path);
        if (rmse_initial) *rmse_initial = w.train.rmse.front();
        if (rmse_final) *rmse_final = w.train.rmse.back();
    });
}

idob_status idob_synthesize_l(const idob_config* cfg, const char* out_path, double* rho,
                              double* gamma, double* energy_ratio) {
    IDOB_REQUIRE(cfg);
    IDOB_REQUIRE(out_path);
    return guard([&] {
        const auto r = idob::synthesize_workflow(cfg->cfg);
        idob::save_filter(r.filter, cfg->cfg.dt, out_path);
        if (rho) *rho = r.rho;
        if (gamma) *gamma = r.gamma;
        if (energy_ratio) *energy_ratio = r.energy_ratio;
    });
}

idob_status idob_simulate(const idob_config* cfg, idob_case which, int weight_class,
                          const char* model_dir, idob_result** out) {
    IDOB_REQUIRE(cfg);
    IDOB_REQUIRE(out);
    if (which == IDOB_CASE_IDOB) IDOB_REQUIRE(model_dir);
    return guard([&] {
        idob::Scenario sc;
        sc.kind = to_kind(which);
        sc.weight_class = weight_class;
        idob::Models models;
        if (which == IDOB_CASE_IDOB) models = idob::load_or_build_models(cfg->cfg, model_dir);
        *out = new idob_result{idob::run_case(cfg->cfg, sc, &models)};
    });
}

idob_status idob_result_metrics(const idob_result* res, idob_metrics* out) {
    IDOB_REQUIRE(res);
    IDOB_REQUIRE(out);
    const auto& f = res->res.flight;
    out->ez_norm = f.metrics.ez_norm;
    out->max_z_dev = f.metrics.max_z_dev;
    out->crashed = f.metrics.crashed ? 1 : 0;
    out->diverged = f.diverged ? 1 : 0;
    out->last_valid_step = f.last_valid_step;
    out->samples = f.log.size();
    g_last_error.clear();
    return IDOB_OK;
}

idob_status idob_result_export_csv(const idob_result* res, const char* path) {
    IDOB_REQUIRE(res);
    IDOB_REQUIRE(path);
    return guard([&] { idob::export_csv(res->res.flight.log, path); });
}

idob_status idob_result_write(const idob_result* res, const char* dir) {
    IDOB_REQUIRE(res);
    IDOB_REQUIRE(dir);
    return guard([&] { idob::write_single(res->res, dir); });
}

void idob_result_free(idob_result* res) { delete res; }

idob_status idob_compare(const idob_config* cfg, int weight_class, const char* model_dir,
                         const char* out_dir) {
    IDOB_REQUIRE(cfg);
    IDOB_REQUIRE(model_dir);
    IDOB_REQUIRE(out_dir);
    return guard([&] {
        const idob::Models models = idob::load_or_build_models(cfg->cfg, model_dir);
        idob::write_comparison(idob::compare_cases(cfg->cfg, weight_class, models), out_dir);
    });
}

idob_status idob_report(const char* dir, char* buf, size_t cap) {
    IDOB_REQUIRE(dir);
    return guard([&] {
        const std::string s = idob::regenerate_report(dir);
        if (buf) copy_out(s, buf, cap);
    });
}

}  // extern "C"
