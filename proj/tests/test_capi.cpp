#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "idob/idob.h"

namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("idob_capi_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

struct ConfigHandle {
    idob_config* p = nullptr;
    ConfigHandle() { REQUIRE(idob_config_create(&p) == IDOB_OK); }
    ~ConfigHandle() { idob_config_free(p); }
};

struct ResultHandle {
    idob_result* p = nullptr;
    ~ResultHandle() { idob_result_free(p); }
};

// Model directory built once through the API with a short LSTM run.
const fs::path& model_dir() {
    static const fs::path dir = [] {
        const fs::path d = fresh_dir("models");
        ConfigHandle c;
        REQUIRE(idob_config_set(c.p, "lstm_samples", "60") == IDOB_OK);
        REQUIRE(idob_config_set(c.p, "lstm_epochs", "60") == IDOB_OK);
        REQUIRE(idob_config_set(c.p, "lstm_batch", "16") == IDOB_OK);
        REQUIRE(idob_train_cnn(c.p, (d / "cnn.txt").c_str(), nullptr, nullptr, nullptr) == IDOB_OK);
        REQUIRE(idob_train_lstm(c.p, (d / "lstm.txt").c_str(), nullptr, nullptr) == IDOB_OK);
        REQUIRE(idob_synthesize_l(c.p, (d / "L.txt").c_str(), nullptr, nullptr, nullptr) == IDOB_OK);
        return d;
    }();
    return dir;
}

}  // namespace

TEST_CASE("status names and error messages") {
    CHECK(std::string(idob_status_name(IDOB_OK)) == "ok");
    CHECK(std::string(idob_status_name(IDOB_E_INTERNAL)) == "internal");
    for (int s = 1; s <= 15; ++s) {
        const char* n = idob_status_name(static_cast<idob_status>(s));
        REQUIRE(n != nullptr);
        CHECK(std::strlen(n) > 0);
        CHECK(std::string(n) != "internal");
    }
    CHECK(idob_config_create(nullptr) == IDOB_E_INVALID_INPUT);
    CHECK(std::string(idob_last_error()).find("NULL") != std::string::npos);
    ConfigHandle c;
    CHECK(std::string(idob_last_error()).empty());
}

TEST_CASE("config: set, get, save, load") {
    ConfigHandle c;
    char buf[64];
    CHECK(idob_config_set(c.p, "seed", "123") == IDOB_OK);
    CHECK(idob_config_get(c.p, "seed", buf, sizeof buf) == IDOB_OK);
    CHECK(std::string(buf) == "123");
    CHECK(idob_config_set(c.p, "bogus", "1") == IDOB_E_CONFIG);
    CHECK(std::string(idob_last_error()).find("bogus") != std::string::npos);
    CHECK(idob_config_set(c.p, "dt", "abc") == IDOB_E_CONFIG);
    CHECK(idob_config_get(c.p, "seed", buf, 2) == IDOB_E_INVALID_INPUT);
    CHECK(idob_config_get(c.p, "seed", nullptr, 10) == IDOB_E_INVALID_INPUT);

    const fs::path dir = fresh_dir("config");
    const std::string path = (dir / "c.txt").string();
    CHECK(idob_config_save(c.p, path.c_str()) == IDOB_OK);
    idob_config* d = nullptr;
    CHECK(idob_config_load(path.c_str(), &d) == IDOB_OK);
    REQUIRE(d != nullptr);
    CHECK(idob_config_get(d, "seed", buf, sizeof buf) == IDOB_OK);
    CHECK(std::string(buf) == "123");
    idob_config_free(d);
    idob_config* e = nullptr;
    CHECK(idob_config_load((dir / "missing.txt").c_str(), &e) == IDOB_E_IO);
    CHECK(e == nullptr);
    idob_config_free(nullptr);
    idob_result_free(nullptr);
}

TEST_CASE("simulate: metrics, csv export and result directory") {
    ConfigHandle c;
    ResultHandle r;
    REQUIRE(idob_simulate(c.p, IDOB_CASE_CDOB, 2, nullptr, &r.p) == IDOB_OK);
    idob_metrics m{};
    REQUIRE(idob_result_metrics(r.p, &m) == IDOB_OK);
    CHECK(m.samples == 2101);
    CHECK(m.ez_norm > 0);
    CHECK(m.crashed == 0);
    CHECK(m.diverged == 0);
    CHECK(m.last_valid_step == 2100);

    const fs::path dir = fresh_dir("simulate");
    CHECK(idob_result_export_csv(r.p, (dir / "x.csv").c_str()) == IDOB_OK);
    CHECK(idob_result_write(r.p, (dir / "out").c_str()) == IDOB_OK);
    CHECK(fs::exists(dir / "out" / "cdob.csv"));
    CHECK(fs::exists(dir / "out" / "metrics.txt"));
    std::ifstream in(dir / "x.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header.rfind("t,x,y,z", 0) == 0);
}

TEST_CASE("simulate: bad arguments map to status codes") {
    ConfigHandle c;
    idob_result* r = nullptr;
    CHECK(idob_simulate(c.p, IDOB_CASE_CDOB, 9, nullptr, &r) == IDOB_E_INVALID_INPUT);
    CHECK(r == nullptr);
    CHECK(idob_simulate(c.p, static_cast<idob_case>(7), 1, nullptr, &r) == IDOB_E_INVALID_INPUT);
    CHECK(idob_simulate(c.p, IDOB_CASE_IDOB, 1, nullptr, &r) == IDOB_E_INVALID_INPUT);
    CHECK(idob_simulate(nullptr, IDOB_CASE_CDOB, 1, nullptr, &r) == IDOB_E_INVALID_INPUT);
    CHECK(idob_config_set(c.p, "t_grasp", "30") == IDOB_OK);
    CHECK(idob_simulate(c.p, IDOB_CASE_CDOB, 1, nullptr, &r) == IDOB_E_CONFIG);
}

TEST_CASE("training and synthesis through the API") {
    ConfigHandle c;
    const fs::path dir = fresh_dir("train");
    double tr = 0, va = 0, te = 0;
    CHECK(idob_train_cnn(c.p, (dir / "cnn.txt").c_str(), &tr, &va, &te) == IDOB_OK);
    CHECK(tr >= 0.95);
    CHECK(te >= 0.8);
    CHECK(fs::exists(dir / "cnn.txt"));

    REQUIRE(idob_config_set(c.p, "lstm_samples", "12") == IDOB_OK);
    REQUIRE(idob_config_set(c.p, "lstm_epochs", "3") == IDOB_OK);
    REQUIRE(idob_config_set(c.p, "lstm_batch", "4") == IDOB_OK);
    double r0 = 0, r1 = 0;
    CHECK(idob_train_lstm(c.p, (dir / "lstm.txt").c_str(), &r0, &r1) == IDOB_OK);
    CHECK(r1 < r0);
    REQUIRE(idob_config_set(c.p, "lstm_batch", "13") == IDOB_OK);
    CHECK(idob_train_lstm(c.p, (dir / "lstm2.txt").c_str(), nullptr, nullptr) == IDOB_E_INVALID_INPUT);

    double rho = 0, gamma = 0, ratio = 0;
    CHECK(idob_synthesize_l(c.p, (dir / "L.txt").c_str(), &rho, &gamma, &ratio) == IDOB_OK);
    CHECK(rho < 1);
    CHECK(gamma >= 1);
    CHECK(ratio < 1);
}

TEST_CASE("image-based case with a model directory, comparison and report") {
    ConfigHandle c;
    const std::string models = model_dir().string();
    ResultHandle cd, id;
    REQUIRE(idob_simulate(c.p, IDOB_CASE_CDOB, 3, models.c_str(), &cd.p) == IDOB_OK);
    REQUIRE(idob_simulate(c.p, IDOB_CASE_IDOB, 3, models.c_str(), &id.p) == IDOB_OK);
    idob_metrics mc{}, mi{};
    idob_result_metrics(cd.p, &mc);
    idob_result_metrics(id.p, &mi);
    CHECK(mi.ez_norm < mc.ez_norm);

    const fs::path out = fresh_dir("compare");
    REQUIRE(idob_compare(c.p, 3, models.c_str(), out.c_str()) == IDOB_OK);
    for (const char* f : {"nodob.csv", "cdob.csv", "idob.csv", "comparison.txt", "plot.gp"})
        CHECK(fs::exists(out / f));
    char buf[1024];
    REQUIRE(idob_report(out.c_str(), buf, sizeof buf) == IDOB_OK);
    CHECK(std::string(buf).find("idob ez_norm=") != std::string::npos);
    CHECK(idob_report(out.c_str(), buf, 4) == IDOB_E_INVALID_INPUT);
    CHECK(idob_report(out.c_str(), nullptr, 0) == IDOB_OK);
    CHECK(idob_report((out / "none").c_str(), nullptr, 0) == IDOB_E_IO);
}
