#include <cstdio>
#include <filesystem>
#include <fstream>

#include "config.hpp"
#include "doctest.h"
#include "errors.hpp"

using namespace idob;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("idob_test_" + name)).string();
}

}  // namespace

TEST_CASE("defaults are valid") {
    const Config c;
    CHECK_NOTHROW(c.validate());
    CHECK(c.dt == 0.01);
    CHECK(c.n_classes == 5);
    CHECK(c.effective_estimate_sat() == doctest::Approx(2 * c.phys.m * c.phys.g));
}

TEST_CASE("every key round-trips through set and get") {
    const Config c;
    Config d;
    for (const auto& k : Config::keys()) d.set(k, c.get(k));
    for (const auto& k : Config::keys()) CHECK(d.get(k) == c.get(k));
    d.set("dt", "0.005");
    CHECK(d.dt == 0.005);
    d.set("model", "simplified");
    CHECK(d.get("model") == "simplified");
    d.set("dob_enabled", "false");
    CHECK_FALSE(d.dob_enabled);
}

TEST_CASE("save and load round trip, comments and blank lines") {
    Config c;
    c.seed = 99;
    c.gains.kz_p = 5.5;
    c.waypoint_z = 1.25;
    const std::string path = temp_path("cfg.txt");
    save_config(c, path);
    {
        std::ofstream out(path, std::ios::app);
        out << "\n# trailing comment\n   \n";
    }
    const Config d = load_config(path);
    for (const auto& k : Config::keys()) CHECK(d.get(k) == c.get(k));
    std::remove(path.c_str());
}

TEST_CASE("unknown keys and bad values are config errors") {
    Config c;
    try {
        c.set("no_such_key", "1");
        FAIL("expected config error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Config);
        CHECK(std::string(e.what()).find("no_such_key") != std::string::npos);
    }
    CHECK_THROWS_AS(c.get("no_such_key"), Error);
    CHECK_THROWS_AS(c.set("dt", "fast"), Error);
    CHECK_THROWS_AS(c.set("n_classes", "2.5"), Error);
    CHECK_THROWS_AS(c.set("dob_enabled", "maybe"), Error);
    CHECK_THROWS_AS(c.set("model", "other"), Error);
}

TEST_CASE("file errors carry the line number") {
    const std::string path = temp_path("bad.txt");
    {
        std::ofstream out(path);
        out << "dt = 0.01\nthis line is broken\n";
    }
    CHECK_THROWS_WITH(load_config(path), doctest::Contains(":2:"));
    std::remove(path.c_str());
    try {
        load_config(temp_path("missing.txt"));
        FAIL("expected io error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Io);
    }
}

TEST_CASE("validation rejects inconsistent scenarios") {
    Config c;
    c.t_grasp = 16;
    CHECK_THROWS_AS(c.validate(), Error);
    c = Config{};
    c.dt = 0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = Config{};
    c.duration = 10;
    CHECK_THROWS_AS(c.validate(), Error);
    c = Config{};
    c.n_train = 190;
    CHECK_THROWS_AS(c.validate(), Error);
}
