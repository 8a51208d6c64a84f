#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <string>

#include "doctest.h"
#include "hew/run.hpp"
#include "hew/selfcheck.hpp"
#include "hew/sheet_io.hpp"

using namespace hew;
namespace fs = std::filesystem;

namespace {

std::string temp_dir(const std::string& leaf) {
    fs::path p = fs::temp_directory_path() / "hew_tests" / leaf;
    fs::remove_all(p);
    fs::create_directories(p);
    return p.string();
}

std::string contains_or_empty(const std::string& path) {
    return fs::exists(path) ? read_text_file(path) : std::string();
}

Sheet tiny_branch_sheet() {
    RunConfig cfg;
    return simple_branch(1, 5.0, {0.0, 5e-4, 1e-3}, cfg.physical(), cfg.model(), cfg.disc);
}

}  // namespace

TEST_CASE("configuration defaults and round trip") {
    RunConfig c = config_from_json("{}");
    CHECK(c.g == 9.81);
    CHECK(c.g_rho == 1.0);
    CHECK(c.energy.a == 4.0);
    CHECK(c.disc.n_modes == 32);
    c.validate();

    RunConfig c2 = config_from_json(config_to_json(c));
    CHECK(config_to_json(c2) == config_to_json(c));

    RunConfig c3 = config_from_json(
        R"({"lambda1": 4.5, "energy": {"c3": 0.1}, "disc": {"n_modes": 16}, "workers": 3})");
    CHECK(c3.lambda1 == 4.5);
    CHECK(c3.energy.c3 == 0.1);
    CHECK(c3.disc.n_modes == 16);
    CHECK(c3.workers == 3);
}

TEST_CASE("configuration errors name the offending field") {
    CHECK_THROWS_AS(config_from_json("{"), ConfigError);
    try {
        config_from_json(R"({"g": "high"})");
        FAIL("expected a type error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("'g'") != std::string::npos);
    }

    auto expect_field = [](RunConfig c, const std::string& field) {
        try {
            c.validate();
            FAIL_CHECK("expected validation to fail for ", field);
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find(field) != std::string::npos);
        }
    };
    RunConfig even_grid;
    even_grid.grid = 10;
    expect_field(even_grid, "grid");
    RunConfig bad_kind;
    bad_kind.sheet_kind = "fancy";
    expect_field(bad_kind, "sheet_kind");
    RunConfig bad_energy;
    bad_energy.energy.c4 = -2.0;
    expect_field(bad_energy, "energy");
    RunConfig singular;
    singular.lambda1 = 4.0;
    expect_field(singular, "physical");
}

TEST_CASE("sheet files round-trip bitwise") {
    Sheet sheet = tiny_branch_sheet();
    std::string dir = temp_dir("roundtrip");
    std::string path = dir + "/sheet.json";
    save_sheet(sheet, path);
    Sheet loaded = load_sheet(path);
    std::string again = dir + "/sheet2.json";
    save_sheet(loaded, again);
    CHECK(read_text_file(path) == read_text_file(again));
    CHECK(sheet_to_csv(loaded, 8) == sheet_to_csv(sheet, 8));
    CHECK(loaded.n1() == sheet.n1());
    CHECK(loaded.at(2, 0).lambda2 == sheet.at(2, 0).lambda2);
}

TEST_CASE("damaged sheet files are rejected with typed errors") {
    Sheet sheet = tiny_branch_sheet();
    std::string dir = temp_dir("damage");
    std::string path = dir + "/sheet.json";
    save_sheet(sheet, path);

    std::string text = read_text_file(path);
    write_text_file(dir + "/truncated.json", text.substr(0, text.size() / 2));
    CHECK_THROWS_AS(load_sheet(dir + "/truncated.json"), CorruptFileError);

    std::string other = text;
    auto pos = other.find("hew-sheet/1");
    REQUIRE(pos != std::string::npos);
    other.replace(pos, 11, "hew-sheet/9");
    write_text_file(dir + "/schema.json", other);
    CHECK_THROWS_AS(load_sheet(dir + "/schema.json"), SchemaError);

    CHECK_THROWS_AS(load_sheet(dir + "/missing.json"), IoError);
}

TEST_CASE("dispersion command writes deterministic artifacts") {
    RunConfig cfg;
    cfg.curve_samples = 80;
    cfg.out_dir = temp_dir("disp_a");
    REQUIRE(run("dispersion", cfg) == kExitOk);
    CHECK(fs::exists(cfg.out_dir + "/dispersion.csv"));
    CHECK(fs::exists(cfg.out_dir + "/dispersion.json"));
    CHECK(fs::exists(cfg.out_dir + "/dispersion.svg"));

    RunConfig cfg2 = cfg;
    cfg2.out_dir = temp_dir("disp_b");
    REQUIRE(run("dispersion", cfg2) == kExitOk);
    CHECK(read_text_file(cfg.out_dir + "/dispersion.csv") ==
          read_text_file(cfg2.out_dir + "/dispersion.csv"));
    CHECK(read_text_file(cfg.out_dir + "/dispersion.svg") ==
          read_text_file(cfg2.out_dir + "/dispersion.svg"));
}

TEST_CASE("invariant suites pass through the command layer") {
    RunConfig cfg;
    cfg.out_dir = temp_dir("check");
    cfg.seed = 7;
    CHECK(run("check", cfg) == kExitOk);
    CHECK(fs::exists(cfg.out_dir + "/check.json"));
    for (const auto& r : run_selfcheck(cfg)) {
        INFO(r.name, ": ", r.detail);
        CHECK(r.pass);
    }
}

TEST_CASE("sheet and profile commands compose") {
    RunConfig cfg;
    cfg.sheet_kind = "simple";
    cfg.k = 1;
    cfg.lambda1 = 5.0;
    cfg.t_max = 1e-3;
    cfg.grid = 3;
    cfg.n_plot = 64;
    cfg.out_dir = temp_dir("sheet");
    REQUIRE(run("sheet", cfg) == kExitOk);
    REQUIRE(fs::exists(cfg.out_dir + "/sheet.json"));
    CHECK(fs::exists(cfg.out_dir + "/sheet.csv"));

    RunConfig pcfg = cfg;
    pcfg.input_path = cfg.out_dir + "/sheet.json";
    pcfg.point_i = 2;
    pcfg.point_j = 0;
    pcfg.out_dir = temp_dir("profile");
    CHECK(run("profile", pcfg) == kExitOk);
    CHECK(fs::exists(pcfg.out_dir + "/profile.csv"));
    CHECK(fs::exists(pcfg.out_dir + "/profile.svg"));

    pcfg.input_path = cfg.out_dir + "/nope.json";
    CHECK(run("profile", pcfg) == kExitIo);
}

TEST_CASE("command layer exit codes") {
    RunConfig bad;
    bad.grid = 4;
    bad.out_dir = temp_dir("codes");
    CHECK(run("sheet", bad) == kExitConfig);

    RunConfig cfg;
    cfg.out_dir = temp_dir("codes2");
    CHECK(run("frobnicate", cfg) == kExitConfig);

    // Solver failures leave a manifest behind.
    RunConfig stiff;
    stiff.sheet_kind = "simple";
    stiff.t_max = 0.5;  // far outside the validity ball
    stiff.grid = 3;
    stiff.out_dir = temp_dir("codes3");
    CHECK(run("sheet", stiff) == kExitSolver);
    CHECK(fs::exists(stiff.out_dir + "/failure.json"));
    CHECK(contains_or_empty(stiff.out_dir + "/failure.json").find("ball") != std::string::npos);
}
