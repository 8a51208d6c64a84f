#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "hew/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Travelling hydroelastic wave branches: dispersion atlases, bifurcation "
                 "branches and sheets, invariant checks, profile reconstruction."};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    app.set_version_flag("--version", hew::kToolVersion);

    std::string config_path;
    hew::RunConfig overrides;
    bool have_out = false, have_workers = false, have_seed = false;
    bool have_k = false, have_l = false, have_lambda1 = false;
    bool have_t_max = false, have_grid = false;

    app.add_option("--config", config_path, "JSON configuration file")
        ->check(CLI::ExistingFile);
    app.add_option("--out", overrides.out_dir, "output directory")
        ->each([&](const std::string&) { have_out = true; });
    app.add_option("--workers", overrides.workers, "parallel workers for sheet runs")
        ->each([&](const std::string&) { have_workers = true; });
    app.add_option("--seed", overrides.seed, "random seed for the check suites")
        ->each([&](const std::string&) { have_seed = true; });
    app.add_option("--k", overrides.k, "first mode number")
        ->each([&](const std::string&) { have_k = true; });
    app.add_option("--l", overrides.l, "second mode number")
        ->each([&](const std::string&) { have_l = true; });
    app.add_option("--lambda1", overrides.lambda1, "first parameter component")
        ->each([&](const std::string&) { have_lambda1 = true; });
    app.add_option("--t-max", overrides.t_max, "amplitude half-range")
        ->each([&](const std::string&) { have_t_max = true; });
    app.add_option("--grid", overrides.grid, "points per amplitude axis (odd)")
        ->each([&](const std::string&) { have_grid = true; });

    auto* sheet_cmd = app.add_subcommand("sheet", "solve a bifurcation sheet");
    std::string sheet_kind, resume_path;
    sheet_cmd->add_option("--kind", sheet_kind, "simple | special | general");
    sheet_cmd->add_option("--resume", resume_path, "resume from a stored sheet file");

    auto* profile_cmd = app.add_subcommand("profile", "reconstruct a stored wave profile");
    std::string input_path;
    int point_i = -1, point_j = -1;
    profile_cmd->add_option("--input", input_path, "stored sheet file");
    profile_cmd->add_option("--i", point_i, "grid row index");
    profile_cmd->add_option("--j", point_j, "grid column index");

    app.add_subcommand("dispersion", "emit the kernel curves over a parameter window");
    app.add_subcommand("double-points", "tabulate curve crossings with their flags");
    app.add_subcommand("branch", "continue the simple branch at fixed lambda1");
    app.add_subcommand("check", "run the invariant suites");

    CLI11_PARSE(app, argc, argv);

    hew::RunConfig cfg;
    if (!config_path.empty()) {
        try {
            cfg = hew::load_config(config_path);
        } catch (const hew::ConfigError& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return hew::kExitConfig;
        }
    }
    if (have_out) cfg.out_dir = overrides.out_dir;
    if (have_workers) cfg.workers = overrides.workers;
    if (have_seed) cfg.seed = overrides.seed;
    if (have_k) cfg.k = overrides.k;
    if (have_l) cfg.l = overrides.l;
    if (have_lambda1) cfg.lambda1 = overrides.lambda1;
    if (have_t_max) cfg.t_max = overrides.t_max;
    if (have_grid) cfg.grid = overrides.grid;
    if (!sheet_kind.empty()) cfg.sheet_kind = sheet_kind;
    if (!resume_path.empty()) cfg.resume_path = resume_path;
    if (!input_path.empty()) cfg.input_path = input_path;
    if (point_i >= 0) cfg.point_i = point_i;
    if (point_j >= 0) cfg.point_j = point_j;

    std::string command = app.get_subcommands().front()->get_name();
    return hew::run(command, cfg);
}
