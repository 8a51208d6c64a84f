#include "hew/run.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "hew/linear.hpp"
#include "hew/selfcheck.hpp"
#include "hew/sheet_io.hpp"
#include "hew/svg.hpp"
#include "json.hpp"

namespace hew {

namespace {

using json = nlohmann::ordered_json;

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json provenance(const RunConfig& cfg) {
    json j;
    j["tool"] = kToolVersion;
    j["config"] = json::parse(config_to_json(cfg));
    return j;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out_dir);
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

void write_failure_manifest(const RunConfig& cfg, const std::string& command,
                            const std::string& what) {
    json j = provenance(cfg);
    j["command"] = command;
    j["error"] = what;
    write_text_file(out_path(cfg, "failure.json"), j.dump(2) + "\n");
}

std::vector<double> symmetric_grid(double t_max, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = -t_max + 2.0 * t_max * i / (n - 1);
    g[(n - 1) / 2] = 0.0;  // exact zero at the centre
    return g;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = a + (b - a) * i / (n - 1);
    return g;
}

DoublePoint find_double_point(const RunConfig& cfg) {
    const StoredEnergyModel model = cfg.model();
    auto dps = double_points(cfg.k, cfg.l, cfg.g, cfg.g_rho, model.E11_rest(), model.E22_rest());
    if (dps.empty())
        throw RefusalError("no admissible double point for the requested mode pair");
    return dps.front();
}

const char* kCurveColors[] = {"#1f3fbf", "#bf1f1f", "#1f8f1f", "#8f1f8f",
                              "#bf7f1f", "#1f8f8f", "#5f5f5f", "#9f3f1f"};

int cmd_dispersion(const RunConfig& cfg) {
    const StoredEnergyModel model = cfg.model();
    double e11 = model.E11_rest(), e22 = model.E22_rest();

    std::vector<DispersionCurve> curves;
    for (int k = 1; k <= cfg.curve_k_max; ++k) {
        DispersionCurve c = curve_Ak(k, cfg.lambda1_min, cfg.lambda1_max, cfg.curve_samples,
                                     cfg.g, cfg.g_rho, e11, e22);
        std::erase_if(c.samples, [&](const auto& s) {
            return s[1] < cfg.lambda2_min || s[1] > cfg.lambda2_max;
        });
        curves.push_back(std::move(c));
    }

    std::ostringstream csv;
    csv << "k,lambda1,lambda2\n";
    for (const auto& c : curves)
        for (const auto& [l1, l2] : c.samples)
            csv << c.k << ',' << fmt17(l1) << ',' << fmt17(l2) << "\n";
    write_text_file(out_path(cfg, "dispersion.csv"), csv.str());

    json j = provenance(cfg);
    j["curves"] = json::array();
    for (const auto& c : curves) {
        json cj;
        cj["k"] = c.k;
        cj["x_minus"] = c.x_minus;
        cj["x_plus"] = c.x_plus;
        cj["n_samples"] = c.samples.size();
        j["curves"].push_back(cj);
    }
    write_text_file(out_path(cfg, "dispersion.json"), j.dump(2) + "\n");

    // Two panels: the full window and a zoom on the lower lambda2 band where
    // the curves separate. Axis scales are independent.
    Panel full, zoom;
    full.x_min = cfg.lambda1_min;
    full.x_max = cfg.lambda1_max;
    full.y_min = cfg.lambda2_min;
    full.y_max = cfg.lambda2_max;
    full.x_label = "lambda1";
    full.y_label = "lambda2";
    full.title = "linearized kernel curves";
    zoom = full;
    zoom.y_max = cfg.lambda2_min + (cfg.lambda2_max - cfg.lambda2_min) / 8.0;
    zoom.title = "zoom";
    for (const auto& c : curves) {
        Polyline ln;
        for (const auto& [l1, l2] : c.samples) ln.pts.push_back({l1, l2});
        ln.color = kCurveColors[(c.k - 1) % 8];
        ln.label = "k=" + std::to_string(c.k);
        full.lines.push_back(ln);
        zoom.lines.push_back(ln);
    }
    write_text_file(out_path(cfg, "dispersion.svg"), render_svg({full, zoom}));
    return kExitOk;
}

int cmd_double_points(const RunConfig& cfg) {
    const StoredEnergyModel model = cfg.model();
    double e11 = model.E11_rest(), e22 = model.E22_rest();

    std::ostringstream csv;
    csv << "k,l,lambda1,lambda2,resonant,nondegenerate\n";
    json j = provenance(cfg);
    j["double_points"] = json::array();
    for (int k = 1; k <= cfg.k_max; ++k)
        for (int l = k + 1; l <= cfg.l_max; ++l) {
            for (const auto& dp : double_points(k, l, cfg.g, cfg.g_rho, e11, e22)) {
                csv << k << ',' << l << ',' << fmt17(dp.lambda1) << ',' << fmt17(dp.lambda2)
                    << ',' << (dp.resonant ? 1 : 0) << ',' << (dp.nondegenerate ? 1 : 0)
                    << "\n";
                json dj;
                dj["k"] = k;
                dj["l"] = l;
                dj["lambda1"] = dp.lambda1;
                dj["lambda2"] = dp.lambda2;
                dj["resonant"] = dp.resonant;
                dj["nondegenerate"] = dp.nondegenerate;
                j["double_points"].push_back(dj);
            }
        }
    write_text_file(out_path(cfg, "double_points.csv"), csv.str());
    write_text_file(out_path(cfg, "double_points.json"), j.dump(2) + "\n");
    return kExitOk;
}

void write_sheet_artifacts(const RunConfig& cfg, const Sheet& sheet, const std::string& stem) {
    save_sheet(sheet, out_path(cfg, stem + ".json"));
    write_text_file(out_path(cfg, stem + ".csv"), sheet_to_csv(sheet, cfg.csv_coeffs));
    json j = provenance(cfg);
    j["sheet_file"] = stem + ".json";
    int solved = 0;
    for (char s : sheet.solved) solved += s != 0;
    j["solved_cells"] = solved;
    j["total_cells"] = sheet.points.size();
    write_text_file(out_path(cfg, stem + "_run.json"), j.dump(2) + "\n");
}

int cmd_branch(const RunConfig& cfg) {
    const StoredEnergyModel model = cfg.model();
    std::vector<double> t_grid = symmetric_grid(cfg.t_max, cfg.grid);
    PhysicalParams base = cfg.physical();
    Sheet sheet = simple_branch(cfg.k, cfg.lambda1, t_grid, base, model, cfg.disc);
    sheet.seed = cfg.seed;
    write_sheet_artifacts(cfg, sheet, "branch");
    return kExitOk;
}

int cmd_sheet(const RunConfig& cfg) {
    const StoredEnergyModel model = cfg.model();
    std::vector<double> t_grid = symmetric_grid(cfg.t_max, cfg.grid);
    PhysicalParams base = cfg.physical();

    Sheet sheet;
    if (cfg.sheet_kind == "simple") {
        sheet = simple_branch(cfg.k, cfg.lambda1, t_grid, base, model, cfg.disc);
    } else if (cfg.sheet_kind == "special") {
        DoublePoint dp = find_double_point(cfg);
        std::vector<double> l1_grid =
            linspace(dp.lambda1 * 0.98, dp.lambda1 * 1.02, cfg.grid);
        sheet = special_sheet(cfg.k, dp, t_grid, l1_grid, base, model, cfg.disc);
    } else {
        DoublePoint dp = find_double_point(cfg);
        Sheet resume;
        const Sheet* resume_ptr = nullptr;
        if (!cfg.resume_path.empty()) {
            resume = load_sheet(cfg.resume_path);
            resume_ptr = &resume;
        }
        sheet = general_sheet(dp, t_grid, t_grid, base, model, cfg.disc, cfg.workers,
                              resume_ptr);
    }
    sheet.seed = cfg.seed;
    write_sheet_artifacts(cfg, sheet, "sheet");
    return kExitOk;
}

int cmd_check(const RunConfig& cfg) {
    auto results = run_selfcheck(cfg);
    json j = provenance(cfg);
    j["checks"] = json::array();
    bool all = true;
    for (const auto& r : results) {
        std::cout << (r.pass ? "pass" : "FAIL") << "  " << r.name << "  (" << r.detail << ")\n";
        all = all && r.pass;
        json cj;
        cj["name"] = r.name;
        cj["pass"] = r.pass;
        cj["detail"] = r.detail;
        j["checks"].push_back(cj);
    }
    j["pass"] = all;
    write_text_file(out_path(cfg, "check.json"), j.dump(2) + "\n");
    return all ? kExitOk : kExitSolver;
}

int cmd_profile(const RunConfig& cfg) {
    if (cfg.input_path.empty())
        throw ConfigError("field 'input_path' is required for the profile command");
    Sheet sheet = load_sheet(cfg.input_path);
    if (cfg.point_i < 0 || cfg.point_i >= sheet.n1() || cfg.point_j < 0 ||
        cfg.point_j >= sheet.n2())
        throw ConfigError("fields 'point_i'/'point_j' are outside the stored grid");
    if (!sheet.solved[sheet.index(cfg.point_i, cfg.point_j)])
        throw ConfigError("requested grid point is not solved in the stored sheet");

    const BranchPoint& pt = sheet.at(cfg.point_i, cfg.point_j);
    PhysicalParams base = sheet.base_params;
    ProfileRecord prof = reconstruct_profile(pt, cfg.n_plot, base, sheet.disc);

    std::ostringstream csv;
    csv << "tau,x,y,nu,sigma\n";
    for (size_t i = 0; i < prof.tau.size(); ++i)
        csv << fmt17(prof.tau[i]) << ',' << fmt17(prof.x[i]) << ',' << fmt17(prof.y[i]) << ','
            << fmt17(prof.nu[i]) << ',' << fmt17(prof.sigma[i]) << "\n";
    write_text_file(out_path(cfg, "profile.csv"), csv.str());

    json j = provenance(cfg);
    j["lambda1"] = pt.lambda1;
    j["lambda2"] = pt.lambda2;
    j["t1"] = pt.t1;
    j["t2"] = pt.t2;
    j["wave_speed"] = prof.c;
    j["surface_speed"] = prof.c0;
    j["drift"] = prof.drift;
    write_text_file(out_path(cfg, "profile.json"), j.dump(2) + "\n");

    Panel panel;
    panel.x_label = "x";
    panel.y_label = "y";
    panel.title = "surface profile";
    double xmin = prof.x.front(), xmax = prof.x.front();
    double ymin = prof.y.front(), ymax = prof.y.front();
    Polyline ln;
    for (size_t i = 0; i < prof.x.size(); ++i) {
        ln.pts.push_back({prof.x[i], prof.y[i]});
        xmin = std::min(xmin, prof.x[i]);
        xmax = std::max(xmax, prof.x[i]);
        ymin = std::min(ymin, prof.y[i]);
        ymax = std::max(ymax, prof.y[i]);
    }
    double pad = 0.1 * (ymax - ymin) + 1e-6;
    panel.x_min = xmin;
    panel.x_max = xmax;
    panel.y_min = ymin - pad;
    panel.y_max = ymax + pad;
    panel.lines.push_back(ln);
    write_text_file(out_path(cfg, "profile.svg"), render_svg({panel}));
    return kExitOk;
}

}  // namespace

int run(const std::string& command, const RunConfig& cfg) {
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (command == "dispersion") return cmd_dispersion(cfg);
        if (command == "double-points") return cmd_double_points(cfg);
        if (command == "branch") return cmd_branch(cfg);
        if (command == "sheet") return cmd_sheet(cfg);
        if (command == "check") return cmd_check(cfg);
        if (command == "profile") return cmd_profile(cfg);
        std::cerr << "config error: unknown command '" << command << "'\n";
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const SchemaError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const CorruptFileError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        try {
            write_failure_manifest(cfg, command, e.what());
        } catch (const std::exception&) {
        }
        return kExitSolver;
    }
}

}  // namespace hew
