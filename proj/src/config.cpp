#include "hew/config.hpp"

#include <sstream>

#include "hew/sheet_io.hpp"

#include "json.hpp"

namespace hew {

using json = nlohmann::ordered_json;

namespace {

template <typename T>
void read_field(const json& j, const char* name, T& out) {
    if (!j.contains(name)) return;
    try {
        out = j.at(name).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("field '") + name + "' has the wrong type");
    }
}

}  // namespace

PhysicalParams RunConfig::physical() const {
    PhysicalParams p;
    p.g = g;
    p.rho = g_rho / g;
    p.lambda1 = lambda1;
    p.lambda2 = lambda2;
    return p;
}

StoredEnergyModel RunConfig::model() const {
    return make_canonical_energy(energy.a, energy.b, energy.c3, energy.c4, energy.d1);
}

void RunConfig::validate() const {
    if (!(g > 0)) throw ConfigError("field 'g' must be positive");
    if (!(g_rho > 0)) throw ConfigError("field 'g_rho' must be positive");
    if (!(lambda1 > 0)) throw ConfigError("field 'lambda1' must be positive");
    if (!(lambda2 > 0)) throw ConfigError("field 'lambda2' must be positive");
    if (!(t_max > 0)) throw ConfigError("field 't_max' must be positive");
    if (grid < 3 || grid % 2 == 0)
        throw ConfigError("field 'grid' must be an odd count >= 3 so the axes pass through 0");
    if (k < 1) throw ConfigError("field 'k' must be a positive mode number");
    if (l < 1) throw ConfigError("field 'l' must be a positive mode number");
    if (workers < 1) throw ConfigError("field 'workers' must be at least 1");
    if (curve_samples < 2) throw ConfigError("field 'curve_samples' must be at least 2");
    if (n_plot < 8) throw ConfigError("field 'n_plot' must be at least 8");
    if (sheet_kind != "simple" && sheet_kind != "special" && sheet_kind != "general")
        throw ConfigError("field 'sheet_kind' must be simple, special, or general");
    try {
        disc.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("field 'disc': ") + e.what());
    }

    StoredEnergyModel m = model();
    ValidationReport rep = validate_hypotheses(m);
    if (!rep.pass) {
        std::ostringstream msg;
        msg << "field 'energy': stored-energy hypotheses fail:";
        for (const auto& issue : rep.issues) msg << " " << issue.what << ";";
        throw ConfigError(msg.str());
    }
    try {
        physical().validate(m);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("physical parameters: ") + e.what());
    }
}

RunConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    RunConfig c;
    read_field(j, "g", c.g);
    read_field(j, "g_rho", c.g_rho);
    if (j.contains("energy")) {
        const json& e = j.at("energy");
        read_field(e, "a", c.energy.a);
        read_field(e, "b", c.energy.b);
        read_field(e, "c3", c.energy.c3);
        read_field(e, "c4", c.energy.c4);
        read_field(e, "d1", c.energy.d1);
    }
    if (j.contains("disc")) {
        const json& d = j.at("disc");
        read_field(d, "n_modes", c.disc.n_modes);
        read_field(d, "oversampling", c.disc.oversampling);
        read_field(d, "newton_tol", c.disc.newton_tol);
        read_field(d, "newton_max_iter", c.disc.newton_max_iter);
        read_field(d, "fd_step_scale", c.disc.fd_step_scale);
    }
    read_field(j, "lambda1", c.lambda1);
    read_field(j, "lambda2", c.lambda2);
    read_field(j, "k", c.k);
    read_field(j, "l", c.l);
    read_field(j, "k_max", c.k_max);
    read_field(j, "l_max", c.l_max);
    read_field(j, "t_max", c.t_max);
    read_field(j, "grid", c.grid);
    read_field(j, "lambda1_min", c.lambda1_min);
    read_field(j, "lambda1_max", c.lambda1_max);
    read_field(j, "lambda2_min", c.lambda2_min);
    read_field(j, "lambda2_max", c.lambda2_max);
    read_field(j, "curve_samples", c.curve_samples);
    read_field(j, "curve_k_max", c.curve_k_max);
    read_field(j, "sheet_kind", c.sheet_kind);
    read_field(j, "resume_path", c.resume_path);
    read_field(j, "input_path", c.input_path);
    read_field(j, "point_i", c.point_i);
    read_field(j, "point_j", c.point_j);
    read_field(j, "n_plot", c.n_plot);
    read_field(j, "out_dir", c.out_dir);
    read_field(j, "workers", c.workers);
    read_field(j, "seed", c.seed);
    read_field(j, "csv_coeffs", c.csv_coeffs);
    return c;
}

RunConfig load_config(const std::string& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
    return config_from_json(text);
}

std::string config_to_json(const RunConfig& c) {
    json j;
    j["g"] = c.g;
    j["g_rho"] = c.g_rho;
    j["energy"] = {{"a", c.energy.a},
                   {"b", c.energy.b},
                   {"c3", c.energy.c3},
                   {"c4", c.energy.c4},
                   {"d1", c.energy.d1}};
    j["disc"] = {{"n_modes", c.disc.n_modes},
                 {"oversampling", c.disc.oversampling},
                 {"newton_tol", c.disc.newton_tol},
                 {"newton_max_iter", c.disc.newton_max_iter},
                 {"fd_step_scale", c.disc.fd_step_scale}};
    j["lambda1"] = c.lambda1;
    j["lambda2"] = c.lambda2;
    j["k"] = c.k;
    j["l"] = c.l;
    j["k_max"] = c.k_max;
    j["l_max"] = c.l_max;
    j["t_max"] = c.t_max;
    j["grid"] = c.grid;
    j["lambda1_min"] = c.lambda1_min;
    j["lambda1_max"] = c.lambda1_max;
    j["lambda2_min"] = c.lambda2_min;
    j["lambda2_max"] = c.lambda2_max;
    j["curve_samples"] = c.curve_samples;
    j["curve_k_max"] = c.curve_k_max;
    j["sheet_kind"] = c.sheet_kind;
    j["resume_path"] = c.resume_path;
    j["input_path"] = c.input_path;
    j["point_i"] = c.point_i;
    j["point_j"] = c.point_j;
    j["n_plot"] = c.n_plot;
    j["out_dir"] = c.out_dir;
    j["workers"] = c.workers;
    j["seed"] = c.seed;
    j["csv_coeffs"] = c.csv_coeffs;
    return j.dump(2) + "\n";
}

}  // namespace hew
