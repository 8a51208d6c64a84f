#include "hew/sheet_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace hew {

using json = nlohmann::ordered_json;

namespace {

json series_to_json(const TrigSeries& s) {
    json j;
    j["mean"] = s.mean;
    j["cos"] = json::array();
    j["sin"] = json::array();
    for (int n = 1; n <= s.modes(); ++n) {
        j["cos"].push_back(s.cosc(n));
        j["sin"].push_back(s.sinc(n));
    }
    return j;
}

TrigSeries series_from_json(const json& j) {
    const auto& c = j.at("cos");
    const auto& s = j.at("sin");
    if (c.size() != s.size()) throw CorruptFileError("series: cos/sin length mismatch");
    TrigSeries out(static_cast<int>(c.size()));
    out.mean = j.at("mean").get<double>();
    for (int n = 1; n <= out.modes(); ++n) {
        out.cosc(n) = c[n - 1].get<double>();
        out.sinc(n) = s[n - 1].get<double>();
    }
    return out;
}

json point_to_json(const BranchPoint& p) {
    json j;
    j["w"] = series_to_json(p.w);
    j["xi_bar"] = series_to_json(p.xi_bar);
    j["lambda1"] = p.lambda1;
    j["lambda2"] = p.lambda2;
    j["t1"] = p.t1;
    j["t2"] = p.t2;
    j["newton_iters"] = p.newton_iters;
    j["residual_norm"] = p.residual_norm;
    j["minimal_period_divisor"] = p.minimal_period_divisor;
    return j;
}

BranchPoint point_from_json(const json& j) {
    BranchPoint p;
    p.w = series_from_json(j.at("w"));
    p.xi_bar = series_from_json(j.at("xi_bar"));
    p.lambda1 = j.at("lambda1").get<double>();
    p.lambda2 = j.at("lambda2").get<double>();
    p.t1 = j.at("t1").get<double>();
    p.t2 = j.at("t2").get<double>();
    p.newton_iters = j.at("newton_iters").get<int>();
    p.residual_norm = j.at("residual_norm").get<double>();
    p.minimal_period_divisor = j.at("minimal_period_divisor").get<int>();
    return p;
}

const char* kind_name(Sheet::Kind k) {
    switch (k) {
        case Sheet::Kind::simple: return "simple";
        case Sheet::Kind::special_k: return "special_k";
        case Sheet::Kind::special_l: return "special_l";
        case Sheet::Kind::general: return "general";
    }
    return "simple";
}

Sheet::Kind kind_from_name(const std::string& name) {
    if (name == "simple") return Sheet::Kind::simple;
    if (name == "special_k") return Sheet::Kind::special_k;
    if (name == "special_l") return Sheet::Kind::special_l;
    if (name == "general") return Sheet::Kind::general;
    throw CorruptFileError("unknown sheet kind: " + name);
}

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

std::string sheet_to_json(const Sheet& sheet) {
    json j;
    j["schema"] = kSheetSchema;
    j["kind"] = kind_name(sheet.kind);
    j["k"] = sheet.k;
    j["l"] = sheet.l;
    j["lambda1_star"] = sheet.lambda1_star;
    j["lambda2_star"] = sheet.lambda2_star;
    j["axis1"] = sheet.axis1;
    j["axis2"] = sheet.axis2;
    j["params"] = {{"g", sheet.base_params.g},
                   {"rho", sheet.base_params.rho},
                   {"lambda1", sheet.base_params.lambda1},
                   {"lambda2", sheet.base_params.lambda2}};
    j["energy"] = {{"a", sheet.energy.a},
                   {"b", sheet.energy.b},
                   {"c3", sheet.energy.c3},
                   {"c4", sheet.energy.c4},
                   {"d1", sheet.energy.d1}};
    j["disc"] = {{"n_modes", sheet.disc.n_modes},
                 {"oversampling", sheet.disc.oversampling},
                 {"newton_tol", sheet.disc.newton_tol},
                 {"newton_max_iter", sheet.disc.newton_max_iter},
                 {"fd_step_scale", sheet.disc.fd_step_scale}};
    j["seed"] = sheet.seed;
    j["solved"] = json::array();
    j["points"] = json::array();
    for (size_t i = 0; i < sheet.points.size(); ++i) {
        j["solved"].push_back(sheet.solved[i] != 0);
        if (sheet.solved[i])
            j["points"].push_back(point_to_json(sheet.points[i]));
        else
            j["points"].push_back(nullptr);
    }
    return j.dump(2) + "\n";
}

Sheet sheet_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw CorruptFileError(std::string("sheet file is not valid JSON: ") + e.what());
    }
    try {
        std::string schema = j.at("schema").get<std::string>();
        if (schema != kSheetSchema)
            throw SchemaError("expected schema " + std::string(kSheetSchema) + ", found " +
                              schema);
        Sheet s;
        s.kind = kind_from_name(j.at("kind").get<std::string>());
        s.k = j.at("k").get<int>();
        s.l = j.at("l").get<int>();
        s.lambda1_star = j.at("lambda1_star").get<double>();
        s.lambda2_star = j.at("lambda2_star").get<double>();
        s.axis1 = j.at("axis1").get<std::vector<double>>();
        s.axis2 = j.at("axis2").get<std::vector<double>>();
        const auto& p = j.at("params");
        s.base_params.g = p.at("g").get<double>();
        s.base_params.rho = p.at("rho").get<double>();
        s.base_params.lambda1 = p.at("lambda1").get<double>();
        s.base_params.lambda2 = p.at("lambda2").get<double>();
        const auto& e = j.at("energy");
        s.energy.a = e.at("a").get<double>();
        s.energy.b = e.at("b").get<double>();
        s.energy.c3 = e.at("c3").get<double>();
        s.energy.c4 = e.at("c4").get<double>();
        s.energy.d1 = e.at("d1").get<double>();
        const auto& d = j.at("disc");
        s.disc.n_modes = d.at("n_modes").get<int>();
        s.disc.oversampling = d.at("oversampling").get<int>();
        s.disc.newton_tol = d.at("newton_tol").get<double>();
        s.disc.newton_max_iter = d.at("newton_max_iter").get<int>();
        s.disc.fd_step_scale = d.at("fd_step_scale").get<double>();
        s.seed = j.at("seed").get<std::uint64_t>();
        const auto& solved = j.at("solved");
        const auto& points = j.at("points");
        size_t expect = static_cast<size_t>(s.n1()) * s.n2();
        if (solved.size() != expect || points.size() != expect)
            throw CorruptFileError("sheet file: grid size does not match axes");
        s.allocate();
        for (size_t i = 0; i < expect; ++i) {
            s.solved[i] = solved[i].get<bool>() ? 1 : 0;
            if (s.solved[i]) s.points[i] = point_from_json(points[i]);
        }
        return s;
    } catch (const SchemaError&) {
        throw;
    } catch (const CorruptFileError&) {
        throw;
    } catch (const json::exception& e) {
        throw CorruptFileError(std::string("sheet file: ") + e.what());
    }
}

void save_sheet(const Sheet& sheet, const std::string& path) {
    write_text_file(path, sheet_to_json(sheet));
}

Sheet load_sheet(const std::string& path) { return sheet_from_json(read_text_file(path)); }

std::string sheet_to_csv(const Sheet& sheet, int n_coeffs) {
    std::ostringstream out;
    out << "i,j,t1,t2,lambda1,lambda2,residual_norm,newton_iters";
    for (int n = 1; n <= n_coeffs; ++n) out << ",a" << n;
    out << "\n";
    for (int i = 0; i < sheet.n1(); ++i)
        for (int j = 0; j < sheet.n2(); ++j) {
            if (!sheet.solved[sheet.index(i, j)]) continue;
            const BranchPoint& p = sheet.at(i, j);
            out << i << ',' << j << ',' << fmt17(p.t1) << ',' << fmt17(p.t2) << ','
                << fmt17(p.lambda1) << ',' << fmt17(p.lambda2) << ',' << fmt17(p.residual_norm)
                << ',' << p.newton_iters;
            for (int n = 1; n <= n_coeffs; ++n)
                out << ',' << fmt17(n <= p.w.modes() ? p.w.cosc(n) : 0.0);
            out << "\n";
        }
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << content;
    if (!f) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

}  // namespace hew
