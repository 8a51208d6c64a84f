#ifndef HEW_CONFIG_HPP
#define HEW_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include "hew/bifurcation.hpp"

namespace hew {

// Configuration problem; the message names the offending field.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    double g = 9.81;
    double g_rho = 1.0;  // rho = g_rho / g
    CanonicalCoeffs energy;
    Discretization disc;

    double lambda1 = 5.0;
    double lambda2 = 6.81;

    int k = 1, l = 2;
    int k_max = 5, l_max = 5;  // double-points search range

    double t_max = 1e-2;
    int grid = 21;  // points per amplitude axis (symmetric about 0)

    double lambda1_min = 3.96, lambda1_max = 4.10;  // dispersion window
    double lambda2_min = 0.0, lambda2_max = 330.0;
    int curve_samples = 400;
    int curve_k_max = 7;

    std::string sheet_kind = "general";  // simple | special | general
    std::string resume_path;             // optional general-sheet resume file
    std::string input_path;              // stored sheet for `profile`
    int point_i = 0, point_j = 0;        // grid indices for `profile`
    int n_plot = 256;

    std::string out_dir = "out";
    int workers = 1;
    std::uint64_t seed = 0;
    int csv_coeffs = 8;

    PhysicalParams physical() const;
    StoredEnergyModel model() const;
    // Hypothesis and positivity validation; throws ConfigError naming the field.
    void validate() const;
};

RunConfig config_from_json(const std::string& text);
RunConfig load_config(const std::string& path);
std::string config_to_json(const RunConfig& cfg);

}  // namespace hew

#endif
