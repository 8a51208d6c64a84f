#ifndef HEW_BIFURCATION_HPP
#define HEW_BIFURCATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "hew/linear.hpp"

namespace hew {

// Newton iterate left the validity ball; the caller should retry with a
// smaller amplitude.
struct BallExitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested construction is outside the theory (resonant or degenerate
// double point).
struct RefusalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BranchPoint {
    TrigSeries w;
    TrigSeries xi_bar;
    double lambda1 = 0, lambda2 = 0;
    double t1 = 0, t2 = 0;  // kernel amplitudes a_k(w), a_l(w)
    int newton_iters = 0;
    double residual_norm = 0;
    int minimal_period_divisor = 0;
};

struct Sheet {
    enum class Kind { simple, special_k, special_l, general };
    Kind kind = Kind::simple;
    int k = 0, l = 0;
    double lambda1_star = 0, lambda2_star = 0;
    std::vector<double> axis1;  // t (or t1) grid
    std::vector<double> axis2;  // lambda1 grid (simple/special) or t2 grid (general)
    std::vector<BranchPoint> points;  // row-major axis1 x axis2
    std::vector<char> solved;
    PhysicalParams base_params;  // g and rho; lambda fields are per-point
    CanonicalCoeffs energy;
    Discretization disc;
    std::uint64_t seed = 0;

    int n1() const { return static_cast<int>(axis1.size()); }
    int n2() const { return static_cast<int>(axis2.size()); }
    int index(int i, int j) const { return i * n2() + j; }
    BranchPoint& at(int i, int j) { return points[index(i, j)]; }
    const BranchPoint& at(int i, int j) const { return points[index(i, j)]; }
    void allocate() {
        points.assign(static_cast<size_t>(n1()) * n2(), BranchPoint{});
        solved.assign(points.size(), 0);
    }
};

struct AmplitudeConstraint {
    int mode = 1;
    double target = 0;
};

// Amplitude functional a_j(w) = (1/pi) int_0^{2pi} w cos(j tau) dtau.
double amplitude(const TrigSeries& w, int mode);

// gcd of the cosine modes with amplitude above the activity threshold;
// 0 for the trivial solution.
int minimal_period_divisor(const TrigSeries& w, double threshold = 1e-9);

std::vector<int> all_modes(int n_modes);
std::vector<int> multiples_of(int k, int n_modes);

// Newton on {Galerkin F = 0 on the given modes; a_j(w) = t_j}, with the
// cosine coefficients on `modes` plus the freed lambda components as unknowns.
BranchPoint solve_augmented(const std::vector<int>& modes,
                            const std::vector<AmplitudeConstraint>& constraints,
                            bool free_lambda1, bool free_lambda2, const TrigSeries& w0,
                            double lambda1, double lambda2, const PhysicalParams& base,
                            const StoredEnergyModel& model, const Discretization& disc);

// Continuation in t of the simple-eigenvalue branch at fixed lambda1
// (constraint a_k = t, lambda2 free).
Sheet simple_branch(int k, double lambda1, const std::vector<double>& t_grid,
                    const PhysicalParams& base, const StoredEnergyModel& model,
                    const Discretization& disc, bool free_lambda1_instead = false,
                    double fixed_lambda2 = 0.0);

// Same continuation restricted to the Galerkin space Z_k (modes k, 2k, ...),
// over a grid of lambda1 values around a double point.
Sheet special_sheet(int k, const DoublePoint& dp, const std::vector<double>& t_grid,
                    const std::vector<double>& lambda1_grid, const PhysicalParams& base,
                    const StoredEnergyModel& model, const Discretization& disc);

// Two-parameter sheet through a nonresonant nondegenerate double point:
// constraints a_k = t1, a_l = t2 with both lambda components free.
// Cells are solved in deterministic wavefront order (increasing |t1|+|t2|);
// cells of equal level may be solved by parallel workers. If `resume_from`
// is given, its solved cells are reused verbatim. Per-cell solver failures
// are collected in `failures` (when non-null) instead of thrown.
Sheet general_sheet(const DoublePoint& dp, const std::vector<double>& t1_grid,
                    const std::vector<double>& t2_grid, const PhysicalParams& base,
                    const StoredEnergyModel& model, const Discretization& disc, int workers = 1,
                    const Sheet* resume_from = nullptr,
                    std::vector<std::string>* failures = nullptr);

struct PhiPsi {
    double phi_k = 0, phi_l = 0;
    double psi_k = 0, psi_l = 0;
};

// Lyapunov-Schmidt diagnostics at a double point: solves the auxiliary
// equation on the complement modes with a_k = t1, a_l = t2 fixed, projects
// the remaining residual onto cos(k tau), cos(l tau), and desingularizes
// Psi_k = Phi_k/t1, Psi_l = Phi_l/t2 (divided differences at +-eps_div when
// the amplitude vanishes).
PhiPsi phi_psi_eval(double t1, double t2, double lambda1, double lambda2, const DoublePoint& dp,
                    const PhysicalParams& base, const StoredEnergyModel& model,
                    const Discretization& disc, double eps_div = 1e-5);

// Single-mode bifurcation function Phi(t, lambda) at a simple point.
double phi_simple(double t, int k, double lambda1, double lambda2, const PhysicalParams& base,
                  const StoredEnergyModel& model, const Discretization& disc);

struct SecondaryReport {
    bool pass = true;
    std::vector<std::string> notes;
    double max_lambda_gap = 0;
    double max_w_gap = 0;
};

// Edge agreement between the general sheet and the two special sheets plus
// interior symmetry breaking.
SecondaryReport secondary_check(const Sheet& general, const Sheet& special_k,
                                const Sheet& special_l, double tol = 1e-8);

struct ProfileRecord {
    std::vector<double> tau, x, y, nu, sigma;
    double c = 0, c0 = 0, drift = 0;
};

ProfileRecord reconstruct_profile(const BranchPoint& point, int n_plot,
                                  const PhysicalParams& base, const Discretization& disc);

}  // namespace hew

#endif
