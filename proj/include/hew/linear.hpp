#ifndef HEW_LINEAR_HPP
#define HEW_LINEAR_HPP

#include <array>
#include <vector>

#include "hew/energy.hpp"
#include "hew/reduction.hpp"

namespace hew {

struct InternalConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One curve A_k: lambda2 = f_k(lambda1) on the admissible lambda1 intervals
// (0, X_k^-) and (E11, X_k^+).
struct DispersionCurve {
    int k = 0;
    std::vector<std::array<double, 2>> samples;  // (lambda1, lambda2)
    double x_minus = 0, x_plus = 0;
};

struct DoublePoint {
    int k = 0, l = 0;
    double lambda1 = 0, lambda2 = 0;
    bool nondegenerate = false;
    bool resonant = false;
};

struct PkRoots {
    double x_minus = 0, x_plus = 0, discriminant = 0;
};

struct NondegeneracyResult {
    bool algebraic = false;   // (g rho/(lambda1*-E11))^2 != kl
    bool via_slopes = false;  // f_k'(lambda1*) != f_l'(lambda1*)
};

// Left-hand side of the dispersion relation:
//   E22 k^4 - lambda1 k^2 - lambda2 k + g + (g rho)^2/(lambda1 - E11).
double dispersion_lhs(int k, double lambda1, double lambda2, double g, double g_rho, double e11,
                      double e22);
double dispersion_lhs(int k, const PhysicalParams& p, const StoredEnergyModel& m);

// f_k(lambda1) = E22 k^3 - lambda1 k + (1/k)(g + (g rho)^2/(lambda1 - E11))
double f_k(int k, double lambda1, double g, double g_rho, double e11, double e22);
double f_k_prime(int k, double lambda1, double g_rho, double e11, double e22);

PkRoots pk_roots(int k, double g, double g_rho, double e11, double e22);

// All modes k in [1, k_max] on the kernel of the linearization at lambda.
// At most two by the quartic-versus-line argument; more is an internal error.
std::vector<int> kernel_modes(const PhysicalParams& p, const StoredEnergyModel& m,
                              int k_max = 64);

DispersionCurve curve_Ak(int k, double lambda1_min, double lambda1_max, int n_samples, double g,
                         double g_rho, double e11, double e22);

// Crossings of A_k and A_l: roots of q_{k,l} with lambda2 = h_{k,l}(lambda1) > 0.
std::vector<DoublePoint> double_points(int k, int l, double g, double g_rho, double e11,
                                       double e22);

double h_kl(int k, int l, double lambda1, double e22);

NondegeneracyResult nondegeneracy(int k, int l, double lambda1_star, double g, double g_rho,
                                  double e11, double e22);

// Diagonal coefficient of d_w F(0,lambda) on cos(j tau); equals
// -dispersion_lhs(j)/j^2.
double linearized_diagonal(int j, double lambda1, double lambda2, double g, double g_rho,
                           double e11, double e22);
double linearized_diagonal(int j, const PhysicalParams& p, const StoredEnergyModel& m);

}  // namespace hew

#endif
