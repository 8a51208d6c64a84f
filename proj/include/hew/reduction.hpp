#ifndef HEW_REDUCTION_HPP
#define HEW_REDUCTION_HPP

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "hew/energy.hpp"
#include "hew/series.hpp"
#include "hew/spectral.hpp"

namespace hew {

struct SingularParamError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoConvergenceError : std::runtime_error {
    std::vector<double> residual_history;
    NoConvergenceError(const std::string& msg, std::vector<double> history)
        : std::runtime_error(msg), residual_history(std::move(history)) {}
};

struct XiDiagnostics {
    int iterations = 0;
    double residual_norm = 0.0;
};

// Converged (w, xi_bar) pair after the inner elimination of the stretch.
struct ReducedState {
    TrigSeries w;
    TrigSeries xi_bar;
    XiDiagnostics xi_diag;
};

// The stretch Euler equation as a map:
//   M(w, xi, lambda1) = P{(E - grad E .)(nu, mu) + (lambda1/2) nu^2} + g rho w,
// with nu = Omega/(1+xi), mu = Omega sigma/(1+xi).
TrigSeries m_map(const TrigSeries& w, const TrigSeries& xi, double lambda1,
                 const StoredEnergyModel& model, double g, double rho,
                 const Discretization& disc);

// Newton solve of M(w, xi, lambda1) = 0 for xi given w, starting from the
// linearization xi0 = Cw' + g rho/(lambda1 - E11) w.
TrigSeries solve_xi(const TrigSeries& w, double lambda1, const StoredEnergyModel& model,
                    double g, double rho, const Discretization& disc,
                    XiDiagnostics* diag = nullptr);

TrigSeries nabla_I0(const TrigSeries& w, const TrigSeries& xi, const PhysicalParams& params,
                    const Discretization& disc);

// m0 with xi eliminated: (L[w]^{-1})* applied to the antiderivative of P(nabla I0).
TrigSeries m_bar(const TrigSeries& w, const PhysicalParams& params,
                 const StoredEnergyModel& model, const Discretization& disc,
                 TrigSeries* xi_out = nullptr);

// The reduced residual
//   F = P e2 + C{ int_0^tau P(m_bar + Omega e1 - lambda1 Omega^2/(1+xi_bar)) },
// with e_i = E_i(Omega/(1+xi_bar), Omega sigma/(1+xi_bar)).
TrigSeries residual_F(const TrigSeries& w, const PhysicalParams& params,
                      const StoredEnergyModel& model, const Discretization& disc,
                      ReducedState* state = nullptr);

double j_value(const TrigSeries& w, const TrigSeries& xi, const PhysicalParams& params,
               const StoredEnergyModel& model, const Discretization& disc);
double j0_value(const TrigSeries& w, const TrigSeries& xi, const PhysicalParams& params,
                const StoredEnergyModel& model, const Discretization& disc);

// Riesz representers (zero-mean projected) of d_w J0 and d_xi J0.
std::pair<TrigSeries, TrigSeries> j0_gradients(const TrigSeries& w, const TrigSeries& xi,
                                               const PhysicalParams& params,
                                               const StoredEnergyModel& model,
                                               const Discretization& disc);

// Central finite-difference Jacobian of the Galerkin residual in cosine
// coordinates; column j perturbs the coefficient of cos(j tau).
Eigen::MatrixXd jacobian_fd(const TrigSeries& w, const PhysicalParams& params,
                            const StoredEnergyModel& model, const Discretization& disc);

}  // namespace hew

#endif
