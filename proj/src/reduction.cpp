#include "hew/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hew {

namespace {

void require_regular_lambda1(double lambda1, const StoredEnergyModel& model) {
    double e11 = model.E11_rest();
    if (std::abs(lambda1 - e11) <= 1e-12 * (1.0 + std::abs(e11)))
        throw SingularParamError("lambda1 coincides with E11(1,0)");
}

struct XiGrids {
    CollocationGrid xi_g;
    CollocationGrid nu_g;  // Omega/(1+xi)
    CollocationGrid mu_g;  // Omega sigma/(1+xi)
};

XiGrids xi_grids(const SurfaceGeometry& geom, const TrigSeries& xi, const Discretization& disc) {
    int m = disc.grid_size();
    XiGrids x;
    x.xi_g = to_grid(xi, m);
    x.nu_g.samples.resize(m);
    x.mu_g.samples.resize(m);
    for (int j = 0; j < m; ++j) {
        if (std::abs(x.xi_g[j]) > 0.5)
            throw OutOfBallError("stretch variable: |xi| exceeds 1/2");
        double d = 1.0 + x.xi_g[j];
        x.nu_g[j] = geom.omega_g[j] / d;
        x.mu_g[j] = geom.omega_sigma_g[j] / d;
    }
    return x;
}

// M from precomputed geometry. Optionally reports the sup norm of the
// truncated residual on the grid.
TrigSeries m_map_geom(const SurfaceGeometry& geom, const TrigSeries& w, const TrigSeries& xi,
                      double lambda1, const StoredEnergyModel& model, double g, double rho,
                      const Discretization& disc, double* sup_out = nullptr) {
    int m = disc.grid_size();
    auto x = xi_grids(geom, xi, disc);
    std::vector<double> vals(m);
    for (int j = 0; j < m; ++j) {
        EnergyDerivs e = model.at(x.nu_g[j], x.mu_g[j]);
        vals[j] = e.E - x.nu_g[j] * e.E1 - x.mu_g[j] * e.E2 + 0.5 * lambda1 * x.nu_g[j] * x.nu_g[j];
    }
    TrigSeries out = project_zero_mean(from_grid(std::span<const double>(vals), disc.n_modes));
    TrigSeries grw = w;
    grw *= g * rho;
    out += grw;
    if (sup_out) *sup_out = out.sup_norm(m);
    return out;
}

TrigSeries xi_initial_guess(const TrigSeries& w, double lambda1, const StoredEnergyModel& model,
                            double g, double rho) {
    TrigSeries xi = hilbert(differentiate(w));
    TrigSeries t = w;
    t *= g * rho / (lambda1 - model.E11_rest());
    xi += t;
    xi.mean = 0.0;
    return xi;
}

TrigSeries solve_xi_geom(const SurfaceGeometry& geom, const TrigSeries& w, double lambda1,
                         const StoredEnergyModel& model, double g, double rho,
                         const Discretization& disc, XiDiagnostics* diag) {
    require_regular_lambda1(lambda1, model);
    int n = disc.n_modes;
    TrigSeries xi = xi_initial_guess(w, lambda1, model, g, rho).truncated(n);

    std::vector<double> history;
    double e11 = model.E11_rest();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
    bool have_jacobian = false;

    // Below the target tolerance the iteration keeps polishing toward the
    // rounding floor; stopping at the first sub-tolerance residual would leave
    // an O(tol) stretch error that dominates finite-difference Jacobians.
    const double floor = 1e-15 * (1.0 + std::abs(lambda1));
    TrigSeries best = xi;
    double best_rn = std::numeric_limits<double>::infinity();

    for (int iter = 0; iter < disc.newton_max_iter; ++iter) {
        double rn = 0.0;
        TrigSeries r = m_map_geom(geom, w, xi, lambda1, model, g, rho, disc, &rn);
        if (rn < best_rn) {
            best_rn = rn;
            best = xi;
        }
        bool flat = !history.empty() && rn > 0.25 * history.back();
        history.push_back(rn);
        if (best_rn <= floor || (best_rn <= disc.newton_tol && flat)) {
            if (diag) {
                diag->iterations = iter;
                diag->residual_norm = best_rn;
            }
            return best;
        }

        bool stalled = history.size() >= 2 && rn > 0.5 * history[history.size() - 2];
        if (!have_jacobian && !stalled) {
            // Constant-coefficient preconditioner from the rest-state
            // linearization d_xi M = (E11 - lambda1) Id.
            TrigSeries step = r;
            step *= -1.0 / (e11 - lambda1);
            xi += step;
            xi.mean = 0.0;
            continue;
        }

        if (!have_jacobian) {
            double h = disc.fd_step_scale * (1.0 + xi.l2_norm());
            Eigen::MatrixXd jac(n, n);
            for (int c = 0; c < n; ++c) {
                TrigSeries xp = xi, xm = xi;
                xp.a[c] += h;
                xm.a[c] -= h;
                TrigSeries rp = m_map_geom(geom, w, xp, lambda1, model, g, rho, disc);
                TrigSeries rm = m_map_geom(geom, w, xm, lambda1, model, g, rho, disc);
                for (int i = 0; i < n; ++i) jac(i, c) = (rp.a[i] - rm.a[i]) / (2.0 * h);
            }
            lu.compute(jac);
            have_jacobian = true;
        }

        Eigen::VectorXd rhs(n);
        for (int i = 0; i < n; ++i) rhs(i) = r.a[i];
        Eigen::VectorXd delta = lu.solve(rhs);
        for (int i = 0; i < n; ++i) xi.a[i] -= delta(i);
        xi.mean = 0.0;
    }
    if (best_rn <= disc.newton_tol) {
        if (diag) {
            diag->iterations = disc.newton_max_iter;
            diag->residual_norm = best_rn;
        }
        return best;
    }
    throw NoConvergenceError("solve_xi: Newton did not converge", history);
}

double quadratic_mean_term(const TrigSeries& w) {
    // (1/2pi) int w Cw' dtau
    return inner(w, hilbert(differentiate(w))) / (2.0 * M_PI);
}

double grid_integral(std::span<const double> vals) {
    double s = 0.0;
    for (double v : vals) s += v;
    return 2.0 * M_PI * s / static_cast<double>(vals.size());
}

}  // namespace

TrigSeries m_map(const TrigSeries& w, const TrigSeries& xi, double lambda1,
                 const StoredEnergyModel& model, double g, double rho,
                 const Discretization& disc) {
    auto geom = surface_geometry(w, disc);
    return m_map_geom(geom, w, xi, lambda1, model, g, rho, disc);
}

TrigSeries solve_xi(const TrigSeries& w, double lambda1, const StoredEnergyModel& model,
                    double g, double rho, const Discretization& disc, XiDiagnostics* diag) {
    auto geom = surface_geometry(w, disc);
    return solve_xi_geom(geom, w, lambda1, model, g, rho, disc, diag);
}

TrigSeries nabla_I0(const TrigSeries& w, const TrigSeries& xi, const PhysicalParams& params,
                    const Discretization& disc) {
    int m = disc.grid_size();
    int n = disc.n_modes;
    double g = params.g, rho = params.rho;

    TrigSeries wp = differentiate(w);
    TrigSeries cwp = hilbert(wp);
    double q = params.lambda2 + (g / M_PI) * inner(w, cwp) + 2.0 * g * rho;

    auto w_g = to_grid(w, m);
    auto wp_g = to_grid(wp, m);
    auto cwp_g = to_grid(cwp, m);
    std::vector<double> p1(m), p2(m);
    for (int j = 0; j < m; ++j) {
        p1[j] = w_g[j] * (1.0 + cwp_g[j]);  // w (1 + Cw')
        p2[j] = w_g[j] * wp_g[j];           // w w'
    }

    TrigSeries out = cwp;
    out *= q;
    TrigSeries t1 = from_grid(std::span<const double>(p1), n);
    t1 *= -g;
    out += t1;
    TrigSeries t2 = hilbert(from_grid(std::span<const double>(p2), n));
    t2 *= -g;
    out += t2;
    TrigSeries t3 = xi;
    t3.mean += 1.0;
    t3 *= -g * rho;
    out += t3;
    return out;
}

TrigSeries m_bar(const TrigSeries& w, const PhysicalParams& params,
                 const StoredEnergyModel& model, const Discretization& disc, TrigSeries* xi_out) {
    TrigSeries xi = solve_xi(w, params.lambda1, model, params.g, params.rho, disc);
    if (xi_out) *xi_out = xi;
    TrigSeries grad = project_zero_mean(nabla_I0(w, xi, params, disc));
    return ell_inv_adjoint(w, antiderivative0(grad), disc);
}

TrigSeries residual_F(const TrigSeries& w, const PhysicalParams& params,
                      const StoredEnergyModel& model, const Discretization& disc,
                      ReducedState* state) {
    require_regular_lambda1(params.lambda1, model);
    int m = disc.grid_size();
    int n = disc.n_modes;

    auto geom = surface_geometry(w, disc);
    XiDiagnostics xd;
    TrigSeries xi = solve_xi_geom(geom, w, params.lambda1, model, params.g, params.rho, disc, &xd);
    auto x = xi_grids(geom, xi, disc);

    std::vector<double> e1_g(m), e2_g(m);
    for (int j = 0; j < m; ++j) {
        EnergyDerivs e = model.at(x.nu_g[j], x.mu_g[j]);
        e1_g[j] = e.E1;
        e2_g[j] = e.E2;
    }

    TrigSeries grad = project_zero_mean(nabla_I0(w, xi, params, disc));
    TrigSeries mb = ell_inv_adjoint(w, antiderivative0(grad), disc);
    auto mb_g = to_grid(mb, m);

    std::vector<double> innerv(m);
    for (int j = 0; j < m; ++j) {
        double om = geom.omega_g[j];
        innerv[j] = mb_g[j] + om * e1_g[j] - params.lambda1 * om * om / (1.0 + x.xi_g[j]);
    }
    TrigSeries inner_s = project_zero_mean(from_grid(std::span<const double>(innerv), n));
    TrigSeries out = hilbert(antiderivative0(inner_s));
    out += project_zero_mean(from_grid(std::span<const double>(e2_g), n));

    if (state) {
        state->w = w;
        state->xi_bar = xi;
        state->xi_diag = xd;
    }
    return out;
}

double j_value(const TrigSeries& w, const TrigSeries& xi, const PhysicalParams& params,
               const StoredEnergyModel& model, const Discretization& disc) {
    int m = disc.grid_size();
    auto geom = surface_geometry(w, disc);
    auto x = xi_grids(geom, xi, disc);
    auto wp = differentiate(w);
    auto cwp = hilbert(wp);
    auto w_g = to_grid(w, m);
    auto cwp_g = to_grid(cwp, m);

    double kinetic_fluid = 0.5 * params.lambda2 * inner(w, cwp);

    std::vector<double> grav(m), elastic(m), kinetic_mem(m), grav_mem(m);
    for (int j = 0; j < m; ++j) {
        double om = geom.omega_g[j];
        double d = 1.0 + x.xi_g[j];
        grav[j] = w_g[j] * w_g[j] * (1.0 + cwp_g[j]);
        elastic[j] = d * model.at(x.nu_g[j], x.mu_g[j]).E;
        kinetic_mem[j] = om * om / d;
        grav_mem[j] = w_g[j] * d;
    }
    return kinetic_fluid - 0.5 * params.g * grid_integral(grav) - grid_integral(elastic) +
           0.5 * params.lambda1 * grid_integral(kinetic_mem) -
           params.g * params.rho * grid_integral(grav_mem);
}

double j0_value(const TrigSeries& w, const TrigSeries& xi, const PhysicalParams& params,
                const StoredEnergyModel& model, const Discretization& disc) {
    double k = quadratic_mean_term(w) + params.rho;
    return j_value(w, xi, params, model, disc) + params.g * M_PI * k * k;
}

std::pair<TrigSeries, TrigSeries> j0_gradients(const TrigSeries& w, const TrigSeries& xi,
                                               const PhysicalParams& params,
                                               const StoredEnergyModel& model,
                                               const Discretization& disc) {
    int m = disc.grid_size();
    int n = disc.n_modes;
    double g = params.g, rho = params.rho, l1 = params.lambda1;

    auto geom = surface_geometry(w, disc);
    auto x = xi_grids(geom, xi, disc);

    std::vector<double> e1_g(m), e2_g(m), dxi(m);
    for (int j = 0; j < m; ++j) {
        EnergyDerivs e = model.at(x.nu_g[j], x.mu_g[j]);
        e1_g[j] = e.E1;
        e2_g[j] = e.E2;
        dxi[j] = -(e.E - x.nu_g[j] * e.E1 - x.mu_g[j] * e.E2 + 0.5 * l1 * x.nu_g[j] * x.nu_g[j] +
                   g * rho * geom.w_g[j]);
    }
    TrigSeries repr_xi = project_zero_mean(from_grid(std::span<const double>(dxi), n));

    // First-order terms of d_w J0 acting directly on h.
    TrigSeries wp = differentiate(w);
    TrigSeries cwp = hilbert(wp);
    double kq = quadratic_mean_term(w) + rho;
    std::vector<double> p1(m), p2(m);
    auto w_g = geom.w_g;
    auto wp_g = geom.wp_g;
    auto cwp_g = geom.cwp_g;
    for (int j = 0; j < m; ++j) {
        p1[j] = w_g[j] * (1.0 + cwp_g[j]);
        p2[j] = w_g[j] * wp_g[j];
    }
    TrigSeries a_term = cwp;
    a_term *= params.lambda2 + 2.0 * g * kq;
    TrigSeries t1 = from_grid(std::span<const double>(p1), n);
    t1 *= -g;
    a_term += t1;
    TrigSeries t2 = hilbert(from_grid(std::span<const double>(p2), n));
    t2 *= -g;
    a_term += t2;
    TrigSeries t3 = xi;
    t3 *= -g * rho;
    a_term += t3;  // constant -g rho dropped by the final projection

    // Terms that act through L[w](h'): with G = (lambda1 nu - e1) Omega + C(e2'),
    // their adjoint contribution is -d/dtau { G w'/Omega^2 - C(G (1+Cw')/Omega^2) }.
    TrigSeries e2s = from_grid(std::span<const double>(e2_g), n);
    auto ce2p_g = to_grid(hilbert(differentiate(e2s)), m);
    std::vector<double> q1(m), q2(m);
    for (int j = 0; j < m; ++j) {
        double om = geom.omega_g[j];
        double gg = (l1 * x.nu_g[j] - e1_g[j]) * om + ce2p_g[j];
        double om2 = om * om;
        q1[j] = gg * wp_g[j] / om2;
        q2[j] = gg * (1.0 + cwp_g[j]) / om2;
    }
    TrigSeries gw = from_grid(std::span<const double>(q1), n);
    gw -= hilbert(from_grid(std::span<const double>(q2), n));
    TrigSeries repr_w = project_zero_mean(a_term);
    repr_w -= differentiate(gw);

    return {repr_w, repr_xi};
}

Eigen::MatrixXd jacobian_fd(const TrigSeries& w, const PhysicalParams& params,
                            const StoredEnergyModel& model, const Discretization& disc) {
    int n = disc.n_modes;
    // Fourth-order stencil: the cubic truncation term grows like the cube of
    // the mode number and would pollute the off-diagonal at second order.
    // The wide step then costs ~h^4 in truncation while damping the
    // rounding-floor noise of the inner stretch solves, which scales as 1/h.
    double h = 10.0 * disc.fd_step_scale * (1.0 + w.l2_norm());
    Eigen::MatrixXd jac(n, n);
    TrigSeries base = w.truncated(n);
    for (int c = 0; c < n; ++c) {
        auto at = [&](double step) {
            TrigSeries ws = base;
            ws.a[c] += step;
            return residual_F(ws, params, model, disc);
        };
        TrigSeries r1p = at(h), r1m = at(-h), r2p = at(2.0 * h), r2m = at(-2.0 * h);
        for (int i = 0; i < n; ++i)
            jac(i, c) =
                (8.0 * (r1p.a[i] - r1m.a[i]) - (r2p.a[i] - r2m.a[i])) / (12.0 * h);
    }
    return jac;
}

}  // namespace hew
