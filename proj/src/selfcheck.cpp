#include "hew/selfcheck.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "hew/linear.hpp"
#include "hew/reduction.hpp"

namespace hew {

namespace {

std::string fmt_val(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

TrigSeries random_even(std::mt19937_64& rng, int n_modes, double scale) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    TrigSeries w(n_modes);
    for (int n = 1; n <= n_modes; ++n) w.cosc(n) = scale * u(rng) / (n * n);
    return w;
}

TrigSeries random_series(std::mt19937_64& rng, int n_modes, double scale) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    TrigSeries w(n_modes);
    w.mean = scale * u(rng);
    for (int n = 1; n <= n_modes; ++n) {
        w.cosc(n) = scale * u(rng) / (n * n);
        w.sinc(n) = scale * u(rng) / (n * n);
    }
    return w;
}

}  // namespace

std::vector<CheckResult> run_selfcheck(const RunConfig& cfg) {
    std::vector<CheckResult> out;
    std::mt19937_64 rng(cfg.seed);
    const Discretization disc = cfg.disc;
    const PhysicalParams params = cfg.physical();
    const StoredEnergyModel model = cfg.model();

    auto add = [&out](const std::string& name, double worst, double tol) {
        out.push_back({name, worst <= tol, "worst " + fmt_val(worst) + ", tol " + fmt_val(tol)});
    };

    // Conjugation: C^2 = -P and skew-adjointness of C.
    {
        double worst = 0;
        for (int rep = 0; rep < 8; ++rep) {
            TrigSeries u = random_series(rng, disc.n_modes, 1.0);
            TrigSeries v = random_series(rng, disc.n_modes, 1.0);
            TrigSeries cc = hilbert(hilbert(u)) + project_zero_mean(u);
            worst = std::max(worst, cc.coeff_sup_norm());
            worst = std::max(worst, std::abs(inner(hilbert(u), v) + inner(u, hilbert(v))));
        }
        add("conjugation identities", worst, 1e-11);
    }

    // Derivative and antiderivative invert each other on zero-mean input.
    {
        double worst = 0;
        for (int rep = 0; rep < 8; ++rep) {
            TrigSeries u = project_zero_mean(random_series(rng, disc.n_modes, 1.0));
            TrigSeries r = differentiate(antiderivative0(u)) - u;
            worst = std::max(worst, r.coeff_sup_norm());
        }
        add("antiderivative inversion", worst, 1e-12);
    }

    // Stored-energy derivatives against central differences.
    {
        std::uniform_real_distribution<double> unu(0.5, 2.0), umu(-2.0, 2.0);
        double worst = 0, h = 1e-6;
        for (int rep = 0; rep < 32; ++rep) {
            double nu = unu(rng), mu = umu(rng);
            EnergyDerivs d = model.at(nu, mu);
            double fd1 = (model.at(nu + h, mu).E - model.at(nu - h, mu).E) / (2 * h);
            double fd2 = (model.at(nu, mu + h).E - model.at(nu, mu - h).E) / (2 * h);
            worst = std::max(worst, std::abs(fd1 - d.E1) + std::abs(fd2 - d.E2));
        }
        add("energy derivative consistency", worst, 1e-6);
    }

    // L[w] inverse-adjoint identity <L u, (L^{-1})* v> reduces to <u, v>
    // after the substitution v = L u at w = 0 (where L = C on zero-mean input).
    {
        double worst = 0;
        TrigSeries zero(disc.n_modes);
        for (int rep = 0; rep < 4; ++rep) {
            TrigSeries u = project_zero_mean(random_series(rng, disc.n_modes, 1.0));
            TrigSeries r = ell_apply(zero, u, disc) - hilbert(u);
            worst = std::max(worst, r.coeff_sup_norm());
        }
        add("flat-surface linearized operator", worst, 1e-12);
    }

    // Trivial solution: F(0, lambda) = 0 and the stretch solve returns 0.
    {
        TrigSeries zero(disc.n_modes);
        TrigSeries f = residual_F(zero, params, model, disc);
        TrigSeries xi = solve_xi(zero, params.lambda1, model, params.g, params.rho, disc);
        add("trivial residual", std::max(f.coeff_sup_norm(), xi.coeff_sup_norm()), 1e-12);
    }

    // Functional gradients against central differences.
    {
        double worst = 0;
        for (int rep = 0; rep < 3; ++rep) {
            TrigSeries w = random_even(rng, disc.n_modes, 2e-3);
            TrigSeries xi = random_even(rng, disc.n_modes, 2e-3);
            TrigSeries hw = project_zero_mean(random_even(rng, disc.n_modes, 1.0));
            TrigSeries hx = project_zero_mean(random_even(rng, disc.n_modes, 1.0));
            auto [gw, gx] = j0_gradients(w, xi, params, model, disc);
            double h = 1e-6;
            double fdw = (j0_value(w + h * hw, xi, params, model, disc) -
                          j0_value(w - h * hw, xi, params, model, disc)) /
                         (2 * h);
            double fdx = (j0_value(w, xi + h * hx, params, model, disc) -
                          j0_value(w, xi - h * hx, params, model, disc)) /
                         (2 * h);
            double sw = std::abs(fdw) + 1.0, sx = std::abs(fdx) + 1.0;
            worst = std::max(worst, std::abs(inner(gw, hw) - fdw) / sw);
            worst = std::max(worst, std::abs(inner(gx, hx) - fdx) / sx);
        }
        add("functional gradient consistency", worst, 1e-6);
    }

    // Dispersion identity along the curve lambda2 = f_k(lambda1).
    {
        double e11 = model.E11_rest(), e22 = model.E22_rest();
        std::uniform_real_distribution<double> ul(e11 + 0.5, e11 + 2.0);
        double worst = 0;
        for (int rep = 0; rep < 20; ++rep) {
            double l1 = ul(rng);
            for (int k = 1; k <= 10; ++k) {
                double l2 = f_k(k, l1, params.g, params.g_rho(), e11, e22);
                double r = dispersion_lhs(k, l1, l2, params.g, params.g_rho(), e11, e22);
                worst = std::max(worst, std::abs(r) / (1.0 + e22 * std::pow(k, 4)));
            }
        }
        add("dispersion identity", worst, 1e-12);
    }

    return out;
}

}  // namespace hew
