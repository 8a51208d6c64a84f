#include "hew/spectral.hpp"

#include <utility>

namespace hew {

SurfaceGeometry surface_geometry(const TrigSeries& w, const Discretization& disc) {
    int m = disc.grid_size();
    int n = disc.n_modes;

    TrigSeries wp = differentiate(w);
    TrigSeries cwp = hilbert(wp);
    auto wp_g = to_grid(wp, m);
    auto cwp_g = to_grid(cwp, m);

    std::vector<double> om(m);
    for (int j = 0; j < m; ++j) {
        double t = 1.0 + cwp_g[j];
        om[j] = std::sqrt(wp_g[j] * wp_g[j] + t * t);
        if (om[j] < 0.5 || om[j] > 2.0)
            throw OutOfBallError("surface_geometry: Omega(w) outside [1/2, 2]");
    }

    SurfaceGeometry geom;
    geom.omega = from_grid(std::span<const double>(om), n);
    geom.omega_g = to_grid(geom.omega, m);

    // sigma = -(1/Omega) C(Omega'/Omega)
    TrigSeries omp = differentiate(geom.omega);
    auto omp_g = to_grid(omp, m);
    std::vector<double> ratio(m);
    for (int j = 0; j < m; ++j) ratio[j] = omp_g[j] / geom.omega_g[j];
    TrigSeries cr = hilbert(from_grid(std::span<const double>(ratio), n));
    auto cr_g = to_grid(cr, m);
    std::vector<double> sg(m);
    for (int j = 0; j < m; ++j) {
        sg[j] = -cr_g[j] / geom.omega_g[j];
        if (std::abs(sg[j]) > 1.0)
            throw OutOfBallError("surface_geometry: |sigma(w)| exceeds 1");
    }
    geom.sigma = from_grid(std::span<const double>(sg), n);

    auto sig_g = to_grid(geom.sigma, m);
    geom.omega_sigma_g.samples.resize(m);
    for (int j = 0; j < m; ++j) geom.omega_sigma_g[j] = geom.omega_g[j] * sig_g[j];

    geom.w_g = to_grid(w, m);
    geom.wp_g = std::move(wp_g);
    geom.cwp_g = std::move(cwp_g);
    return geom;
}

std::pair<TrigSeries, TrigSeries> omega_sigma(const TrigSeries& w, const Discretization& disc) {
    auto geom = surface_geometry(w, disc);
    return {std::move(geom.omega), std::move(geom.sigma)};
}

TrigSeries ell_apply(const TrigSeries& w, const TrigSeries& u, const Discretization& disc) {
    int m = disc.grid_size();
    TrigSeries wp = differentiate(w);
    TrigSeries cwp = hilbert(wp);
    auto wp_g = to_grid(wp, m);
    auto cwp_g = to_grid(cwp, m);
    auto u_g = to_grid(u, m);
    auto cu_g = to_grid(hilbert(u), m);
    std::vector<double> out(m);
    for (int j = 0; j < m; ++j) {
        double t = 1.0 + cwp_g[j];
        double om2 = wp_g[j] * wp_g[j] + t * t;
        if (om2 < 0.25) throw OutOfBallError("ell_apply: Omega(w) below 1/2");
        out[j] = (wp_g[j] * u_g[j] + t * cu_g[j]) / om2;
    }
    return from_grid(std::span<const double>(out), disc.n_modes);
}

TrigSeries ell_inv_adjoint(const TrigSeries& w, const TrigSeries& u, const Discretization& disc) {
    int m = disc.grid_size();
    TrigSeries wp = differentiate(w);
    TrigSeries cwp = hilbert(wp);
    auto wp_g = to_grid(wp, m);
    auto cwp_g = to_grid(cwp, m);
    auto u_g = to_grid(u, m);
    std::vector<double> p1(m), p2(m);
    for (int j = 0; j < m; ++j) {
        p1[j] = wp_g[j] * u_g[j];
        p2[j] = (1.0 + cwp_g[j]) * u_g[j];
    }
    TrigSeries out = from_grid(std::span<const double>(p1), disc.n_modes);
    out += hilbert(from_grid(std::span<const double>(p2), disc.n_modes));
    return out;
}

}  // namespace hew
