#ifndef HEW_SPECTRAL_HPP
#define HEW_SPECTRAL_HPP

#include <utility>

#include "hew/series.hpp"

namespace hew {

// Metric factor and curvature of the surface parametrized by
// rho(w)(tau) = (-tau - Cw(tau), w(tau)):
//   Omega(w) = sqrt(w'^2 + (1 + Cw')^2),
//   sigma(w) = -(1/Omega) C(Omega'/Omega).
// Grid samples are cached because the reduction reuses them heavily.
struct SurfaceGeometry {
    TrigSeries omega;
    TrigSeries sigma;
    CollocationGrid w_g;            // w on the oversampled grid
    CollocationGrid wp_g;           // w'
    CollocationGrid cwp_g;          // Cw'
    CollocationGrid omega_g;        // Omega samples (from the truncated series)
    CollocationGrid omega_sigma_g;  // Omega*sigma samples
};

SurfaceGeometry surface_geometry(const TrigSeries& w, const Discretization& disc);

std::pair<TrigSeries, TrigSeries> omega_sigma(const TrigSeries& w, const Discretization& disc);

// L[w](u) = (w' u + (1 + Cw') Cu) / Omega(w)^2
TrigSeries ell_apply(const TrigSeries& w, const TrigSeries& u, const Discretization& disc);

// (L[w]^{-1})*(u) = w' u + C((1 + Cw') u)
TrigSeries ell_inv_adjoint(const TrigSeries& w, const TrigSeries& u, const Discretization& disc);

}  // namespace hew

#endif
