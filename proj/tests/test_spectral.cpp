#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "hew/spectral.hpp"

using namespace hew;

namespace {

TrigSeries random_series(std::mt19937_64& rng, int n_modes, double scale,
                         bool zero_mean = false) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    TrigSeries s(n_modes);
    s.mean = zero_mean ? 0.0 : scale * u(rng);
    for (int n = 1; n <= n_modes; ++n) {
        double decay = scale / (n * n);
        s.cosc(n) = decay * u(rng);
        s.sinc(n) = decay * u(rng);
    }
    return s;
}

double gap(const TrigSeries& u, const TrigSeries& v) { return (u - v).coeff_sup_norm(); }

}  // namespace

TEST_CASE("hilbert transform on basis functions") {
    int n = 8;
    for (int k = 1; k <= n; ++k) {
        CHECK(gap(hilbert(TrigSeries::cosine(k, 1.0, n)), TrigSeries::sine(k, 1.0, n)) == 0.0);
        CHECK(gap(hilbert(TrigSeries::sine(k, 1.0, n)), TrigSeries::cosine(k, -1.0, n)) == 0.0);
    }
    CHECK(hilbert(TrigSeries::constant(3.5, n)).coeff_sup_norm() == 0.0);
}

TEST_CASE("hilbert squared is minus the zero-mean projection") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        TrigSeries u = random_series(rng, 16, 1.0);
        TrigSeries twice = hilbert(hilbert(u));
        TrigSeries expect = project_zero_mean(u);
        expect *= -1.0;
        CHECK(gap(twice, expect) <= 1e-15);
    }
}

TEST_CASE("hilbert is skew-adjoint in L2") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        TrigSeries u = random_series(rng, 16, 1.0);
        TrigSeries v = random_series(rng, 16, 1.0);
        CHECK(std::abs(inner(hilbert(u), v) + inner(u, hilbert(v))) <= 1e-12);
    }
}

TEST_CASE("hilbert swaps parity") {
    TrigSeries even = TrigSeries::cosine(3, 2.0, 8);
    CHECK(even.is_even());
    CHECK(hilbert(even).is_odd());
    TrigSeries odd = TrigSeries::sine(2, 1.5, 8);
    CHECK(hilbert(odd).is_even());
}

TEST_CASE("differentiate and antiderivative0 invert each other") {
    std::mt19937_64 rng(13);
    TrigSeries u = random_series(rng, 16, 1.0, /*zero_mean=*/true);
    TrigSeries back = antiderivative0(differentiate(u));
    // antiderivative0 pins the value at tau = 0, not the mean.
    CHECK(std::abs(back.eval(0.0)) <= 1e-13);
    back.mean = u.mean;
    TrigSeries diff = back - u;
    diff.mean = 0.0;
    CHECK(diff.coeff_sup_norm() <= 1e-12);

    TrigSeries fwd = differentiate(antiderivative0(u));
    CHECK(gap(fwd, u) <= 1e-12);

    CHECK(gap(differentiate(TrigSeries::cosine(3, 1.0, 8)), TrigSeries::sine(3, -3.0, 8)) ==
          0.0);
    CHECK_THROWS_AS(antiderivative0(TrigSeries::constant(1.0, 8)), SpectralError);
}

TEST_CASE("project_zero_mean is idempotent and kills the mean") {
    std::mt19937_64 rng(14);
    TrigSeries u = random_series(rng, 16, 2.0);
    TrigSeries p = project_zero_mean(u);
    CHECK(p.mean == 0.0);
    CHECK(gap(project_zero_mean(p), p) == 0.0);
    CHECK(std::abs(integral(p)) <= 1e-12);
}

TEST_CASE("grid transforms round-trip and quadrature is exact") {
    std::mt19937_64 rng(15);
    Discretization disc;
    TrigSeries u = random_series(rng, disc.n_modes, 1.0);
    auto g = to_grid(u, disc.grid_size());
    CHECK(gap(from_grid(g, disc.n_modes), u) <= 1e-13);

    TrigSeries v = random_series(rng, disc.n_modes, 1.0);
    // inner() and the grid sum agree because the grid oversamples the product.
    auto ug = to_grid(u, disc.grid_size());
    auto vg = to_grid(v, disc.grid_size());
    double s = 0.0;
    for (int j = 0; j < ug.size(); ++j) s += ug[j] * vg[j];
    s *= 2.0 * M_PI / ug.size();
    CHECK(std::abs(s - inner(u, v)) <= 1e-11);
}

TEST_CASE("grid_compose reproduces products and reciprocals") {
    Discretization disc;
    disc.n_modes = 16;
    TrigSeries u = TrigSeries::cosine(2, 0.3, 16);
    TrigSeries v = TrigSeries::cosine(3, 0.2, 16);
    TrigSeries prod = grid_compose(u, v, [](double x, double y) { return x * y; }, disc);
    // cos(2t) cos(3t) = (cos t + cos 5t)/2
    CHECK(std::abs(prod.cosc(1) - 0.03) <= 1e-14);
    CHECK(std::abs(prod.cosc(5) - 0.03) <= 1e-14);
    CHECK(std::abs(prod.mean) <= 1e-14);

    TrigSeries xi = TrigSeries::cosine(1, 0.25, 16);
    TrigSeries rec = grid_compose(xi, [](double x) { return 1.0 / (1.0 + x); }, disc);
    for (int j = 0; j < 7; ++j) {
        double tau = 2.0 * M_PI * j / 7.0;
        CHECK(std::abs(rec.eval(tau) - 1.0 / (1.0 + xi.eval(tau))) <= 1e-12);
    }

    CHECK_THROWS_AS(
        grid_compose(TrigSeries::cosine(1, 2.0, 16),
                     [](double x) { return std::sqrt(x); }, disc),
        EvalError);
}

TEST_CASE("flat surface geometry") {
    Discretization disc;
    TrigSeries w(disc.n_modes);
    auto [omega, sigma] = omega_sigma(w, disc);
    CHECK(std::abs(omega.mean - 1.0) <= 1e-14);
    CHECK(project_zero_mean(omega).coeff_sup_norm() <= 1e-14);
    CHECK(sigma.coeff_sup_norm() <= 1e-14);
}

TEST_CASE("geometry linearizations at the flat surface") {
    Discretization disc;
    double eps = 1e-7;
    std::mt19937_64 rng(16);
    TrigSeries h = random_series(rng, 8, 1.0, /*zero_mean=*/true).truncated(disc.n_modes);

    TrigSeries hp = h;
    hp *= eps;
    TrigSeries hm = h;
    hm *= -eps;
    auto [om_p, sg_p] = omega_sigma(hp, disc);
    auto [om_m, sg_m] = omega_sigma(hm, disc);

    // d Omega(0) h = C h'
    TrigSeries d_om = om_p - om_m;
    d_om *= 1.0 / (2.0 * eps);
    CHECK(gap(d_om, hilbert(differentiate(h))) <= 1e-6);

    // d (Omega sigma)(0) h = h''
    Discretization d2 = disc;
    TrigSeries osp = grid_compose(om_p, sg_p, [](double a, double b) { return a * b; }, d2);
    TrigSeries osm = grid_compose(om_m, sg_m, [](double a, double b) { return a * b; }, d2);
    TrigSeries d_os = osp - osm;
    d_os *= 1.0 / (2.0 * eps);
    CHECK(gap(d_os, differentiate(differentiate(h))) <= 1e-5);
}

TEST_CASE("geometry rejects states outside the validity ball") {
    Discretization disc;
    CHECK_THROWS_AS(surface_geometry(TrigSeries::cosine(1, 2.0, disc.n_modes), disc),
                    OutOfBallError);
}

TEST_CASE("ell operators at the flat surface") {
    Discretization disc;
    TrigSeries w(disc.n_modes);
    TrigSeries u = TrigSeries::cosine(2, 1.0, disc.n_modes);
    CHECK(gap(ell_apply(w, u, disc), hilbert(u)) <= 1e-13);
}

TEST_CASE("ell_inv_adjoint basics and adjoint identity") {
    Discretization disc;
    TrigSeries w0(disc.n_modes);
    CHECK(gap(ell_inv_adjoint(w0, TrigSeries::sine(1, 1.0, disc.n_modes), disc),
              TrigSeries::cosine(1, -1.0, disc.n_modes)) <= 1e-13);
    // Constants are annihilated: w' c + C(c(1 + Cw')) = c(w' + C C w') = 0.
    std::mt19937_64 rng(17);
    TrigSeries w = random_series(rng, 8, 0.05, /*zero_mean=*/true).truncated(disc.n_modes);
    CHECK(ell_inv_adjoint(w, TrigSeries::constant(2.0, disc.n_modes), disc).coeff_sup_norm() <=
          1e-12);

    // <(L^{-1})* u, L v> = <u, v> for zero-mean u, v.
    for (int trial = 0; trial < 5; ++trial) {
        TrigSeries u = random_series(rng, 8, 1.0, true).truncated(disc.n_modes);
        TrigSeries v = random_series(rng, 8, 1.0, true).truncated(disc.n_modes);
        double lhs = inner(ell_inv_adjoint(w, u, disc), ell_apply(w, v, disc));
        CHECK(std::abs(lhs - inner(u, v)) <= 1e-10);
    }
}
