#include "hew/linear.hpp"

#include <algorithm>
#include <cmath>

namespace hew {

namespace {

void require_offset(double lambda1, double e11) {
    if (std::abs(lambda1 - e11) <= 1e-12 * (1.0 + std::abs(e11)))
        throw SingularParamError("lambda1 coincides with E11(1,0)");
}

}  // namespace

double dispersion_lhs(int k, double lambda1, double lambda2, double g, double g_rho, double e11,
                      double e22) {
    require_offset(lambda1, e11);
    double kk = static_cast<double>(k);
    return e22 * kk * kk * kk * kk - lambda1 * kk * kk - lambda2 * kk + g +
           g_rho * g_rho / (lambda1 - e11);
}

double dispersion_lhs(int k, const PhysicalParams& p, const StoredEnergyModel& m) {
    return dispersion_lhs(k, p.lambda1, p.lambda2, p.g, p.g_rho(), m.E11_rest(), m.E22_rest());
}

double f_k(int k, double lambda1, double g, double g_rho, double e11, double e22) {
    require_offset(lambda1, e11);
    double kk = static_cast<double>(k);
    return e22 * kk * kk * kk - lambda1 * kk + (g + g_rho * g_rho / (lambda1 - e11)) / kk;
}

double f_k_prime(int k, double lambda1, double g_rho, double e11, double e22) {
    (void)e22;
    require_offset(lambda1, e11);
    double kk = static_cast<double>(k);
    double d = lambda1 - e11;
    return -kk - g_rho * g_rho / (kk * d * d);
}

PkRoots pk_roots(int k, double g, double g_rho, double e11, double e22) {
    double kk = static_cast<double>(k);
    double k2 = kk * kk, k4 = k2 * k2;
    double bcoef = e22 * k4 + e11 * k2 + g;
    PkRoots r;
    // Delta(p_k) = (E11 k^2 - E22 k^4 - g)^2 + (2 g rho k)^2
    double d1 = e11 * k2 - e22 * k4 - g;
    r.discriminant = d1 * d1 + 4.0 * g_rho * g_rho * k2;
    double sq = std::sqrt(r.discriminant);
    r.x_minus = (bcoef - sq) / (2.0 * k2);
    r.x_plus = (bcoef + sq) / (2.0 * k2);
    return r;
}

std::vector<int> kernel_modes(const PhysicalParams& p, const StoredEnergyModel& m, int k_max) {
    double e11 = m.E11_rest(), e22 = m.E22_rest();
    require_offset(p.lambda1, e11);

    // Grow k_max until the quartic term dominates, so no root can be missed.
    int kmax = k_max;
    while (kmax < 4096) {
        double kk = static_cast<double>(kmax);
        double lhs = dispersion_lhs(kmax, p.lambda1, p.lambda2, p.g, p.g_rho(), e11, e22);
        double slope = 4.0 * e22 * kk * kk * kk - 2.0 * p.lambda1 * kk - p.lambda2;
        if (lhs > 0.0 && slope > 0.0) break;
        kmax *= 2;
    }

    std::vector<int> out;
    for (int k = 1; k <= kmax; ++k) {
        double lhs = dispersion_lhs(k, p.lambda1, p.lambda2, p.g, p.g_rho(), e11, e22);
        double kk = static_cast<double>(k);
        if (std::abs(lhs) <= 1e-9 * (1.0 + e22 * kk * kk * kk * kk)) out.push_back(k);
    }
    if (out.size() > 2)
        throw InternalConsistencyError("kernel_modes: more than two kernel modes detected");
    return out;
}

DispersionCurve curve_Ak(int k, double lambda1_min, double lambda1_max, int n_samples, double g,
                         double g_rho, double e11, double e22) {
    DispersionCurve c;
    c.k = k;
    PkRoots roots = pk_roots(k, g, g_rho, e11, e22);
    c.x_minus = roots.x_minus;
    c.x_plus = roots.x_plus;
    const double guard = 1e-6;
    for (int i = 0; i < n_samples; ++i) {
        double l1 = lambda1_min + (lambda1_max - lambda1_min) * i / (n_samples - 1);
        if (l1 <= 0.0 || std::abs(l1 - e11) < guard) continue;
        bool admissible = (l1 < roots.x_minus) || (l1 > e11 && l1 < roots.x_plus);
        if (!admissible) continue;
        double l2 = f_k(k, l1, g, g_rho, e11, e22);
        if (l2 <= 0.0) continue;
        c.samples.push_back({l1, l2});
    }
    return c;
}

double h_kl(int k, int l, double lambda1, double e22) {
    double kk = static_cast<double>(k), ll = static_cast<double>(l);
    return (kk + ll) * (e22 * (kk * kk + ll * ll) - lambda1);
}

std::vector<DoublePoint> double_points(int k, int l, double g, double g_rho, double e11,
                                       double e22) {
    if (k == l) throw InternalConsistencyError("double_points: k and l must differ");
    double kk = static_cast<double>(k), ll = static_cast<double>(l);
    double kl = kk * ll;
    double s = kk * kk + kk * ll + ll * ll;
    // q_{k,l}(X) = kl X^2 - (E11 kl + E22 kl s - g) X + E11 E22 kl s - E11 g + (g rho)^2
    double bcoef = e11 * kl + e22 * kl * s - g;
    double ccoef = e11 * e22 * kl * s - e11 * g + g_rho * g_rho;
    double disc = bcoef * bcoef - 4.0 * kl * ccoef;
    std::vector<DoublePoint> out;
    if (disc < 0.0) return out;
    double sq = std::sqrt(disc);

    int lo = std::min(k, l), hi = std::max(k, l);
    bool resonant = hi % lo == 0;

    for (double root : {(bcoef - sq) / (2.0 * kl), (bcoef + sq) / (2.0 * kl)}) {
        double l1 = root;
        if (!(l1 > 0.0) || std::abs(l1 - e11) <= 1e-9) continue;
        // Newton polish on f_k - f_l to push the crossing residual down.
        for (int it = 0; it < 5; ++it) {
            double r = f_k(k, l1, g, g_rho, e11, e22) - f_k(l, l1, g, g_rho, e11, e22);
            if (std::abs(r) <= 1e-13) break;
            double dr = f_k_prime(k, l1, g_rho, e11, e22) - f_k_prime(l, l1, g_rho, e11, e22);
            l1 -= r / dr;
        }
        double l2 = h_kl(k, l, l1, e22);
        if (!(l2 > 0.0)) continue;
        if (std::abs(f_k(k, l1, g, g_rho, e11, e22) - f_k(l, l1, g, g_rho, e11, e22)) > 1e-9)
            continue;
        DoublePoint dp;
        dp.k = k;
        dp.l = l;
        dp.lambda1 = l1;
        dp.lambda2 = l2;
        dp.resonant = resonant;
        auto nd = nondegeneracy(k, l, l1, g, g_rho, e11, e22);
        dp.nondegenerate = nd.algebraic;
        out.push_back(dp);
    }
    return out;
}

NondegeneracyResult nondegeneracy(int k, int l, double lambda1_star, double g, double g_rho,
                                  double e11, double e22) {
    (void)g;
    require_offset(lambda1_star, e11);
    double kl = static_cast<double>(k) * static_cast<double>(l);
    double ratio = g_rho / (lambda1_star - e11);
    double alg = ratio * ratio - kl;

    double sk = f_k_prime(k, lambda1_star, g_rho, e11, e22);
    double sl = f_k_prime(l, lambda1_star, g_rho, e11, e22);
    double slope_gap = sk - sl;

    NondegeneracyResult r;
    r.algebraic = std::abs(alg) > 1e-9 * (1.0 + kl);
    r.via_slopes = std::abs(slope_gap) > 1e-9 * (1.0 + std::abs(sk) + std::abs(sl));
    if (r.algebraic != r.via_slopes)
        throw InternalConsistencyError("nondegeneracy: algebraic and slope criteria disagree");
    return r;
}

double linearized_diagonal(int j, double lambda1, double lambda2, double g, double g_rho,
                           double e11, double e22) {
    double jj = static_cast<double>(j);
    return -dispersion_lhs(j, lambda1, lambda2, g, g_rho, e11, e22) / (jj * jj);
}

double linearized_diagonal(int j, const PhysicalParams& p, const StoredEnergyModel& m) {
    return linearized_diagonal(j, p.lambda1, p.lambda2, p.g, p.g_rho(), m.E11_rest(),
                               m.E22_rest());
}

}  // namespace hew
