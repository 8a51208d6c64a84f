#include "hew/energy.hpp"

#include <cmath>
#include <utility>

namespace hew {

StoredEnergyModel::StoredEnergyModel(std::function<EnergyDerivs(double, double)> eval,
                                     std::optional<CanonicalCoeffs> coeffs)
    : eval_(std::move(eval)), coeffs_(coeffs) {
    EnergyDerivs rest = eval_(1.0, 0.0);
    e11_rest_ = rest.E11;
    e22_rest_ = rest.E22;
}

EnergyDerivs StoredEnergyModel::at(double nu, double mu) const {
    if (!(nu > 0.0)) throw EnergyDomainError("stored energy: nu must be positive");
    return eval_(nu, mu);
}

StoredEnergyModel make_canonical_energy(double a, double b, double c3, double c4, double d1) {
    if (!(a > 0.0) || !(b > 0.0))
        throw InvalidModelError("canonical energy: a and b must be positive");
    CanonicalCoeffs cc{a, b, c3, c4, d1};
    auto eval = [a, b, c3, c4, d1](double nu, double mu) {
        double p = nu - 1.0;
        EnergyDerivs d;
        d.E = 0.5 * a * p * p + 0.5 * b * mu * mu + c3 * p * p * p + c4 * p * p * p * p +
              d1 * p * mu * mu;
        d.E1 = a * p + 3.0 * c3 * p * p + 4.0 * c4 * p * p * p + d1 * mu * mu;
        d.E2 = b * mu + 2.0 * d1 * p * mu;
        d.E11 = a + 6.0 * c3 * p + 12.0 * c4 * p * p;
        d.E12 = 2.0 * d1 * mu;
        d.E22 = b + 2.0 * d1 * p;
        return d;
    };
    return StoredEnergyModel(eval, cc);
}

ValidationReport validate_hypotheses(const StoredEnergyModel& model) {
    ValidationReport rep;
    auto flag = [&rep](const std::string& what, double value) {
        rep.pass = false;
        rep.issues.push_back({what, value});
    };

    EnergyDerivs r = model.at(1.0, 0.0);
    const double tol = 1e-10;
    if (std::abs(r.E) > tol) flag("E(1,0) != 0", r.E);
    if (std::abs(r.E1) > tol) flag("E1(1,0) != 0", r.E1);
    if (std::abs(r.E2) > tol) flag("E2(1,0) != 0", r.E2);
    if (std::abs(r.E12) > tol) flag("E12(1,0) != 0", r.E12);
    if (!(r.E11 > 0.0)) flag("E11(1,0) <= 0", r.E11);
    if (!(r.E22 > 0.0)) flag("E22(1,0) <= 0", r.E22);

    // Nonnegativity over the validated domain.
    const int n = 81;
    for (int i = 0; i < n; ++i) {
        double nu = 0.25 + (4.0 - 0.25) * i / (n - 1);
        for (int j = 0; j < n; ++j) {
            double mu = -4.0 + 8.0 * j / (n - 1);
            double e = model.at(nu, mu).E;
            if (e < -1e-12) {
                flag("E < 0 at nu=" + std::to_string(nu) + ", mu=" + std::to_string(mu), e);
                return rep;
            }
        }
    }
    return rep;
}

void PhysicalParams::validate(const StoredEnergyModel& model) const {
    if (!(g > 0.0)) throw InvalidModelError("params: g must be positive");
    if (!(rho > 0.0)) throw InvalidModelError("params: rho must be positive");
    if (!(lambda1 > 0.0)) throw InvalidModelError("params: lambda1 must be positive");
    if (!(lambda2 > 0.0)) throw InvalidModelError("params: lambda2 must be positive");
    double e11 = model.E11_rest();
    if (std::abs(lambda1 - e11) <= 1e-12 * (1.0 + std::abs(e11)))
        throw InvalidModelError("params: lambda1 coincides with E11(1,0)");
}

}  // namespace hew
