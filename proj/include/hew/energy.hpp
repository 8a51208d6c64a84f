#ifndef HEW_ENERGY_HPP
#define HEW_ENERGY_HPP

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hew {

struct InvalidModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EnergyDomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Value and partial derivatives of the stored energy at one state (nu, mu).
// Subscripts 1, 2 are derivatives in nu and mu.
struct EnergyDerivs {
    double E = 0, E1 = 0, E2 = 0, E11 = 0, E12 = 0, E22 = 0;
};

struct CanonicalCoeffs {
    double a = 4.0;   // E11(1,0)
    double b = 1.0;   // E22(1,0)
    double c3 = 0.0;  // (nu-1)^3
    double c4 = 0.0;  // (nu-1)^4
    double d1 = 0.0;  // (nu-1) mu^2
};

// Stored energy E(nu, mu) with derivatives through second order.
class StoredEnergyModel {
  public:
    explicit StoredEnergyModel(std::function<EnergyDerivs(double, double)> eval,
                               std::optional<CanonicalCoeffs> coeffs = std::nullopt);

    EnergyDerivs at(double nu, double mu) const;

    double E11_rest() const { return e11_rest_; }
    double E22_rest() const { return e22_rest_; }

    const std::optional<CanonicalCoeffs>& coeffs() const { return coeffs_; }

  private:
    std::function<EnergyDerivs(double, double)> eval_;
    std::optional<CanonicalCoeffs> coeffs_;
    double e11_rest_ = 0, e22_rest_ = 0;
};

// Polynomial family
//   E = (a/2)(nu-1)^2 + (b/2) mu^2 + c3 (nu-1)^3 + c4 (nu-1)^4 + d1 (nu-1) mu^2,
// which satisfies the rest-state conditions structurally.
StoredEnergyModel make_canonical_energy(double a, double b, double c3 = 0.0, double c4 = 0.0,
                                        double d1 = 0.0);

struct ValidationIssue {
    std::string what;
    double value = 0;
};

struct ValidationReport {
    bool pass = true;
    std::vector<ValidationIssue> issues;
};

// Checks the rest-state/local-convexity conditions at (1,0) and samples E >= 0
// over nu in [1/4, 4], |mu| <= 4. Failures are report entries, not exceptions.
ValidationReport validate_hypotheses(const StoredEnergyModel& model);

struct PhysicalParams {
    double g = 9.81;
    double rho = 1.0 / 9.81;
    double lambda1 = 5.0;  // c^2 rho
    double lambda2 = 6.81; // c0^2

    double g_rho() const { return g * rho; }
    double c() const { return std::sqrt(lambda1 / rho); }
    double c0() const { return std::sqrt(lambda2); }
    double drift() const { return c0() - c(); }

    void validate(const StoredEnergyModel& model) const;
};

}  // namespace hew

#endif
