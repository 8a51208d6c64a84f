#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "hew/energy.hpp"

using namespace hew;

TEST_CASE("canonical energy point values") {
    StoredEnergyModel m = make_canonical_energy(4.0, 1.0);
    CHECK(std::abs(m.at(1.1, 0.0).E - 0.02) <= 1e-14);
    CHECK(std::abs(m.at(1.5, 0.0).E1 - 2.0) <= 1e-14);
    CHECK(std::abs(m.at(1.0, 2.0).E2 - 2.0) <= 1e-14);
    CHECK(m.E11_rest() == 4.0);
    CHECK(m.E22_rest() == 1.0);
}

TEST_CASE("energy derivatives match finite differences") {
    StoredEnergyModel m = make_canonical_energy(4.0, 1.0, 0.3, 0.2, 0.1);
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> unu(0.5, 2.0), umu(-1.0, 1.0);
    double h = 1e-6;
    for (int trial = 0; trial < 100; ++trial) {
        double nu = unu(rng), mu = umu(rng);
        EnergyDerivs d = m.at(nu, mu);
        double e1 = (m.at(nu + h, mu).E - m.at(nu - h, mu).E) / (2 * h);
        double e2 = (m.at(nu, mu + h).E - m.at(nu, mu - h).E) / (2 * h);
        double e11 = (m.at(nu + h, mu).E1 - m.at(nu - h, mu).E1) / (2 * h);
        double e12 = (m.at(nu, mu + h).E1 - m.at(nu, mu - h).E1) / (2 * h);
        double e22 = (m.at(nu, mu + h).E2 - m.at(nu, mu - h).E2) / (2 * h);
        CHECK(std::abs(e1 - d.E1) <= 1e-7 * (1 + std::abs(d.E1)));
        CHECK(std::abs(e2 - d.E2) <= 1e-7 * (1 + std::abs(d.E2)));
        CHECK(std::abs(e11 - d.E11) <= 1e-7 * (1 + std::abs(d.E11)));
        CHECK(std::abs(e12 - d.E12) <= 1e-7 * (1 + std::abs(d.E12)));
        CHECK(std::abs(e22 - d.E22) <= 1e-7 * (1 + std::abs(d.E22)));
    }
}

TEST_CASE("rest-state hypotheses pass for the canonical family") {
    ValidationReport rep = validate_hypotheses(make_canonical_energy(4.0, 1.0, 0.1, 0.5, 0.05));
    CHECK(rep.pass);
    CHECK(rep.issues.empty());
}

TEST_CASE("cross term at rest is detected by name") {
    // Same polynomial family but with an extra mu*(nu-1)-independent cross
    // term nu*mu injected, so E12(1,0) = 0.1 != 0.
    StoredEnergyModel bad(
        [](double nu, double mu) {
            double p = nu - 1.0;
            EnergyDerivs d;
            d.E = 2.0 * p * p + 0.5 * mu * mu + 0.1 * p * mu;
            d.E1 = 4.0 * p + 0.1 * mu;
            d.E2 = mu + 0.1 * p;
            d.E11 = 4.0;
            d.E12 = 0.1;
            d.E22 = 1.0;
            return d;
        });
    ValidationReport rep = validate_hypotheses(bad);
    CHECK(!rep.pass);
    bool named = false;
    for (const auto& issue : rep.issues) named = named || issue.what.find("E12") != std::string::npos;
    CHECK(named);
}

TEST_CASE("negative quartic coefficient breaks nonnegativity") {
    ValidationReport rep = validate_hypotheses(make_canonical_energy(4.0, 1.0, 0.0, -1.0));
    CHECK(!rep.pass);
    bool named = false;
    for (const auto& issue : rep.issues) named = named || issue.what.find("E < 0") != std::string::npos;
    CHECK(named);
}

TEST_CASE("canonical constructor rejects non-positive leading coefficients") {
    CHECK_THROWS_AS(make_canonical_energy(0.0, 1.0), InvalidModelError);
    CHECK_THROWS_AS(make_canonical_energy(4.0, -1.0), InvalidModelError);
}

TEST_CASE("physical parameter validation") {
    StoredEnergyModel m = make_canonical_energy(4.0, 1.0);
    PhysicalParams p;  // lambda1 = 5 != E11 = 4
    p.validate(m);
    CHECK(std::abs(p.g_rho() - 1.0) <= 1e-15);
    CHECK(std::abs(p.c() - std::sqrt(5.0 * 9.81)) <= 1e-12);
    CHECK(std::abs(p.c0() - std::sqrt(6.81)) <= 1e-12);
    CHECK(std::abs(p.drift() - (p.c0() - p.c())) == 0.0);

    PhysicalParams sing = p;
    sing.lambda1 = 4.0;
    CHECK_THROWS_AS(sing.validate(m), InvalidModelError);
    PhysicalParams neg = p;
    neg.lambda2 = -1.0;
    CHECK_THROWS_AS(neg.validate(m), InvalidModelError);
}
