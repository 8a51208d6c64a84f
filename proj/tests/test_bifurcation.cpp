#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "hew/bifurcation.hpp"

using namespace hew;

namespace {

const Discretization kDisc;

// Reference constants: g rho = 1. The kernel at (5, 6.81) is spanned by cos tau.
PhysicalParams fig_params() { return PhysicalParams{}; }

// Stiffer membrane weight; the (2,3) double point sits well away from the
// first elastic constant, so sheet-scale amplitudes stay inside the ball.
PhysicalParams heavy_params() {
    PhysicalParams p;
    p.rho = 10.0 / p.g;
    return p;
}

StoredEnergyModel model() { return make_canonical_energy(4.0, 1.0); }

DoublePoint heavy_dp() {
    auto dps = double_points(2, 3, 9.81, 10.0, 4.0, 1.0);
    REQUIRE(dps.size() == 1);
    return dps[0];
}

}  // namespace

TEST_CASE("amplitude functional and period divisor") {
    TrigSeries w(8);
    w.cosc(2) = 0.25;
    w.cosc(4) = 0.1;
    CHECK(std::abs(amplitude(w, 2) - 0.25) <= 1e-14);
    CHECK(std::abs(amplitude(w, 3)) <= 1e-14);
    CHECK(minimal_period_divisor(w) == 2);
    w.cosc(3) = 0.05;
    CHECK(minimal_period_divisor(w) == 1);
    CHECK(minimal_period_divisor(TrigSeries(8)) == 0);
    CHECK(multiples_of(3, 10) == std::vector<int>{3, 6, 9});
    CHECK(all_modes(4) == std::vector<int>{1, 2, 3, 4});
}

TEST_CASE("simple branch leaves the trivial solution quadratically") {
    auto m = model();
    std::vector<double> t_grid{0.0, 2.5e-4, 5e-4, 1e-3};
    Sheet br = simple_branch(1, 5.0, t_grid, fig_params(), m, kDisc);
    REQUIRE(br.n1() == 4);
    REQUIRE(br.n2() == 1);

    const BranchPoint& triv = br.at(0, 0);
    CHECK(triv.w.coeff_sup_norm() <= 1e-14);
    CHECK(triv.newton_iters == 0);
    CHECK(std::abs(triv.lambda2 - 6.81) <= 1e-12);
    CHECK(triv.minimal_period_divisor == 0);

    double prev_ratio = 0.0;
    for (int i = 1; i < 4; ++i) {
        const BranchPoint& pt = br.at(i, 0);
        double t = t_grid[i];
        CHECK(std::abs(amplitude(pt.w, 1) - t) <= 1e-12);
        CHECK(pt.residual_norm <= kDisc.newton_tol);
        CHECK(pt.minimal_period_divisor == 1);
        TrigSeries lead = TrigSeries::cosine(1, t, kDisc.n_modes);
        double ratio = (pt.w - lead).l2_norm() / (t * t);
        CHECK(std::abs(pt.lambda2 - 6.81) <= 100.0 * t * t);
        if (prev_ratio > 0.0) {
            CHECK(ratio <= 1.5 * prev_ratio);
            CHECK(ratio >= 0.5 * prev_ratio);
        }
        prev_ratio = ratio;
    }
}

TEST_CASE("branch with the roles of the parameters swapped") {
    auto m = model();
    double t = 1e-3;
    std::vector<double> t_grid{0.0, 5e-4, 1e-3};
    Sheet br = simple_branch(1, 5.0, t_grid, fig_params(), m, kDisc);

    // Freeing lambda1 at the on-curve lambda2 = f_1(5) traces the same branch
    // with the parameter roles exchanged.
    Sheet swapped = simple_branch(1, 5.0, t_grid, fig_params(), m, kDisc,
                                  /*free_lambda1_instead=*/true, /*fixed_lambda2=*/6.81);
    const BranchPoint& pt = swapped.at(2, 0);
    CHECK(std::abs(pt.lambda1 - 5.0) <= 100.0 * t * t);
    CHECK((pt.w - br.at(2, 0).w).coeff_sup_norm() <= 1e-6);
    CHECK(std::abs(amplitude(pt.w, 1) - t) <= 1e-12);
}

TEST_CASE("branch solutions stay in the invariant subspace") {
    auto m = model();
    std::vector<double> t_grid{0.0, 5e-4, 1e-3};
    double l1 = 4.5;  // f_2(4.5) is a simple kernel at this lambda1
    Sheet br = simple_branch(2, l1, t_grid, fig_params(), m, kDisc);
    const BranchPoint& pt = br.at(2, 0);
    for (int n = 1; n <= kDisc.n_modes; ++n) {
        if (n % 2 == 0) continue;
        CHECK(std::abs(pt.w.cosc(n)) <= 1e-12);
        CHECK(std::abs(pt.w.sinc(n)) <= 1e-12);
    }
    CHECK(pt.minimal_period_divisor == 2);
}

TEST_CASE("branch refuses a non-simple kernel and reports ball exit") {
    auto m = model();
    auto dps = double_points(2, 3, 9.81, 1.0, 4.0, 1.0);
    REQUIRE(!dps.empty());
    std::vector<double> t_grid{0.0, 1e-4};
    CHECK_THROWS_AS(simple_branch(2, dps[0].lambda1, t_grid, fig_params(), m, kDisc),
                    RefusalError);

    std::vector<double> huge{0.0, 0.15, 0.3};
    CHECK_THROWS_AS(simple_branch(1, 5.0, huge, fig_params(), m, kDisc), BallExitError);
}

TEST_CASE("resonant and degenerate double points are refused") {
    auto m = model();
    auto res = double_points(2, 4, 9.81, 1.0, 4.0, 1.0);
    REQUIRE(!res.empty());
    std::vector<double> t_grid{-1e-3, 0.0, 1e-3};
    CHECK_THROWS_AS(general_sheet(res[0], t_grid, t_grid, fig_params(), m, kDisc),
                    RefusalError);
    CHECK_THROWS_AS(special_sheet(2, res[0], t_grid, {res[0].lambda1}, fig_params(), m, kDisc),
                    RefusalError);

    DoublePoint deg = heavy_dp();
    deg.nondegenerate = false;
    CHECK_THROWS_AS(general_sheet(deg, t_grid, t_grid, heavy_params(), m, kDisc),
                    RefusalError);
}

TEST_CASE("local uniqueness: different predictors reach the same point") {
    auto m = model();
    PhysicalParams base = fig_params();
    TrigSeries guess1 = TrigSeries::cosine(1, 1e-3, kDisc.n_modes);
    TrigSeries guess2 = guess1;
    guess2.cosc(2) = 5e-5;
    guess2.cosc(3) = -2e-5;
    auto p1 = solve_augmented(all_modes(kDisc.n_modes), {{1, 1e-3}}, false, true, guess1, 5.0,
                              6.81, base, m, kDisc);
    auto p2 = solve_augmented(all_modes(kDisc.n_modes), {{1, 1e-3}}, false, true, guess2, 5.0,
                              6.81, base, m, kDisc);
    // Both solves hit residual <= 1e-12; the lambda gap is bounded by the
    // residual divided by the amplitude t = 1e-3.
    CHECK((p1.w - p2.w).coeff_sup_norm() <= 1e-9);
    CHECK(std::abs(p1.lambda2 - p2.lambda2) <= 1e-8);
}

TEST_CASE("bifurcation function invariances at the double point") {
    auto m = model();
    DoublePoint dp = heavy_dp();
    PhysicalParams base = heavy_params();
    for (double t : {-1e-3, 1e-3}) {
        PhiPsi on_l = phi_psi_eval(0.0, t, dp.lambda1 * 1.01, dp.lambda2 * 0.99, dp, base, m,
                                   kDisc);
        CHECK(std::abs(on_l.phi_k) <= 1e-11);
        PhiPsi on_k = phi_psi_eval(t, 0.0, dp.lambda1 * 0.99, dp.lambda2 * 1.01, dp, base, m,
                                   kDisc);
        CHECK(std::abs(on_k.phi_l) <= 1e-11);
    }
}

TEST_CASE("desingularized diagnostics near the trivial state") {
    auto m = model();
    DoublePoint dp = heavy_dp();
    PhysicalParams base = heavy_params();

    PhiPsi at_star = phi_psi_eval(0.0, 0.0, dp.lambda1, dp.lambda2, dp, base, m, kDisc);
    CHECK(std::abs(at_star.psi_k) <= 1e-6);
    CHECK(std::abs(at_star.psi_l) <= 1e-6);

    // Off the double point the desingularized functions reduce to the
    // linearized diagonals.
    double l2 = dp.lambda2 + 0.5;
    PhiPsi off = phi_psi_eval(0.0, 0.0, dp.lambda1, l2, dp, base, m, kDisc);
    CHECK(std::abs(off.psi_k - linearized_diagonal(dp.k, dp.lambda1, l2, 9.81, 10.0, 4.0, 1.0)) <=
          1e-6);
    CHECK(std::abs(off.psi_l - linearized_diagonal(dp.l, dp.lambda1, l2, 9.81, 10.0, 4.0, 1.0)) <=
          1e-6);
}

TEST_CASE("parameter derivatives of the desingularized functions") {
    auto m = model();
    DoublePoint dp = heavy_dp();
    PhysicalParams base = heavy_params();
    double bsq = std::pow(10.0 / (dp.lambda1 - 4.0), 2);

    double h1 = 1e-4, h2 = 1e-3;
    PhiPsi p1p = phi_psi_eval(0, 0, dp.lambda1 + h1, dp.lambda2, dp, base, m, kDisc);
    PhiPsi p1m = phi_psi_eval(0, 0, dp.lambda1 - h1, dp.lambda2, dp, base, m, kDisc);
    PhiPsi p2p = phi_psi_eval(0, 0, dp.lambda1, dp.lambda2 + h2, dp, base, m, kDisc);
    PhiPsi p2m = phi_psi_eval(0, 0, dp.lambda1, dp.lambda2 - h2, dp, base, m, kDisc);

    double dk1 = (p1p.psi_k - p1m.psi_k) / (2 * h1);
    double dl1 = (p1p.psi_l - p1m.psi_l) / (2 * h1);
    double dk2 = (p2p.psi_k - p2m.psi_k) / (2 * h2);
    double dl2 = (p2p.psi_l - p2m.psi_l) / (2 * h2);

    CHECK(std::abs(dk1 - (1.0 + bsq / (dp.k * dp.k))) <= 1e-3 * (1.0 + bsq));
    CHECK(std::abs(dl1 - (1.0 + bsq / (dp.l * dp.l))) <= 1e-3 * (1.0 + bsq));
    CHECK(std::abs(dk2 - 1.0 / dp.k) <= 1e-3);
    CHECK(std::abs(dl2 - 1.0 / dp.l) <= 1e-3);

    double det = dk1 * dl2 - dk2 * dl1;
    double closed = (bsq - dp.k * dp.l) * (dp.l - dp.k) /
                    (double(dp.k) * dp.k * dp.l * dp.l);
    CHECK(std::abs(det - closed) <= 1e-3 * std::abs(closed));
}

TEST_CASE("three sheets agree along the axes and break symmetry inside") {
    auto m = model();
    DoublePoint dp = heavy_dp();
    PhysicalParams base = heavy_params();
    std::vector<double> t_grid{-2e-3, 0.0, 2e-3};

    Sheet general = general_sheet(dp, t_grid, t_grid, base, m, kDisc);
    for (char s : general.solved) CHECK(s != 0);
    Sheet sp_k = special_sheet(dp.k, dp, t_grid, {dp.lambda1}, base, m, kDisc);
    Sheet sp_l = special_sheet(dp.l, dp, t_grid, {dp.lambda1}, base, m, kDisc);

    SecondaryReport rep = secondary_check(general, sp_k, sp_l);
    CHECK(rep.pass);
    CHECK(rep.max_lambda_gap <= 1e-8);

    // Interior points carry both modes: the minimal period drops to gcd(k,l).
    const BranchPoint& corner = general.at(0, 0);
    CHECK(std::abs(amplitude(corner.w, dp.k) + 2e-3) <= 1e-12);
    CHECK(std::abs(amplitude(corner.w, dp.l) + 2e-3) <= 1e-12);
    CHECK(corner.minimal_period_divisor == 1);

    // A corrupted special sheet is flagged.
    Sheet bad = sp_k;
    for (int i = 0; i < bad.n1(); ++i)
        if (bad.solved[bad.index(i, 0)]) bad.at(i, 0).lambda2 += 1e-5;
    SecondaryReport rep_bad = secondary_check(general, bad, sp_l);
    CHECK(!rep_bad.pass);
}

TEST_CASE("profile reconstruction of the trivial and a bifurcated state") {
    auto m = model();
    std::vector<double> t_grid{0.0, 1e-3};
    PhysicalParams base = fig_params();
    Sheet br = simple_branch(1, 5.0, t_grid, base, m, kDisc);

    int n_plot = 64;
    ProfileRecord flat = reconstruct_profile(br.at(0, 0), n_plot, base, kDisc);
    REQUIRE(static_cast<int>(flat.y.size()) == n_plot);
    for (double y : flat.y) CHECK(std::abs(y + base.rho) <= 1e-12);
    for (double nu : flat.nu) CHECK(std::abs(nu - 1.0) <= 1e-12);
    for (double sg : flat.sigma) CHECK(std::abs(sg) <= 1e-12);
    // x decreases and spans one closed period.
    CHECK(flat.x.front() > flat.x.back());
    CHECK(std::abs((flat.x.front() - flat.x.back()) - 2.0 * M_PI) <= 1e-12);
    CHECK(std::abs(flat.c - std::sqrt(5.0 / base.rho)) <= 1e-12);
    CHECK(std::abs(flat.c0 - std::sqrt(6.81)) <= 1e-12);

    ProfileRecord wave = reconstruct_profile(br.at(1, 0), n_plot, base, kDisc);
    double lo = 1e9, hi = -1e9;
    for (double y : wave.y) {
        lo = std::min(lo, y);
        hi = std::max(hi, y);
    }
    CHECK(hi - lo >= 1e-3);     // the crest-trough height reflects the amplitude
    CHECK(hi - lo <= 3e-3);
    CHECK(std::abs(wave.drift - (wave.c0 - wave.c)) <= 1e-12);
}
