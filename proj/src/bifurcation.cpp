#include "hew/bifurcation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <numeric>
#include <thread>

namespace hew {

namespace {

PhysicalParams with_lambda(const PhysicalParams& base, double l1, double l2) {
    PhysicalParams p = base;
    p.lambda1 = l1;
    p.lambda2 = l2;
    return p;
}

void run_batch(int n_tasks, int workers, const std::function<void(int)>& fn) {
    int nthreads = std::min(workers, n_tasks);
    if (nthreads <= 1) {
        for (int i = 0; i < n_tasks; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n_tasks; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

// Newton with a frozen FD Jacobian that is rebuilt when contraction stalls.
struct NewtonResult {
    Eigen::VectorXd x;
    int iterations = 0;
    double residual_norm = 0;
    std::vector<double> history;
};

NewtonResult newton_solve(Eigen::VectorXd x,
                          const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& residual,
                          double tol, int max_iter, double fd_step_scale) {
    NewtonResult res;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
    bool have_jac = false;
    int dim = static_cast<int>(x.size());

    for (int iter = 0; iter <= max_iter; ++iter) {
        Eigen::VectorXd r = residual(x);
        double rn = r.lpNorm<Eigen::Infinity>();
        res.history.push_back(rn);
        if (rn <= tol) {
            res.x = x;
            res.iterations = iter;
            res.residual_norm = rn;
            return res;
        }
        if (iter == max_iter) break;

        bool stalled =
            res.history.size() >= 2 && rn > 0.25 * res.history[res.history.size() - 2];
        if (!have_jac || stalled) {
            double h = fd_step_scale * (1.0 + x.norm());
            Eigen::MatrixXd jac(dim, dim);
            for (int c = 0; c < dim; ++c) {
                Eigen::VectorXd xp = x, xm = x;
                xp(c) += h;
                xm(c) -= h;
                jac.col(c) = (residual(xp) - residual(xm)) / (2.0 * h);
            }
            lu.compute(jac);
            have_jac = true;
        }
        x -= lu.solve(r);
    }
    throw NoConvergenceError("augmented Newton did not converge", res.history);
}

}  // namespace

double amplitude(const TrigSeries& w, int mode) { return w.cosc(mode); }

int minimal_period_divisor(const TrigSeries& w, double threshold) {
    int d = 0;
    for (int n = 1; n <= w.modes(); ++n)
        if (std::abs(w.cosc(n)) > threshold) d = std::gcd(d, n);
    return d;
}

std::vector<int> all_modes(int n_modes) {
    std::vector<int> m(n_modes);
    std::iota(m.begin(), m.end(), 1);
    return m;
}

std::vector<int> multiples_of(int k, int n_modes) {
    std::vector<int> m;
    for (int j = k; j <= n_modes; j += k) m.push_back(j);
    return m;
}

BranchPoint solve_augmented(const std::vector<int>& modes,
                            const std::vector<AmplitudeConstraint>& constraints,
                            bool free_lambda1, bool free_lambda2, const TrigSeries& w0,
                            double lambda1, double lambda2, const PhysicalParams& base,
                            const StoredEnergyModel& model, const Discretization& disc) {
    int mm = static_cast<int>(modes.size());
    int nfree = (free_lambda1 ? 1 : 0) + (free_lambda2 ? 1 : 0);
    if (nfree != static_cast<int>(constraints.size()))
        throw std::invalid_argument(
            "solve_augmented: number of constraints must match freed parameters");

    Eigen::VectorXd x(mm + nfree);
    for (int i = 0; i < mm; ++i) x(i) = w0.cosc(modes[i]);
    int slot = mm;
    if (free_lambda1) x(slot++) = lambda1;
    if (free_lambda2) x(slot++) = lambda2;

    auto unpack = [&](const Eigen::VectorXd& v, TrigSeries& w, double& l1, double& l2) {
        w = TrigSeries(disc.n_modes);
        for (int i = 0; i < mm; ++i) w.cosc(modes[i]) = v(i);
        int s = mm;
        l1 = free_lambda1 ? v(s++) : lambda1;
        l2 = free_lambda2 ? v(s++) : lambda2;
    };

    auto residual = [&](const Eigen::VectorXd& v) {
        TrigSeries w;
        double l1, l2;
        unpack(v, w, l1, l2);
        TrigSeries f = residual_F(w, with_lambda(base, l1, l2), model, disc);
        Eigen::VectorXd r(mm + nfree);
        for (int i = 0; i < mm; ++i) r(i) = f.cosc(modes[i]);
        for (size_t c = 0; c < constraints.size(); ++c)
            r(mm + static_cast<int>(c)) = w.cosc(constraints[c].mode) - constraints[c].target;
        return r;
    };

    NewtonResult nr;
    try {
        nr = newton_solve(x, residual, disc.newton_tol, disc.newton_max_iter,
                          disc.fd_step_scale);
    } catch (const OutOfBallError& e) {
        throw BallExitError(std::string("solve_augmented: iterate left the validity ball (") +
                            e.what() + "); try a smaller amplitude");
    }

    BranchPoint p;
    double l1, l2;
    unpack(nr.x, p.w, l1, l2);
    p.lambda1 = l1;
    p.lambda2 = l2;
    p.newton_iters = nr.iterations;
    p.residual_norm = nr.residual_norm;
    ReducedState st;
    residual_F(p.w, with_lambda(base, l1, l2), model, disc, &st);
    p.xi_bar = st.xi_bar;
    p.minimal_period_divisor = minimal_period_divisor(p.w);
    return p;
}

namespace {

// Continuation in t at fixed lambda1 (or fixed lambda2 in the swapped
// variant) within the Galerkin space spanned by `modes`.
void continue_in_t(Sheet& sheet, int column, const std::vector<int>& modes, int k,
                   double fixed_l1, double start_l2, bool swap_roles, double fixed_l2,
                   const PhysicalParams& base, const StoredEnergyModel& model,
                   const Discretization& disc, std::vector<std::string>* failures) {
    const auto& ts = sheet.axis1;
    int nt = static_cast<int>(ts.size());

    // Process t=0 outward in both directions.
    std::vector<int> order(nt);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return std::abs(ts[a]) < std::abs(ts[b]); });

    struct Prev {
        bool have = false;
        double t = 0;
        TrigSeries w;
        double l1 = 0, l2 = 0;
    };
    Prev prev_pos[2], prev_neg[2];  // [0] latest, [1] one before

    for (int idx : order) {
        double t = ts[idx];
        Prev* prev = t >= 0 ? prev_pos : prev_neg;

        TrigSeries w0(disc.n_modes);
        double l1 = fixed_l1, l2 = swap_roles ? fixed_l2 : start_l2;
        if (prev[0].have) {
            w0 = prev[0].w;
            l1 = prev[0].l1;
            l2 = prev[0].l2;
            if (prev[1].have && std::abs(prev[0].t - prev[1].t) > 0) {
                double s = (t - prev[0].t) / (prev[0].t - prev[1].t);
                TrigSeries dw = prev[0].w - prev[1].w;
                dw *= s;
                w0 += dw;
                l1 += s * (prev[0].l1 - prev[1].l1);
                l2 += s * (prev[0].l2 - prev[1].l2);
            }
        }
        w0.cosc(k) = t;

        try {
            BranchPoint p = solve_augmented(modes, {{k, t}}, swap_roles, !swap_roles, w0, l1, l2,
                                            base, model, disc);
            p.t1 = t;
            sheet.at(idx, column) = p;
            sheet.solved[sheet.index(idx, column)] = 1;
            prev[1] = prev[0];
            prev[0] = {true, t, p.w, p.lambda1, p.lambda2};
        } catch (const std::exception& e) {
            if (!failures) throw;
            failures->push_back("branch point t=" + std::to_string(t) + ": " + e.what());
            // Abort this direction; the predictor chain is broken.
            if (t >= 0)
                prev_pos[0].have = prev_pos[1].have = false;
            else
                prev_neg[0].have = prev_neg[1].have = false;
        }
    }
}

}  // namespace

Sheet simple_branch(int k, double lambda1, const std::vector<double>& t_grid,
                    const PhysicalParams& base, const StoredEnergyModel& model,
                    const Discretization& disc, bool free_lambda1_instead,
                    double fixed_lambda2) {
    double e11 = model.E11_rest(), e22 = model.E22_rest();
    double l2_star = free_lambda1_instead ? fixed_lambda2
                                          : f_k(k, lambda1, base.g, base.g_rho(), e11, e22);
    PhysicalParams probe = with_lambda(base, lambda1, l2_star);
    auto kernel = kernel_modes(probe, model);
    if (kernel.size() != 1 || kernel[0] != k)
        throw RefusalError("simple_branch: eigenvalue at (k, lambda1) is not simple");

    Sheet sheet;
    sheet.kind = Sheet::Kind::simple;
    sheet.k = k;
    sheet.axis1 = t_grid;
    sheet.axis2 = {lambda1};
    sheet.base_params = base;
    if (model.coeffs()) sheet.energy = *model.coeffs();
    sheet.disc = disc;
    sheet.allocate();

    continue_in_t(sheet, 0, all_modes(disc.n_modes), k, lambda1, l2_star, free_lambda1_instead,
                  fixed_lambda2, base, model, disc, nullptr);
    return sheet;
}

Sheet special_sheet(int k, const DoublePoint& dp, const std::vector<double>& t_grid,
                    const std::vector<double>& lambda1_grid, const PhysicalParams& base,
                    const StoredEnergyModel& model, const Discretization& disc) {
    if (dp.resonant)
        throw RefusalError("special_sheet: resonant double point (max/min in Z) refused");

    Sheet sheet;
    sheet.kind = (k == dp.k) ? Sheet::Kind::special_k : Sheet::Kind::special_l;
    sheet.k = dp.k;
    sheet.l = dp.l;
    sheet.lambda1_star = dp.lambda1;
    sheet.lambda2_star = dp.lambda2;
    sheet.axis1 = t_grid;
    sheet.axis2 = lambda1_grid;
    sheet.base_params = base;
    if (model.coeffs()) sheet.energy = *model.coeffs();
    sheet.disc = disc;
    sheet.allocate();

    double e11 = model.E11_rest(), e22 = model.E22_rest();
    auto modes = multiples_of(k, disc.n_modes);
    for (int j = 0; j < sheet.n2(); ++j) {
        double l1 = lambda1_grid[j];
        double l2 = f_k(k, l1, base.g, base.g_rho(), e11, e22);
        continue_in_t(sheet, j, modes, k, l1, l2, false, 0.0, base, model, disc, nullptr);
    }
    return sheet;
}

Sheet general_sheet(const DoublePoint& dp, const std::vector<double>& t1_grid,
                    const std::vector<double>& t2_grid, const PhysicalParams& base,
                    const StoredEnergyModel& model, const Discretization& disc, int workers,
                    const Sheet* resume_from, std::vector<std::string>* failures) {
    if (dp.resonant)
        throw RefusalError("general_sheet: resonant double point (max/min in Z) refused");
    if (!dp.nondegenerate)
        throw RefusalError("general_sheet: degenerate double point (tangential crossing) refused");

    Sheet sheet;
    sheet.kind = Sheet::Kind::general;
    sheet.k = dp.k;
    sheet.l = dp.l;
    sheet.lambda1_star = dp.lambda1;
    sheet.lambda2_star = dp.lambda2;
    sheet.axis1 = t1_grid;
    sheet.axis2 = t2_grid;
    sheet.base_params = base;
    if (model.coeffs()) sheet.energy = *model.coeffs();
    sheet.disc = disc;
    sheet.allocate();

    if (resume_from) {
        if (resume_from->axis1 != sheet.axis1 || resume_from->axis2 != sheet.axis2 ||
            resume_from->k != sheet.k || resume_from->l != sheet.l)
            throw RefusalError("general_sheet: resume sheet does not match the requested grid");
        for (int i = 0; i < sheet.n1(); ++i)
            for (int j = 0; j < sheet.n2(); ++j)
                if (resume_from->solved[resume_from->index(i, j)]) {
                    sheet.at(i, j) = resume_from->at(i, j);
                    sheet.solved[sheet.index(i, j)] = 1;
                }
    }

    struct Cell {
        int i, j;
        double level;
    };
    std::vector<Cell> cells;
    cells.reserve(sheet.points.size());
    for (int i = 0; i < sheet.n1(); ++i)
        for (int j = 0; j < sheet.n2(); ++j)
            cells.push_back({i, j, std::abs(t1_grid[i]) + std::abs(t2_grid[j])});
    std::stable_sort(cells.begin(), cells.end(),
                     [](const Cell& a, const Cell& b) { return a.level < b.level; });

    auto modes = all_modes(disc.n_modes);
    std::vector<std::string> local_failures;
    std::mutex fail_mutex;

    size_t start = 0;
    while (start < cells.size()) {
        size_t stop = start;
        double lvl = cells[start].level;
        while (stop < cells.size() && cells[stop].level <= lvl + 1e-12 * (1.0 + lvl)) ++stop;

        run_batch(static_cast<int>(stop - start), workers, [&](int b) {
            const Cell& cell = cells[start + b];
            if (sheet.solved[sheet.index(cell.i, cell.j)]) return;
            double t1 = t1_grid[cell.i], t2 = t2_grid[cell.j];

            // Predictor: a fixed parent cell one grid step toward the centre
            // along the coordinate with the larger amplitude (ties step the
            // first coordinate). The parent lies on a strictly lower
            // wavefront level, so it is already solved, and the rule depends
            // only on the cell itself; solved values are therefore identical
            // across worker counts and across interrupted/resumed runs.
            TrigSeries w0(disc.n_modes);
            double l1 = dp.lambda1, l2 = dp.lambda2;
            int pi = cell.i, pj = cell.j;
            if (std::abs(t1) >= std::abs(t2) && t1 != 0.0)
                pi += t1 > 0 ? -1 : 1;
            else if (t2 != 0.0)
                pj += t2 > 0 ? -1 : 1;
            if ((pi != cell.i || pj != cell.j) && sheet.solved[sheet.index(pi, pj)]) {
                const BranchPoint& p = sheet.at(pi, pj);
                w0 = p.w;
                l1 = p.lambda1;
                l2 = p.lambda2;
            }
            w0.cosc(dp.k) = t1;
            w0.cosc(dp.l) = t2;

            try {
                // On the axes the solution lies in the invariant subspace of
                // the surviving kernel mode, and freeing both lambda
                // components would make the system singular (the vanishing
                // amplitude constraint holds identically along a
                // one-parameter family). Solve edge cells restricted to that
                // subspace with lambda1 held fixed; the predictor chain
                // propagates lambda1_star outward from the centre, which is
                // solved as the exact trivial state.
                BranchPoint p;
                if (t1 == 0.0 && t2 == 0.0) {
                    p = solve_augmented(modes, {}, false, false, TrigSeries(disc.n_modes),
                                        dp.lambda1, dp.lambda2, base, model, disc);
                } else if (t2 == 0.0) {
                    p = solve_augmented(multiples_of(dp.k, disc.n_modes), {{dp.k, t1}}, false,
                                        true, w0, l1, l2, base, model, disc);
                } else if (t1 == 0.0) {
                    p = solve_augmented(multiples_of(dp.l, disc.n_modes), {{dp.l, t2}}, false,
                                        true, w0, l1, l2, base, model, disc);
                } else {
                    p = solve_augmented(modes, {{dp.k, t1}, {dp.l, t2}}, true, true, w0, l1, l2,
                                        base, model, disc);
                }
                p.t1 = t1;
                p.t2 = t2;
                sheet.at(cell.i, cell.j) = p;
                sheet.solved[sheet.index(cell.i, cell.j)] = 1;
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(fail_mutex);
                local_failures.push_back("cell (" + std::to_string(t1) + ", " +
                                         std::to_string(t2) + "): " + e.what());
            }
        });
        start = stop;
    }

    if (!local_failures.empty()) {
        if (!failures) throw NoConvergenceError(
            "general_sheet: " + std::to_string(local_failures.size()) + " cells failed, first: " +
                local_failures.front(),
            {});
        *failures = std::move(local_failures);
    }
    return sheet;
}

namespace {

// Auxiliary equation of the Lyapunov-Schmidt splitting: with the kernel
// amplitudes held fixed, drive the residual to zero on the complement modes.
TrigSeries solve_auxiliary(const std::vector<int>& kernel, const std::vector<double>& amps,
                           double l1, double l2, const PhysicalParams& base,
                           const StoredEnergyModel& model, const Discretization& disc) {
    std::vector<int> comp;
    for (int m = 1; m <= disc.n_modes; ++m)
        if (std::find(kernel.begin(), kernel.end(), m) == kernel.end()) comp.push_back(m);
    int dim = static_cast<int>(comp.size());

    auto build_w = [&](const Eigen::VectorXd& y) {
        TrigSeries w(disc.n_modes);
        for (size_t i = 0; i < kernel.size(); ++i) w.cosc(kernel[i]) = amps[i];
        for (int i = 0; i < dim; ++i) w.cosc(comp[i]) = y(i);
        return w;
    };

    auto residual = [&](const Eigen::VectorXd& y) {
        TrigSeries f = residual_F(build_w(y), with_lambda(base, l1, l2), model, disc);
        Eigen::VectorXd r(dim);
        for (int i = 0; i < dim; ++i) r(i) = f.cosc(comp[i]);
        return r;
    };

    Eigen::VectorXd y0 = Eigen::VectorXd::Zero(dim);
    NewtonResult nr;
    try {
        nr = newton_solve(y0, residual, disc.newton_tol, disc.newton_max_iter,
                          disc.fd_step_scale);
    } catch (const NoConvergenceError& e) {
        throw NoConvergenceError(
            std::string("auxiliary equation left the trust region: ") + e.what(),
            e.residual_history);
    }
    return build_w(nr.x);
}

}  // namespace

double phi_simple(double t, int k, double lambda1, double lambda2, const PhysicalParams& base,
                  const StoredEnergyModel& model, const Discretization& disc) {
    TrigSeries w = solve_auxiliary({k}, {t}, lambda1, lambda2, base, model, disc);
    TrigSeries f = residual_F(w, with_lambda(base, lambda1, lambda2), model, disc);
    return f.cosc(k);
}

PhiPsi phi_psi_eval(double t1, double t2, double lambda1, double lambda2, const DoublePoint& dp,
                    const PhysicalParams& base, const StoredEnergyModel& model,
                    const Discretization& disc, double eps_div) {
    if (dp.resonant)
        throw RefusalError("phi_psi_eval: resonant double point refused");

    auto phi = [&](double s1, double s2) {
        TrigSeries w = solve_auxiliary({dp.k, dp.l}, {s1, s2}, lambda1, lambda2, base, model,
                                       disc);
        TrigSeries f = residual_F(w, with_lambda(base, lambda1, lambda2), model, disc);
        return std::pair<double, double>{f.cosc(dp.k), f.cosc(dp.l)};
    };

    PhiPsi out;
    auto [pk, pl] = phi(t1, t2);
    out.phi_k = pk;
    out.phi_l = pl;

    if (std::abs(t1) >= eps_div) {
        out.psi_k = out.phi_k / t1;
    } else {
        // Phi_k(0, t2, lambda) = 0, so the limit is a divided difference.
        double fp = phi(eps_div, t2).first;
        double fm = phi(-eps_div, t2).first;
        out.psi_k = (fp - fm) / (2.0 * eps_div);
    }

    if (std::abs(t2) >= eps_div) {
        out.psi_l = out.phi_l / t2;
    } else {
        double fp = phi(t1, eps_div).second;
        double fm = phi(t1, -eps_div).second;
        out.psi_l = (fp - fm) / (2.0 * eps_div);
    }
    return out;
}

SecondaryReport secondary_check(const Sheet& general, const Sheet& special_k,
                                const Sheet& special_l, double tol) {
    SecondaryReport rep;
    auto fail = [&rep](const std::string& note) {
        rep.pass = false;
        rep.notes.push_back(note);
    };

    if (general.k != special_k.k || general.l != special_l.l) {
        fail("sheets do not share the same double point indices");
        return rep;
    }

    int gcd_kl = std::gcd(general.k, general.l);

    auto check_edge = [&](const Sheet& special, int mode, bool first_axis) {
        // Edge of the general sheet where the other amplitude vanishes.
        for (int i = 0; i < general.n1(); ++i)
            for (int j = 0; j < general.n2(); ++j) {
                if (!general.solved[general.index(i, j)]) continue;
                double t = first_axis ? general.axis1[i] : general.axis2[j];
                double other = first_axis ? general.axis2[j] : general.axis1[i];
                if (other != 0.0) continue;
                const BranchPoint& gp = general.at(i, j);

                // Locate the matching special-sheet cell: same t, same lambda1.
                int si = -1, sj = -1;
                for (int ii = 0; ii < special.n1(); ++ii)
                    if (special.axis1[ii] == t) si = ii;
                for (int jj = 0; jj < special.n2(); ++jj)
                    if (std::abs(special.axis2[jj] - gp.lambda1) <= 1e-9) sj = jj;
                if (si < 0 || sj < 0 || !special.solved[special.index(si, sj)]) {
                    fail("no matching special-sheet cell for mode " + std::to_string(mode) +
                         " at t=" + std::to_string(t) + ", lambda1=" +
                         std::to_string(gp.lambda1) + " (mismatched grids?)");
                    continue;
                }
                const BranchPoint& sp = special.at(si, sj);
                double lgap = std::abs(sp.lambda2 - gp.lambda2);
                double wgap = (sp.w - gp.w).coeff_sup_norm();
                rep.max_lambda_gap = std::max(rep.max_lambda_gap, lgap);
                rep.max_w_gap = std::max(rep.max_w_gap, wgap);
                if (lgap > tol)
                    fail("edge lambda2 gap " + std::to_string(lgap) + " at t=" +
                         std::to_string(t));
                if (wgap > 100.0 * tol)
                    fail("edge w gap " + std::to_string(wgap) + " at t=" + std::to_string(t));
                if (t != 0.0 && sp.minimal_period_divisor % mode != 0)
                    fail("special-sheet point at t=" + std::to_string(t) +
                         " is not supported on multiples of " + std::to_string(mode));
            }
    };
    check_edge(special_k, general.k, true);
    check_edge(special_l, general.l, false);

    for (int i = 0; i < general.n1(); ++i)
        for (int j = 0; j < general.n2(); ++j) {
            if (!general.solved[general.index(i, j)]) continue;
            if (general.axis1[i] == 0.0 || general.axis2[j] == 0.0) continue;
            const BranchPoint& gp = general.at(i, j);
            if (gp.minimal_period_divisor != gcd_kl)
                fail("interior point (" + std::to_string(general.axis1[i]) + ", " +
                     std::to_string(general.axis2[j]) + ") has period divisor " +
                     std::to_string(gp.minimal_period_divisor));
        }
    return rep;
}

ProfileRecord reconstruct_profile(const BranchPoint& point, int n_plot,
                                  const PhysicalParams& base, const Discretization& disc) {
    ProfileRecord rec;
    const TrigSeries& w = point.w;
    double shift = inner(w, hilbert(differentiate(w))) / (2.0 * M_PI) + base.rho;

    TrigSeries cw = hilbert(w);
    auto geom = surface_geometry(w, disc);
    auto xi_g = to_grid(point.xi_bar, disc.grid_size());

    rec.tau.resize(n_plot);
    rec.x.resize(n_plot);
    rec.y.resize(n_plot);
    rec.nu.resize(n_plot);
    rec.sigma.resize(n_plot);
    for (int i = 0; i < n_plot; ++i) {
        double tau = 2.0 * M_PI * i / (n_plot - 1.0);
        rec.tau[i] = tau;
        rec.x[i] = -tau - cw.eval(tau);
        rec.y[i] = w.eval(tau) - shift;
        rec.nu[i] = geom.omega.eval(tau) / (1.0 + point.xi_bar.eval(tau));
        rec.sigma[i] = geom.sigma.eval(tau);
    }
    rec.c = std::sqrt(point.lambda1 / base.rho);
    rec.c0 = std::sqrt(point.lambda2);
    rec.drift = rec.c0 - rec.c;
    return rec;
}

}  // namespace hew
