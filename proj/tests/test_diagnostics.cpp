// Diagnostics checks: energies and dissipation against exact and
// closed-form values, the energy-law residual bookkeeping, the Dirichlet
// eigenvalue behind the decay bound, and the relative-energy distance.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nlc/coupling.hpp"
#include "nlc/diagnostics.hpp"
#include "nlc/operators.hpp"

using namespace nlc;

namespace {

constexpr double kPi = 3.14159265358979323846;

FlowState twist_state(const Grid& g, double alpha) {
    FlowState s(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double th = alpha * g.xc(i);
            s.d.at(0, i, j) = std::cos(th);
            s.d.at(1, i, j) = std::sin(th);
            s.d.at(2, i, j) = 0.0;
        }
    return s;
}

} // namespace

TEST_CASE("kinetic energy is exact for constant velocity and density") {
    const Grid g = Grid::make(16, 16);
    FlowState s(g);
    for (double& r : s.rho.v) r = 2.0;
    for (double& u : s.u.u) u = 1.0;
    const EnergyBreakdown e = energy(s, 1.0);
    CHECK(e.kinetic == 1.0);  // 1/2 * rho * |u|^2 * area, all dyadic
    CHECK(e.elastic == 0.0);  // constant director
    CHECK(e.total == 1.0);
}

TEST_CASE("elastic energy of the twist hits its reduced-wavenumber closed form") {
    const double alpha = 2.0 * kPi, lambda = 1.7;
    for (int n : {32, 64}) {
        const Grid g = Grid::make(n, n);
        const FlowState s = twist_state(g, alpha);
        const double kh = std::sin(alpha * g.hx) / g.hx;
        const EnergyBreakdown e = energy(s, lambda, Closure::periodic);
        CHECK(e.elastic == doctest::Approx(0.5 * lambda * kh * kh).epsilon(1e-12));
    }
    // And the h -> 0 limit is the continuum value lambda alpha^2 / 2.
    const Grid g = Grid::make(64, 64);
    const EnergyBreakdown e = energy(twist_state(g, alpha), lambda, Closure::periodic);
    CHECK(e.elastic == doctest::Approx(0.5 * lambda * alpha * alpha).epsilon(0.02));
}

TEST_CASE("viscous dissipation integrates a linear shear exactly") {
    const Grid g = Grid::make(16, 16);
    FlowState s(g);
    // Index-linear shear with dyadic slope: every term in the quadrature is
    // exact, so the result must be bitwise equal to mu (du/dy)^2 area.
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) s.u.ux(i, j) = 0.5 * j;
    const double mu = 1.25, rate = 0.5 / g.hy;
    CHECK(dissipation(s, mu, 1.0, 1.0) == mu * rate * rate * (g.lx * g.ly));
}

TEST_CASE("resting state dissipates nothing") {
    const Grid g = Grid::make(20, 12);
    const FlowState s(g);
    CHECK(dissipation(s, 1.0, 1.0, 1.0) == 0.0);
    const EnergyBreakdown e = energy(s, 1.0);
    CHECK(e.total == 0.0);
}

TEST_CASE("director dissipation of the twist follows the discrete defect") {
    // Lap_h d + |grad_h d|^2 d = (kh^2 - mu_h) d for the periodic twist with
    // kh = sin(alpha h)/h and mu_h = 4 sin^2(alpha h/2)/h^2, so the relax
    // part of the dissipation is lambda gamma (kh^2 - mu_h)^2 area, an
    // O(h^4) quantity.
    const double alpha = 2.0 * kPi, lambda = 1.2, gamma = 0.8;
    auto defect = [&](int n) {
        const Grid g = Grid::make(n, n);
        const FlowState s = twist_state(g, alpha);
        const double kh = std::sin(alpha * g.hx) / g.hx;
        const double mu_h = 4.0 / (g.hx * g.hx) * std::pow(std::sin(alpha * g.hx / 2.0), 2);
        const double want = lambda * gamma * std::pow(kh * kh - mu_h, 2) * g.lx * g.ly;
        const double got = dissipation(s, 0.7, lambda, gamma, Closure::periodic);
        CHECK(got == doctest::Approx(want).epsilon(1e-9));
        return got;
    };
    const double d32 = defect(32);
    const double d64 = defect(64);
    CHECK(d32 / d64 == doctest::Approx(16.0).epsilon(0.1)); // O(h^4)
}

TEST_CASE("energy law residual matches the column conventions") {
    DiagnosticsRecord rec;
    DiagnosticsRow r0, r1, r2;
    r0.t = 0.0;
    r0.e_total = 4.0;
    r1.t = 0.5;
    r1.e_total = 3.0;
    r1.dissipation = 2.0;
    r2.t = 1.0;
    r2.e_total = 2.5;
    r2.dissipation = 1.5;
    rec.rows = {r0, r1, r2};
    const std::vector<double> res = energy_law_residual(rec);
    REQUIRE(res.size() == 2);
    CHECK(res[0] == doctest::Approx(0.0));  // (3-4)/0.5 + 2
    CHECK(res[1] == doctest::Approx(0.5));  // (2.5-3)/0.5 + 1.5
    CHECK(integrated_energy_residual(rec) == doctest::Approx(0.25));
}

TEST_CASE("coupled run keeps the energy monotone and the law residual first order") {
    auto residual_at = [&](int n, double dt, int steps) {
        SolverConfig c;
        c.nx = c.ny = n;
        c.dt = dt;
        c.t_final = steps * dt;
        c.init.name = "small_vortex_twist+density_bump";
        c.stokes.saddle_tol = 1e-11;
        const RunResult r = run(c);
        for (size_t m = 1; m < r.diagnostics.rows.size(); ++m)
            CHECK(r.diagnostics.rows[m].e_total <=
                  r.diagnostics.rows[m - 1].e_total * (1.0 + 1e-12));
        return integrated_energy_residual(r.diagnostics);
    };
    const double coarse = residual_at(24, 1.0 / 128.0, 8);
    const double fine = residual_at(48, 1.0 / 256.0, 16);
    CHECK(coarse > 0.0);
    CHECK(coarse / fine > 1.4); // at least first-order shrinkage
}

TEST_CASE("smallest Dirichlet eigenvalue matches the closed form") {
    {
        const Grid g = Grid::make(24, 24);
        const double want = 2.0 * 4.0 / (g.hx * g.hx) *
                            std::pow(std::sin(kPi * g.hx / 2.0), 2);
        CHECK(dirichlet_lambda1(g) == doctest::Approx(want).epsilon(1e-8));
    }
    {
        const Grid g = Grid::make(20, 14, 1.2, 0.9);
        const double want =
            4.0 / (g.hx * g.hx) * std::pow(std::sin(kPi * g.hx / (2.0 * g.lx)), 2) +
            4.0 / (g.hy * g.hy) * std::pow(std::sin(kPi * g.hy / (2.0 * g.ly)), 2);
        CHECK(dirichlet_lambda1(g) == doctest::Approx(want).epsilon(1e-8));
    }
    {
        const Grid g = Grid::make(64, 64);
        CHECK(dirichlet_lambda1(g) == doctest::Approx(2.0 * kPi * kPi).epsilon(0.01));
    }
}

TEST_CASE("decay bound margins behave on synthetic histories") {
    const Grid g = Grid::make(24, 24);
    const double lambda = 1.5, x0 = 0.8, rho_hat = 2.0;
    const double lam1 = dirichlet_lambda1(g);
    const double a = 2.0 * lam1 / rho_hat;

    auto make_rec = [&](auto x_of_t) {
        DiagnosticsRecord rec;
        for (int m = 0; m <= 20; ++m) {
            DiagnosticsRow row;
            row.t = 0.05 * m;
            const double x = x_of_t(row.t);
            row.e_kin = 0.25 * x;
            row.e_elastic = 0.25 * lambda * x;
            row.rho_max = rho_hat;
            rec.rows.push_back(row);
        }
        return rec;
    };

    SUBCASE("any non-growing history satisfies the bound") {
        const DiagnosticsRecord rec =
            make_rec([&](double t) { return x0 * std::exp(-0.5 * t); });
        const DecayReport rep = decay_check(rec, g, lambda, lam1);
        CHECK(rep.lambda1 == lam1);
        CHECK(rep.rho_hat == rho_hat);
        CHECK(rep.x0 == doctest::Approx(x0).epsilon(1e-12));
        REQUIRE(rep.margins.size() == 21);
        CHECK(std::abs(rep.margins[0]) < 1e-12 * x0);
        CHECK(rep.min_margin >= -1e-12 * x0);
    }
    SUBCASE("growth beyond the linear term is flagged") {
        const DiagnosticsRecord rec =
            make_rec([&](double t) { return x0 * (1.0 + 3.0 * a * t); });
        const DecayReport rep = decay_check(rec, g, lambda, lam1);
        CHECK(rep.min_margin < 0.0);
    }
}

TEST_CASE("relative energy isolates each field's contribution") {
    const Grid g = Grid::make(18, 18);
    const FlowState base(g);
    CHECK(relative_energy(base, base) == 0.0);

    FlowState a = base;
    for (double& x : a.d.c[2]) x += 0.3; // constant shift, gradient-free
    CHECK(relative_energy(a, base) == doctest::Approx(0.09).epsilon(1e-12));

    a = base;
    for (double& x : a.rho.v) x += 0.2;
    CHECK(relative_energy(a, base) == doctest::Approx(0.04).epsilon(1e-12));

    a = base;
    for (double& x : a.u.u) x += 0.5;
    FlowState b = base;
    for (double& x : b.rho.v) x = 1.6; // weight sits on the second argument
    CHECK(relative_energy(a, b) ==
          doctest::Approx(1.6 * 0.25 + 0.6 * 0.6).epsilon(1e-12));
}

TEST_CASE("conservation report summarizes a density sequence") {
    const Grid g = Grid::make(10, 10);
    FlowState s0(g), s1(g);
    s1.t = 0.5;
    for (double& r : s0.rho.v) r = 2.0;
    for (double& r : s1.rho.v) r = 2.0;
    s1.rho.at(3, 3) = 2.5;
    s1.rho.at(7, 2) = 1.5;
    const ConservationReport rep = transport_conservation_report({s0, s1});
    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.rows[0].mass == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(rep.rows[1].mass == doctest::Approx(2.0).epsilon(1e-14)); // bump cancels
    CHECK(rep.max_mass_drift_rel < 1e-13);
    CHECK(rep.min_over_time == 1.5);
    CHECK(rep.max_over_time == 2.5);
    CHECK(rep.rows[0].l1 == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(rep.rows[0].l2 == doctest::Approx(2.0).epsilon(1e-14));
}
