// Variable-density Stokes step checks.  The iterative saddle solver is
// compared against a dense direct solve of an independently assembled
// system on a small grid, against closed-form solutions (gradient forcing,
// constant-density rescaling), and against structural properties: energy
// decrease, mirror symmetry, and the decay rate of the leading no-slip
// solenoidal mode.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "nlc/errors.hpp"
#include "nlc/operators.hpp"
#include "nlc/stokes.hpp"

using namespace nlc;

namespace {

constexpr double kPi = 3.14159265358979323846;

template <class Psi>
StaggeredField curl_of(const Grid& g, const Psi& psi) {
    StaggeredField w(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i)
            w.ux(i, j) = (psi(g.xf(i), g.yf(j + 1)) - psi(g.xf(i), g.yf(j))) / g.hy;
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            w.vy(i, j) = -(psi(g.xf(i + 1), g.yf(j)) - psi(g.xf(i), g.yf(j))) / g.hx;
    return w;
}

StaggeredField vortex(const Grid& g, double amplitude) {
    return curl_of(g, [&](double x, double y) {
        const double sx = std::sin(kPi * x / g.lx), sy = std::sin(kPi * y / g.ly);
        return amplitude * sx * sx * sy * sy;
    });
}

// Gaussian elimination with partial pivoting, enough for the small dense
// oracle systems assembled below.
std::vector<double> dense_solve(std::vector<double> a, std::vector<double> rhs, int n) {
    for (int c = 0; c < n; ++c) {
        int pr = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(a[r * n + c]) > std::abs(a[pr * n + c])) pr = r;
        if (pr != c) {
            for (int k = 0; k < n; ++k) std::swap(a[pr * n + k], a[c * n + k]);
            std::swap(rhs[pr], rhs[c]);
        }
        REQUIRE(std::abs(a[c * n + c]) > 1e-13);
        for (int r = c + 1; r < n; ++r) {
            const double m = a[r * n + c] / a[c * n + c];
            if (m == 0.0) continue;
            for (int k = c; k < n; ++k) a[r * n + k] -= m * a[c * n + k];
            rhs[r] -= m * rhs[c];
        }
    }
    std::vector<double> x(n);
    for (int r = n - 1; r >= 0; --r) {
        double s = rhs[r];
        for (int k = r + 1; k < n; ++k) s -= a[r * n + k] * x[k];
        x[r] = s / a[r * n + r];
    }
    return x;
}

double rho_weighted_energy(const ScalarField& rho, const StaggeredField& w) {
    const Grid& g = rho.grid;
    const StaggeredField rf = center_to_faces(rho, FaceRule::nearest);
    double e = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) e += rf.ux(i, j) * w.ux(i, j) * w.ux(i, j);
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) e += rf.vy(i, j) * w.vy(i, j) * w.vy(i, j);
    return e * g.hx * g.hy;
}

} // namespace

TEST_CASE("iterative saddle solve matches a dense direct solve of the same system") {
    // The system is re-derived here stencil by stencil, assembled densely,
    // and solved by elimination.  Unknowns: interior x faces, interior y
    // faces, all pressures with the first cell pinned to zero (its
    // divergence row is implied by the others, and the gauge is fixed by a
    // mean shift afterwards).
    const Grid g = Grid::make(8, 6, 1.0, 0.8);
    const double dt = 0.04, mu = 0.7;

    ScalarField rho(g);
    StaggeredField u_old(g), f(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            rho.at(i, j) = 1.2 + 0.6 * std::sin(2.1 * g.xc(i) + 0.7) * std::cos(1.3 * g.yc(j));
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) {
            u_old.ux(i, j) = 0.3 * std::sin(3.0 * g.xf(i)) * std::cos(2.0 * g.yc(j));
            f.ux(i, j) = std::cos(1.7 * g.xf(i) + 0.2) * std::sin(2.4 * g.yc(j));
        }
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            u_old.vy(i, j) = -0.2 * std::cos(2.2 * g.xc(i)) * std::sin(1.9 * g.yf(j));
            f.vy(i, j) = 0.8 * std::sin(1.1 * g.xc(i)) * std::cos(2.8 * g.yf(j) + 0.5);
        }

    const int nu = (g.nx - 1) * g.ny, nv = g.nx * (g.ny - 1), np = g.cells();
    const int n = nu + nv + np;
    auto iu = [&](int i, int j) { return (i - 1) + (g.nx - 1) * j; };
    auto iv = [&](int i, int j) { return nu + i + g.nx * (j - 1); };
    auto ip = [&](int i, int j) { return nu + nv + i + g.nx * j; };
    auto rf_x = [&](int i, int j) { return 0.5 * (rho.at(i - 1, j) + rho.at(i, j)); };
    auto rf_y = [&](int i, int j) { return 0.5 * (rho.at(i, j - 1) + rho.at(i, j)); };

    std::vector<double> a(size_t(n) * n, 0.0), rhs(n, 0.0);
    const double ix2 = mu / (g.hx * g.hx), iy2 = mu / (g.hy * g.hy);

    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) {
            double* row = a.data() + size_t(iu(i, j)) * n;
            const double wall = (j == 0 ? 1.0 : 0.0) + (j == g.ny - 1 ? 1.0 : 0.0);
            row[iu(i, j)] = rf_x(i, j) / dt + 2.0 * ix2 + (2.0 + wall) * iy2;
            if (i + 1 < g.nx) row[iu(i + 1, j)] = -ix2;
            if (i - 1 >= 1) row[iu(i - 1, j)] = -ix2;
            if (j + 1 < g.ny) row[iu(i, j + 1)] = -iy2;
            if (j - 1 >= 0) row[iu(i, j - 1)] = -iy2;
            row[ip(i, j)] = 1.0 / g.hx;
            row[ip(i - 1, j)] = -1.0 / g.hx;
            rhs[iu(i, j)] = f.ux(i, j) + rf_x(i, j) / dt * u_old.ux(i, j);
        }
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            double* row = a.data() + size_t(iv(i, j)) * n;
            const double wall = (i == 0 ? 1.0 : 0.0) + (i == g.nx - 1 ? 1.0 : 0.0);
            row[iv(i, j)] = rf_y(i, j) / dt + (2.0 + wall) * ix2 + 2.0 * iy2;
            if (i + 1 < g.nx) row[iv(i + 1, j)] = -ix2;
            if (i - 1 >= 0) row[iv(i - 1, j)] = -ix2;
            if (j + 1 < g.ny) row[iv(i, j + 1)] = -iy2;
            if (j - 1 >= 1) row[iv(i, j - 1)] = -iy2;
            row[ip(i, j)] = 1.0 / g.hy;
            row[ip(i, j - 1)] = -1.0 / g.hy;
            rhs[iv(i, j)] = f.vy(i, j) + rf_y(i, j) / dt * u_old.vy(i, j);
        }
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            double* row = a.data() + size_t(ip(i, j)) * n;
            if (i == 0 && j == 0) {
                row[ip(0, 0)] = 1.0; // gauge pin, divergence here is implied
                continue;
            }
            if (i + 1 < g.nx) row[iu(i + 1, j)] = 1.0 / g.hx;
            if (i >= 1) row[iu(i, j)] = -1.0 / g.hx;
            if (j + 1 < g.ny) row[iv(i, j + 1)] = 1.0 / g.hy;
            if (j >= 1) row[iv(i, j)] = -1.0 / g.hy;
        }

    const std::vector<double> x = dense_solve(a, rhs, n);

    StokesOptions opts;
    opts.mu = mu;
    opts.saddle_tol = 1e-12;
    const StokesResult res = solve_stokes(rho, u_old, f, dt, opts);
    CHECK(res.div_inf <= 1e-12);

    double pmean = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) pmean += x[ip(i, j)];
    pmean /= double(np);

    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) {
            const double want = (i >= 1 && i < g.nx) ? x[iu(i, j)] : 0.0;
            CHECK(std::abs(res.u.ux(i, j) - want) < 1e-9);
        }
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double want = (j >= 1 && j < g.ny) ? x[iv(i, j)] : 0.0;
            CHECK(std::abs(res.u.vy(i, j) - want) < 1e-9);
        }
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            CHECK(std::abs(res.p.at(i, j) - (x[ip(i, j)] - pmean)) < 1e-8);

    const auto [mom, dv] = saddle_residuals(res.u, res.p, rho, u_old, f, dt, opts);
    CHECK(mom < 1e-8);
    CHECK(dv == res.div_inf);

    // The residual check must actually notice a wrong solution.
    StaggeredField bad = res.u;
    bad.ux(3, 2) += 1e-3;
    const auto [mom_bad, dv_bad] = saddle_residuals(bad, res.p, rho, u_old, f, dt, opts);
    CHECK(mom_bad > 0.1);
    CHECK(dv_bad > 1e-4);
}

TEST_CASE("zero data returns the exact zero solution without iterating") {
    const Grid g = Grid::make(20, 20);
    ScalarField rho(g);
    for (double& r : rho.v) r = 1.7;
    const StaggeredField zero(g);
    const StokesResult res = solve_stokes(rho, zero, StaggeredField(g), 0.01);
    CHECK(res.outer_iters == 0);
    CHECK(res.div_inf == 0.0);
    for (double v : res.u.u) CHECK(v == 0.0);
    for (double v : res.u.v) CHECK(v == 0.0);
    for (double v : res.p.v) CHECK(v == 0.0);
}

TEST_CASE("gradient forcing is absorbed by the pressure, velocity stays zero") {
    // f = grad(phi) with u_old = 0 has the exact solution u = 0 and
    // P = phi - mean(phi), for any positive density field.
    const Grid g = Grid::make(32, 24, 1.0, 0.75);
    ScalarField rho(g), phi(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            rho.at(i, j) = 1.0 + 0.7 * std::sin(2.0 * kPi * g.xc(i)) * std::sin(kPi * g.yc(j));
            phi.at(i, j) = std::cos(kPi * g.xc(i) / g.lx) * std::cos(2.0 * kPi * g.yc(j) / g.ly);
        }
    const StaggeredField f = grad(phi, Closure::neumann);
    StokesOptions opts;
    opts.mu = 1.1;
    opts.saddle_tol = 1e-12;
    const StokesResult res = solve_stokes(rho, StaggeredField(g), f, 0.05, opts);

    CHECK(linf_norm_faces(res.u) < 1e-10);
    const double pm = mean_cells(phi);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            CHECK(std::abs(res.p.at(i, j) - (phi.at(i, j) - pm)) < 1e-9);
}

TEST_CASE("misleading hints do not change the converged solution") {
    const Grid g = Grid::make(24, 24);
    ScalarField rho(g), phi(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            rho.at(i, j) = 1.3 + 0.5 * std::cos(3.0 * g.xc(i)) * std::cos(2.0 * g.yc(j));
            phi.at(i, j) = std::sin(2.0 * kPi * g.xc(i)) * std::cos(kPi * g.yc(j));
        }
    const StaggeredField f = grad(phi, Closure::neumann);
    StokesOptions opts;
    opts.saddle_tol = 1e-12;
    const StokesResult plain = solve_stokes(rho, StaggeredField(g), f, 0.02, opts);

    StaggeredField u_hint = vortex(g, 0.4);
    ScalarField p_hint(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) p_hint.at(i, j) = std::cos(5.0 * g.xc(i) * g.yc(j));
    const StokesResult hinted = solve_stokes(rho, StaggeredField(g), f, 0.02, opts,
                                             &u_hint, &p_hint);

    for (size_t n = 0; n < plain.u.u.size(); ++n)
        CHECK(std::abs(plain.u.u[n] - hinted.u.u[n]) < 1e-9);
    for (size_t n = 0; n < plain.u.v.size(); ++n)
        CHECK(std::abs(plain.u.v[n] - hinted.u.v[n]) < 1e-9);
    for (int n = 0; n < g.cells(); ++n)
        CHECK(std::abs(plain.p.v[n] - hinted.p.v[n]) < 1e-8);
}

TEST_CASE("elastic force closed forms") {
    SUBCASE("constant director gives exactly zero force") {
        const Grid g = Grid::make(17, 13);
        DirectorField d(g);
        for (int n = 0; n < g.cells(); ++n) {
            d.c[0][n] = 0.6;
            d.c[1][n] = -0.8;
            d.c[2][n] = 0.0;
        }
        const StaggeredField fe = elastic_force(d, 2.5);
        for (double v : fe.u) CHECK(v == 0.0);
        for (double v : fe.v) CHECK(v == 0.0);
    }

    SUBCASE("uniform twist is force free to round-off") {
        // grad d and Lap d stay mutually orthogonal for the discrete twist,
        // so the contraction cancels in exact arithmetic.
        const Grid g = Grid::make(32, 20);
        DirectorField d(g);
        const double alpha = 2.0 * kPi;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                d.at(0, i, j) = std::cos(alpha * g.xc(i));
                d.at(1, i, j) = std::sin(alpha * g.xc(i));
                d.at(2, i, j) = 0.0;
            }
        const StaggeredField fe = elastic_force(d, 1.0, Closure::periodic);
        CHECK(linf_norm_faces(fe) < 1e-9);
    }

    SUBCASE("manufactured planar director converges at second order") {
        // d = (cos th, sin th, 0), th = 0.3 sin(2 pi x) sin(2 pi y); the
        // continuum force is -lambda grad(th) Lap(th).
        const double lambda = 1.4, beta = 0.3;
        auto theta = [&](double x, double y) {
            return beta * std::sin(2.0 * kPi * x) * std::sin(2.0 * kPi * y);
        };
        auto worst_error = [&](int nres) {
            const Grid g = Grid::make(nres, nres);
            DirectorField d(g);
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i) {
                    const double th = theta(g.xc(i), g.yc(j));
                    d.at(0, i, j) = std::cos(th);
                    d.at(1, i, j) = std::sin(th);
                    d.at(2, i, j) = 0.0;
                }
            const StaggeredField fe = elastic_force(d, lambda, Closure::periodic);
            auto tx = [&](double x, double y) {
                return beta * 2.0 * kPi * std::cos(2.0 * kPi * x) * std::sin(2.0 * kPi * y);
            };
            auto ty = [&](double x, double y) {
                return beta * 2.0 * kPi * std::sin(2.0 * kPi * x) * std::cos(2.0 * kPi * y);
            };
            auto lap_th = [&](double x, double y) { return -8.0 * kPi * kPi * theta(x, y); };
            double worst = 0.0;
            for (int j = 0; j < g.ny; ++j)
                for (int i = 1; i < g.nx; ++i) {
                    const double x = g.xf(i), y = g.yc(j);
                    const double want = -lambda * tx(x, y) * lap_th(x, y);
                    worst = std::max(worst, std::abs(fe.ux(i, j) - want));
                }
            for (int j = 1; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i) {
                    const double x = g.xc(i), y = g.yf(j);
                    const double want = -lambda * ty(x, y) * lap_th(x, y);
                    worst = std::max(worst, std::abs(fe.vy(i, j) - want));
                }
            return worst;
        };
        const double e1 = worst_error(32);
        const double e2 = worst_error(64);
        CHECK(e1 / e2 > 3.0);
        CHECK(e1 / e2 < 5.2);
    }
}

TEST_CASE("unforced steps dissipate the density-weighted kinetic energy") {
    const Grid g = Grid::make(24, 24);
    ScalarField rho(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            rho.at(i, j) = 1.1 + 0.6 * std::sin(kPi * g.xc(i)) * std::sin(kPi * g.yc(j));
    StaggeredField u = vortex(g, 1.0);
    StokesOptions opts;
    opts.saddle_tol = 1e-11;
    double e_prev = rho_weighted_energy(rho, u);
    for (int step = 0; step < 6; ++step) {
        const StokesResult res = solve_stokes(rho, u, StaggeredField(g), 0.01, opts);
        const double e = rho_weighted_energy(rho, res.u);
        CHECK(e <= e_prev * (1.0 + 1e-9));
        CHECK(e < e_prev); // strict for a genuinely viscous step
        e_prev = e;
        u = res.u;
    }
}

TEST_CASE("leading decay rate is resolution-consistent and above the unconstrained bound") {
    // With rho = 1 the step damps each solenoidal no-slip mode by
    // 1/(1 + dt lam); once the leading mode dominates, the energy ratio
    // yields lam directly.  The divergence-free constraint must push the
    // rate well above the first Dirichlet Laplacian eigenvalue 2 pi^2.
    auto leading_rate = [&](int nres) {
        const Grid g = Grid::make(nres, nres);
        ScalarField rho(g);
        for (double& r : rho.v) r = 1.0;
        StaggeredField u = vortex(g, 1.0);
        StokesOptions opts;
        opts.saddle_tol = 1e-11;
        const double dt = 1.0 / 256.0;
        double rate = 0.0, rate_prev = 0.0;
        for (int step = 0; step < 20; ++step) {
            const double e0 = dot_faces(u, u);
            const StokesResult res = solve_stokes(rho, u, StaggeredField(g), dt, opts);
            const double e1 = dot_faces(res.u, res.u);
            rate_prev = rate;
            rate = (std::sqrt(e0 / e1) - 1.0) / dt;
            u = res.u;
        }
        CHECK(rate == doctest::Approx(rate_prev).epsilon(0.02)); // settled on one mode
        return rate;
    };
    const double r16 = leading_rate(16);
    const double r32 = leading_rate(32);
    CHECK(r32 > 2.0 * kPi * kPi);
    CHECK(r32 < 100.0);
    CHECK(r16 == doctest::Approx(r32).epsilon(0.08));
}

TEST_CASE("mirror-symmetric data produces a mirror-symmetric solution") {
    const Grid g = Grid::make(20, 16);
    ScalarField rho(g);
    StaggeredField f(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            rho.at(i, j) = 1.0 + 0.8 * std::sin(kPi * g.xc(i) / g.lx) *
                                     (0.5 + 0.3 * std::cos(2.0 * kPi * g.yc(j) / g.ly));
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i)
            f.ux(i, j) = std::sin(2.0 * kPi * g.xf(i) / g.lx) * std::cos(kPi * g.yc(j));
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            f.vy(i, j) = std::sin(kPi * g.xc(i) / g.lx) * std::sin(2.0 * g.yf(j));
    StokesOptions opts;
    opts.saddle_tol = 1e-12;
    const StokesResult res = solve_stokes(rho, StaggeredField(g), f, 0.03, opts);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i)
            CHECK(std::abs(res.u.ux(i, j) + res.u.ux(g.nx - i, j)) < 1e-10);
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            CHECK(std::abs(res.u.vy(i, j) - res.u.vy(g.nx - 1 - i, j)) < 1e-10);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            CHECK(std::abs(res.p.at(i, j) - res.p.at(g.nx - 1 - i, j)) < 1e-10);
}

TEST_CASE("constant density reduces to the rescaled unit-density problem") {
    const Grid g = Grid::make(24, 18);
    const double c = 1.6, mu = 0.9, dt = 0.02;
    ScalarField rho_c(g), rho_1(g);
    for (double& r : rho_c.v) r = c;
    for (double& r : rho_1.v) r = 1.0;
    StaggeredField u_old = vortex(g, 0.7), f(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i)
            f.ux(i, j) = std::sin(2.0 * g.xf(i)) * std::cos(3.0 * g.yc(j));
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            f.vy(i, j) = std::cos(1.5 * g.xc(i)) * std::sin(2.5 * g.yf(j));

    StokesOptions opts_c;
    opts_c.mu = mu;
    opts_c.saddle_tol = 1e-12;
    const StokesResult full = solve_stokes(rho_c, u_old, f, dt, opts_c);

    StaggeredField f_scaled = f;
    for (double& v : f_scaled.u) v /= c;
    for (double& v : f_scaled.v) v /= c;
    StokesOptions opts_1;
    opts_1.mu = mu / c;
    opts_1.saddle_tol = 1e-12;
    const StokesResult scaled = solve_stokes(rho_1, u_old, f_scaled, dt, opts_1);

    for (size_t n = 0; n < full.u.u.size(); ++n)
        CHECK(std::abs(full.u.u[n] - scaled.u.u[n]) < 1e-9);
    for (size_t n = 0; n < full.u.v.size(); ++n)
        CHECK(std::abs(full.u.v[n] - scaled.u.v[n]) < 1e-9);
    for (int n = 0; n < g.cells(); ++n)
        CHECK(std::abs(full.p.v[n] - c * scaled.p.v[n]) < 1e-8);
}

TEST_CASE("nonpositive density is rejected") {
    const Grid g = Grid::make(8, 8);
    ScalarField rho(g);
    for (double& r : rho.v) r = 1.0;
    rho.at(3, 4) = 0.0;
    CHECK_THROWS_AS((void)solve_stokes(rho, StaggeredField(g), StaggeredField(g), 0.01),
                    NonPositiveDensity);
    rho.at(3, 4) = -0.2;
    CHECK_THROWS_AS((void)solve_stokes(rho, StaggeredField(g), StaggeredField(g), 0.01),
                    NonPositiveDensity);
}
