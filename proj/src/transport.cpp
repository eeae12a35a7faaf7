#include "nlc/transport.hpp"

#include <algorithm>
#include <cmath>

#include "nlc/operators.hpp"

namespace nlc {

double advective_cfl(const StaggeredField& v, double dt) {
    double umax = 0.0, vmax = 0.0;
    for (double x : v.u) umax = std::max(umax, std::abs(x));
    for (double x : v.v) vmax = std::max(vmax, std::abs(x));
    return dt * (umax / v.grid.hx + vmax / v.grid.hy);
}

namespace {

ScalarField upwind_step(const ScalarField& rho, const StaggeredField& v, double dt) {
    const Grid& g = rho.grid;

    // Face fluxes F = v * rho_upwind.  The donor cell is the one the flow
    // leaves; at in-flow boundary faces the ghost density copies the
    // interior cell (zero-gradient), which keeps the update a convex
    // combination of existing cell values.
    std::vector<double> fx(g.xfaces(), 0.0), fy(g.yfaces(), 0.0);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) {
            const double w = v.ux(i, j);
            if (w == 0.0) continue;
            int donor = w > 0.0 ? i - 1 : i;
            donor = std::clamp(donor, 0, g.nx - 1);
            fx[g.uidx(i, j)] = w * rho.at(donor, j);
        }
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double w = v.vy(i, j);
            if (w == 0.0) continue;
            int donor = w > 0.0 ? j - 1 : j;
            donor = std::clamp(donor, 0, g.ny - 1);
            fy[g.vidx(i, j)] = w * rho.at(i, donor);
        }

    ScalarField out(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            out.at(i, j) = rho.at(i, j) -
                           dt * ((fx[g.uidx(i + 1, j)] - fx[g.uidx(i, j)]) / g.hx +
                                 (fy[g.vidx(i, j + 1)] - fy[g.vidx(i, j)]) / g.hy);
    return out;
}

// a, b are fractional cell-center indices; samples outside the center hull
// clamp to the boundary values (zero-gradient extension).
double sample_bilinear(const ScalarField& s, double a, double b) {
    const Grid& g = s.grid;
    a = std::clamp(a, 0.0, double(g.nx - 1));
    b = std::clamp(b, 0.0, double(g.ny - 1));
    const int i0 = std::min(int(a), g.nx - 2);
    const int j0 = std::min(int(b), g.ny - 2);
    const double ta = a - i0, tb = b - j0;
    if (ta == 0.0 && tb == 0.0) return s.at(i0, j0); // stationary backtrace stays bitwise
    const double s00 = s.at(i0, j0), s10 = s.at(i0 + 1, j0);
    const double s01 = s.at(i0, j0 + 1), s11 = s.at(i0 + 1, j0 + 1);
    return (1.0 - tb) * ((1.0 - ta) * s00 + ta * s10) + tb * ((1.0 - ta) * s01 + ta * s11);
}

ScalarField semi_lagrangian_step(const ScalarField& rho, const StaggeredField& v, double dt) {
    const Grid& g = rho.grid;
    ScalarField out(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double uc = 0.5 * (v.ux(i, j) + v.ux(i + 1, j));
            const double vc = 0.5 * (v.vy(i, j) + v.vy(i, j + 1));
            out.at(i, j) = sample_bilinear(rho, i - dt * uc / g.hx, j - dt * vc / g.hy);
        }
    return out;
}

} // namespace

ScalarField solve_transport(const ScalarField& rho_old, const StaggeredField& v, double dt,
                            const TransportOptions& opts) {
    require_same_grid(rho_old.grid, v.grid);
    const double cfl = advective_cfl(v, dt);
    if (cfl > opts.cfl_max) throw CflViolation(cfl, opts.cfl_max);
    const double dinf = linf_norm_cells(div(v));
    if (dinf > opts.div_tol) throw NonSolenoidalVelocity(dinf, opts.div_tol);

    return opts.scheme == TransportScheme::upwind ? upwind_step(rho_old, v, dt)
                                                  : semi_lagrangian_step(rho_old, v, dt);
}

std::pair<double, double> density_extrema(const ScalarField& rho) {
    double lo = rho.v[0], hi = rho.v[0];
    for (double x : rho.v) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    return {lo, hi};
}

} // namespace nlc
