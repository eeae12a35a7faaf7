#include "nlc/diagnostics.hpp"

#include <cmath>
#include <limits>

#include "nlc/transport.hpp"
#include "pcg.hpp"

namespace nlc {

EnergyBreakdown energy(const FlowState& state, double lambda, Closure closure) {
    const Grid& g = state.grid();
    auto [uc, vc] = faces_to_center(state.u);

    double kin = 0.0;
    for (int n = 0; n < g.cells(); ++n)
        kin += state.rho.v[n] * (uc.v[n] * uc.v[n] + vc.v[n] * vc.v[n]);

    double ela = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            for (int k = 0; k < 3; ++k) {
                const double dx = centered_dx(state.d.c[k], g, i, j, closure);
                const double dy = centered_dy(state.d.c[k], g, i, j, closure);
                ela += dx * dx + dy * dy;
            }

    EnergyBreakdown e;
    e.kinetic = 0.5 * kin * g.cell_volume();
    e.elastic = 0.5 * lambda * ela * g.cell_volume();
    e.total = e.kinetic + e.elastic;
    return e;
}

namespace {

// Squared-gradient quadrature of one staggered component from stored face
// values only.  Differences along the component's own axis land on cell
// centers and tile the domain; transverse differences land on the dual
// lattice and get trapezoid-extended weights (half at the first and last
// slots) so constant-gradient fields integrate exactly.
double grad_sq_u(const StaggeredField& w) {
    const Grid& g = w.grid;
    double acc = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double d = (w.ux(i + 1, j) - w.ux(i, j)) / g.hx;
            acc += d * d;
        }
    for (int j = 0; j + 1 < g.ny; ++j) {
        const double wy = (j == 0 || j + 2 == g.ny) ? 1.5 : 1.0;
        for (int i = 0; i <= g.nx; ++i) {
            const double wx = (i == 0 || i == g.nx) ? 0.5 : 1.0;
            const double d = (w.ux(i, j + 1) - w.ux(i, j)) / g.hy;
            acc += wx * wy * d * d;
        }
    }
    return acc * g.cell_volume();
}

double grad_sq_v(const StaggeredField& w) {
    const Grid& g = w.grid;
    double acc = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double d = (w.vy(i, j + 1) - w.vy(i, j)) / g.hy;
            acc += d * d;
        }
    for (int j = 0; j <= g.ny; ++j) {
        const double wy = (j == 0 || j == g.ny) ? 0.5 : 1.0;
        for (int i = 0; i + 1 < g.nx; ++i) {
            const double wx = (i == 0 || i + 2 == g.nx) ? 1.5 : 1.0;
            const double d = (w.vy(i + 1, j) - w.vy(i, j)) / g.hx;
            acc += wx * wy * d * d;
        }
    }
    return acc * g.cell_volume();
}

} // namespace

double dissipation(const FlowState& state, double mu, double lambda, double gamma,
                   Closure closure) {
    const Grid& g = state.grid();
    const double viscous = mu * (grad_sq_u(state.u) + grad_sq_v(state.u));

    ScalarField comp(g);
    ScalarField lap[3] = {ScalarField(g), ScalarField(g), ScalarField(g)};
    for (int k = 0; k < 3; ++k) {
        comp.v = state.d.c[k];
        lap[k] = laplacian(comp, closure);
    }
    double relax = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            double grad2 = 0.0;
            for (int k = 0; k < 3; ++k) {
                const double dx = centered_dx(state.d.c[k], g, i, j, closure);
                const double dy = centered_dy(state.d.c[k], g, i, j, closure);
                grad2 += dx * dx + dy * dy;
            }
            for (int k = 0; k < 3; ++k) {
                const double r = lap[k].at(i, j) + grad2 * state.d.at(k, i, j);
                relax += r * r;
            }
        }
    return viscous + lambda * gamma * relax * g.cell_volume();
}

std::vector<double> energy_law_residual(const DiagnosticsRecord& rec) {
    std::vector<double> out;
    for (size_t n = 1; n < rec.rows.size(); ++n) {
        const double dt = rec.rows[n].t - rec.rows[n - 1].t;
        out.push_back((rec.rows[n].e_total - rec.rows[n - 1].e_total) / dt +
                      rec.rows[n].dissipation);
    }
    return out;
}

double integrated_energy_residual(const DiagnosticsRecord& rec) {
    double acc = 0.0;
    for (size_t n = 1; n < rec.rows.size(); ++n) {
        const double dt = rec.rows[n].t - rec.rows[n - 1].t;
        acc += std::abs((rec.rows[n].e_total - rec.rows[n - 1].e_total) / dt +
                        rec.rows[n].dissipation) *
               dt;
    }
    return acc;
}

double dirichlet_lambda1(const Grid& grid, double tol) {
    ScalarField scratch(grid);
    auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
        scratch.v = in;
        const ScalarField lap = laplacian(scratch, Closure::dirichlet);
        out.resize(in.size());
        for (size_t n = 0; n < in.size(); ++n) out[n] = -lap.v[n];
    };
    const double diag = 2.0 / (grid.hx * grid.hx) + 2.0 / (grid.hy * grid.hy);
    auto precond = [&](const std::vector<double>& in, std::vector<double>& out) {
        out.resize(in.size());
        for (size_t n = 0; n < in.size(); ++n) out[n] = in[n] / diag;
    };

    std::vector<double> x(grid.cells(), 1.0), y(grid.cells(), 0.0), ax;
    double lambda_prev = 0.0;
    for (int it = 0; it < 200; ++it) {
        y.assign(x.size(), 0.0);
        detail::pcg(apply, precond, x, y, 1e-12, 200000, "inverse power iteration solve");
        const double norm = std::sqrt(detail::dot(y, y));
        for (size_t n = 0; n < y.size(); ++n) y[n] /= norm;
        apply(y, ax);
        const double lambda = detail::dot(y, ax);
        x = y;
        if (it > 0 && std::abs(lambda - lambda_prev) <= tol * lambda) return lambda;
        lambda_prev = lambda;
    }
    throw LinearSolveDiverged("inverse power iteration did not settle");
}

DecayReport decay_check(const DiagnosticsRecord& rec, const Grid& grid, double lambda,
                        double lambda1) {
    DecayReport rep;
    rep.lambda1 = lambda1 > 0.0 ? lambda1 : dirichlet_lambda1(grid);
    if (rec.rows.empty()) return rep;
    rep.rho_hat = rec.rows.front().rho_max;
    const double a = 2.0 * rep.lambda1 / rep.rho_hat;

    auto measured = [&](const DiagnosticsRow& row) {
        return 2.0 * row.e_kin + 2.0 * row.e_elastic / lambda;
    };
    rep.x0 = measured(rec.rows.front());
    rep.min_margin = std::numeric_limits<double>::infinity();
    const double t0 = rec.rows.front().t;
    for (const DiagnosticsRow& row : rec.rows) {
        const double t = row.t - t0;
        // Stable rewrite of exp(-a t) (1 + a t exp(a t)).
        const double bound = rep.x0 * (std::exp(-a * t) + a * t);
        const double margin = bound - measured(row);
        rep.margins.push_back(margin);
        rep.min_margin = std::min(rep.min_margin, margin);
    }
    return rep;
}

double relative_energy(const FlowState& a, const FlowState& b) {
    require_same_grid(a.grid(), b.grid());
    const Grid& g = a.grid();
    auto [ua, va] = faces_to_center(a.u);
    auto [ub, vb] = faces_to_center(b.u);

    double acc = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int n = g.cidx(i, j);
            const double du = ua.v[n] - ub.v[n];
            const double dv = va.v[n] - vb.v[n];
            acc += b.rho.v[n] * (du * du + dv * dv);
            const double drho = a.rho.v[n] - b.rho.v[n];
            acc += drho * drho;
            double dd2 = 0.0, gd2 = 0.0;
            for (int k = 0; k < 3; ++k) {
                const double dd = a.d.c[k][n] - b.d.c[k][n];
                dd2 += dd * dd;
            }
            acc += dd2;
            for (int k = 0; k < 3; ++k) {
                // Gradient of the difference, same centered stencil as the
                // elastic energy.
                const double gx = centered_dx(a.d.c[k], g, i, j, Closure::neumann) -
                                  centered_dx(b.d.c[k], g, i, j, Closure::neumann);
                const double gy = centered_dy(a.d.c[k], g, i, j, Closure::neumann) -
                                  centered_dy(b.d.c[k], g, i, j, Closure::neumann);
                gd2 += gx * gx + gy * gy;
            }
            acc += gd2;
        }
    return acc * g.cell_volume();
}

ConservationReport transport_conservation_report(const std::vector<FlowState>& states) {
    ConservationReport rep;
    if (states.empty()) return rep;
    const double mass0 = integral_cells(states.front().rho);
    rep.min_over_time = std::numeric_limits<double>::infinity();
    rep.max_over_time = -std::numeric_limits<double>::infinity();
    for (const FlowState& s : states) {
        ConservationRow row;
        row.t = s.t;
        row.mass = integral_cells(s.rho);
        auto [lo, hi] = density_extrema(s.rho);
        row.rho_min = lo;
        row.rho_max = hi;
        double l1 = 0.0, l2 = 0.0;
        for (double x : s.rho.v) {
            l1 += std::abs(x);
            l2 += x * x;
        }
        row.l1 = l1 * s.grid().cell_volume();
        row.l2 = std::sqrt(l2 * s.grid().cell_volume());
        rep.rows.push_back(row);
        rep.max_mass_drift_rel =
            std::max(rep.max_mass_drift_rel, std::abs(row.mass - mass0) / std::abs(mass0));
        rep.min_over_time = std::min(rep.min_over_time, lo);
        rep.max_over_time = std::max(rep.max_over_time, hi);
    }
    return rep;
}

} // namespace nlc
