#include "nlc/director.hpp"

#include <cmath>

#include "pcg.hpp"

namespace nlc {

DirectorField director_source(const StaggeredField& v, const DirectorField& f, double gamma,
                              Closure closure) {
    require_same_grid(v.grid, f.grid);
    const Grid& g = f.grid;
    auto [uc, vc] = faces_to_center(v);

    DirectorField out(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            double grad2 = 0.0;
            double dx[3], dy[3];
            for (int k = 0; k < 3; ++k) {
                dx[k] = centered_dx(f.c[k], g, i, j, closure);
                dy[k] = centered_dy(f.c[k], g, i, j, closure);
                grad2 += dx[k] * dx[k] + dy[k] * dy[k];
            }
            for (int k = 0; k < 3; ++k)
                out.at(k, i, j) = -(uc.at(i, j) * dx[k] + vc.at(i, j) * dy[k]) +
                                  gamma * grad2 * f.at(k, i, j);
        }
    return out;
}

DirectorField solve_director(const DirectorField& d_old, const StaggeredField& v,
                             const DirectorField& f, double dt, const DirectorOptions& opts) {
    require_same_grid(d_old.grid, v.grid);
    require_same_grid(d_old.grid, f.grid);
    const Grid& g = d_old.grid;
    const DirectorField src = director_source(v, f, opts.gamma, opts.closure);

    ScalarField scratch(g);
    auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
        scratch.v = in;
        const ScalarField lap = laplacian(scratch, opts.closure);
        out.resize(in.size());
        for (size_t n = 0; n < in.size(); ++n)
            out[n] = in[n] - opts.gamma * dt * lap.v[n];
    };
    auto jacobi = [&](const std::vector<double>& in, std::vector<double>& out) {
        const double diag = 1.0 + opts.gamma * dt * (2.0 / (g.hx * g.hx) + 2.0 / (g.hy * g.hy));
        out.resize(in.size());
        for (size_t n = 0; n < in.size(); ++n) out[n] = in[n] / diag;
    };

    DirectorField d_new(g);
    std::vector<double> rhs(g.cells());
    for (int k = 0; k < 3; ++k) {
        for (int n = 0; n < g.cells(); ++n)
            rhs[n] = d_old.c[k][n] + dt * src.c[k][n];
        d_new.c[k] = d_old.c[k]; // warm start
        detail::pcg(apply, jacobi, rhs, d_new.c[k], opts.linear_solver_tol, opts.max_iters,
                    "director heat solve");
    }
    if (opts.renormalize) d_new = renormalized(d_new);
    return d_new;
}

double unit_norm_drift(const DirectorField& d) {
    double drift = 0.0;
    const size_t n = d.c[0].size();
    for (size_t m = 0; m < n; ++m) {
        const double norm = std::sqrt(d.c[0][m] * d.c[0][m] + d.c[1][m] * d.c[1][m] +
                                      d.c[2][m] * d.c[2][m]);
        drift = std::max(drift, std::abs(norm - 1.0));
    }
    return drift;
}

DirectorField renormalized(const DirectorField& d) {
    DirectorField out = d;
    const size_t n = d.c[0].size();
    for (size_t m = 0; m < n; ++m) {
        const double norm = std::sqrt(d.c[0][m] * d.c[0][m] + d.c[1][m] * d.c[1][m] +
                                      d.c[2][m] * d.c[2][m]);
        if (!(norm > 0.0))
            throw SolverError("renormalized: zero director cannot be projected");
        // Skip cells already unit to a few ulps so the projection is
        // exactly idempotent.
        if (std::abs(norm - 1.0) <= 4.0 * 2.220446049250313e-16) continue;
        for (int k = 0; k < 3; ++k) out.c[k][m] = d.c[k][m] / norm;
    }
    return out;
}

} // namespace nlc
