#include "nlc/stokes.hpp"

#include <algorithm>
#include <cmath>

#include "pcg.hpp"

namespace nlc {

namespace {

// Face density, arithmetic mean of the adjacent cells (single cell at the
// wall, where the value only pads the pinned rows).
StaggeredField face_density(const ScalarField& rho) {
    return center_to_faces(rho, FaceRule::nearest);
}

inline bool interior_x(const Grid& g, int i) { return i >= 1 && i <= g.nx - 1; }
inline bool interior_y(const Grid& g, int j) { return j >= 1 && j <= g.ny - 1; }

} // namespace

StaggeredField velocity_laplacian(const StaggeredField& w, double mu) {
    const Grid& g = w.grid;
    StaggeredField out(g);
    const double ix2 = 1.0 / (g.hx * g.hx), iy2 = 1.0 / (g.hy * g.hy);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) {
            const double c = w.ux(i, j);
            const double n = (j + 1 < g.ny) ? w.ux(i, j + 1) : -c;
            const double s = (j - 1 >= 0) ? w.ux(i, j - 1) : -c;
            out.ux(i, j) = mu * ((w.ux(i + 1, j) - 2.0 * c + w.ux(i - 1, j)) * ix2 +
                                 (n - 2.0 * c + s) * iy2);
        }
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double c = w.vy(i, j);
            const double e = (i + 1 < g.nx) ? w.vy(i + 1, j) : -c;
            const double ww = (i - 1 >= 0) ? w.vy(i - 1, j) : -c;
            out.vy(i, j) = mu * ((e - 2.0 * c + ww) * ix2 +
                                 (w.vy(i, j + 1) - 2.0 * c + w.vy(i, j - 1)) * iy2);
        }
    return out;
}

StaggeredField advect_velocity(const StaggeredField& w) {
    const Grid& g = w.grid;
    StaggeredField out(g);
    const double tx = 0.5 / g.hx, ty = 0.5 / g.hy;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) {
            const double c = w.ux(i, j);
            const double n = (j + 1 < g.ny) ? w.ux(i, j + 1) : -c;
            const double s = (j - 1 >= 0) ? w.ux(i, j - 1) : -c;
            const double vbar = 0.25 * (w.vy(i - 1, j) + w.vy(i, j) +
                                        w.vy(i - 1, j + 1) + w.vy(i, j + 1));
            out.ux(i, j) = c * (w.ux(i + 1, j) - w.ux(i - 1, j)) * tx + vbar * (n - s) * ty;
        }
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double c = w.vy(i, j);
            const double e = (i + 1 < g.nx) ? w.vy(i + 1, j) : -c;
            const double ww = (i - 1 >= 0) ? w.vy(i - 1, j) : -c;
            const double ubar = 0.25 * (w.ux(i, j - 1) + w.ux(i + 1, j - 1) +
                                        w.ux(i, j) + w.ux(i + 1, j));
            out.vy(i, j) = ubar * (e - ww) * tx + c * (w.vy(i, j + 1) - w.vy(i, j - 1)) * ty;
        }
    return out;
}

StaggeredField elastic_force(const DirectorField& f, double lambda, Closure closure) {
    const Grid& g = f.grid;
    ScalarField fx(g), fy(g);
    ScalarField lap[3] = {ScalarField(g), ScalarField(g), ScalarField(g)};
    ScalarField comp(g);
    for (int k = 0; k < 3; ++k) {
        comp.v = f.c[k];
        lap[k] = laplacian(comp, closure);
    }
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            double sx = 0.0, sy = 0.0;
            for (int k = 0; k < 3; ++k) {
                const double l = lap[k].at(i, j);
                sx += centered_dx(f.c[k], g, i, j, closure) * l;
                sy += centered_dy(f.c[k], g, i, j, closure) * l;
            }
            fx.at(i, j) = -lambda * sx;
            fy.at(i, j) = -lambda * sy;
        }

    StaggeredField out(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i)
            out.ux(i, j) = 0.5 * (fx.at(i - 1, j) + fx.at(i, j));
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            out.vy(i, j) = 0.5 * (fy.at(i, j - 1) + fy.at(i, j));
    return out;
}

namespace {

// Flat packing of the velocity unknowns: all x faces then all y faces.
// Boundary-normal faces ride along as exact zeros (masked rows).
struct VelocityOp {
    const Grid& g;
    const StaggeredField& rho_f;
    double dt, mu;

    void mask(std::vector<double>& w) const {
        for (int j = 0; j < g.ny; ++j) {
            w[g.uidx(0, j)] = 0.0;
            w[g.uidx(g.nx, j)] = 0.0;
        }
        double* vb = w.data() + g.xfaces();
        for (int i = 0; i < g.nx; ++i) {
            vb[g.vidx(i, 0)] = 0.0;
            vb[g.vidx(i, g.ny)] = 0.0;
        }
    }

    void apply(const std::vector<double>& in, std::vector<double>& out) const {
        out.assign(in.size(), 0.0);
        const double ix2 = mu / (g.hx * g.hx), iy2 = mu / (g.hy * g.hy);
        const double* u = in.data();
        const double* v = in.data() + g.xfaces();
        double* ou = out.data();
        double* ov = out.data() + g.xfaces();
        for (int j = 0; j < g.ny; ++j)
            for (int i = 1; i < g.nx; ++i) {
                const int n = g.uidx(i, j);
                const double c = u[n];
                const double up = (j + 1 < g.ny) ? u[g.uidx(i, j + 1)] : -c;
                const double dn = (j - 1 >= 0) ? u[g.uidx(i, j - 1)] : -c;
                ou[n] = (rho_f.u[n] / dt) * c -
                        ((u[g.uidx(i + 1, j)] - 2.0 * c + u[g.uidx(i - 1, j)]) * ix2 +
                         (up - 2.0 * c + dn) * iy2);
            }
        for (int j = 1; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const int n = g.vidx(i, j);
                const double c = v[n];
                const double e = (i + 1 < g.nx) ? v[g.vidx(i + 1, j)] : -c;
                const double w = (i - 1 >= 0) ? v[g.vidx(i - 1, j)] : -c;
                ov[n] = (rho_f.v[n] / dt) * c -
                        ((e - 2.0 * c + w) * ix2 +
                         (v[g.vidx(i, j + 1)] - 2.0 * c + v[g.vidx(i, j - 1)]) * iy2);
            }
    }

    std::vector<double> jacobi_diag() const {
        std::vector<double> d(g.xfaces() + g.yfaces(), 1.0);
        const double ix2 = mu / (g.hx * g.hx), iy2 = mu / (g.hy * g.hy);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 1; i < g.nx; ++i) {
                const double wall = (j == 0 ? 1.0 : 0.0) + (j == g.ny - 1 ? 1.0 : 0.0);
                d[g.uidx(i, j)] = rho_f.u[g.uidx(i, j)] / dt + 2.0 * ix2 + (2.0 + wall) * iy2;
            }
        double* dv = d.data() + g.xfaces();
        for (int j = 1; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const double wall = (i == 0 ? 1.0 : 0.0) + (i == g.nx - 1 ? 1.0 : 0.0);
                dv[g.vidx(i, j)] = rho_f.v[g.vidx(i, j)] / dt + (2.0 + wall) * ix2 + 2.0 * iy2;
            }
        return d;
    }
};

void pack(const StaggeredField& w, std::vector<double>& out) {
    out.resize(w.u.size() + w.v.size());
    std::copy(w.u.begin(), w.u.end(), out.begin());
    std::copy(w.v.begin(), w.v.end(), out.begin() + w.u.size());
}

void unpack(const std::vector<double>& in, StaggeredField& w) {
    std::copy(in.begin(), in.begin() + w.u.size(), w.u.begin());
    std::copy(in.begin() + w.u.size(), in.end(), w.v.begin());
}

void subtract_mean(std::vector<double>& p) {
    double m = 0.0;
    for (double x : p) m += x;
    m /= double(p.size());
    for (double& x : p) x -= m;
}

} // namespace

StokesResult solve_stokes(const ScalarField& rho, const StaggeredField& u_old,
                          const StaggeredField& f_rhs, double dt, const StokesOptions& opts,
                          const StaggeredField* u_hint, const ScalarField* p_hint) {
    require_same_grid(rho.grid, u_old.grid);
    require_same_grid(rho.grid, f_rhs.grid);
    const Grid& g = rho.grid;

    const auto [rho_min, rho_max] = std::minmax_element(rho.v.begin(), rho.v.end());
    if (!(*rho_min > 0.0)) throw NonPositiveDensity(*rho_min);
    if (!(dt > 0.0)) throw SolverError("solve_stokes: dt must be positive");

    const StaggeredField rho_f = face_density(rho);
    const VelocityOp a_op{g, rho_f, dt, opts.mu};
    const std::vector<double> a_diag = a_op.jacobi_diag();
    const double inner_tol = 0.1 * opts.saddle_tol;

    // Right-hand side b = f_rhs + (rho/dt) u_old on interior faces.
    std::vector<double> b;
    pack(f_rhs, b);
    {
        std::vector<double> uo;
        pack(u_old, uo);
        std::vector<double> rf;
        pack(rho_f, rf);
        for (size_t n = 0; n < b.size(); ++n) b[n] += rf[n] / dt * uo[n];
        a_op.mask(b);
    }

    // Trivial data short-circuits to the exact zero solution so the resting
    // state reproduces itself bit for bit.
    const bool b_zero = std::all_of(b.begin(), b.end(), [](double x) { return x == 0.0; });
    const bool hints_zero =
        (u_hint == nullptr ||
         (std::all_of(u_hint->u.begin(), u_hint->u.end(), [](double x) { return x == 0.0; }) &&
          std::all_of(u_hint->v.begin(), u_hint->v.end(), [](double x) { return x == 0.0; }))) &&
        (p_hint == nullptr ||
         std::all_of(p_hint->v.begin(), p_hint->v.end(), [](double x) { return x == 0.0; }));
    if (b_zero && hints_zero)
        return {StaggeredField(g), ScalarField(g), 0, 0.0};

    auto apply_a = [&](const std::vector<double>& in, std::vector<double>& out) {
        a_op.apply(in, out);
    };
    auto precond_a = [&](const std::vector<double>& in, std::vector<double>& out) {
        out.resize(in.size());
        for (size_t n = 0; n < in.size(); ++n) out[n] = in[n] / a_diag[n];
    };

    // Inverse-density face weights for the pressure preconditioner.
    StaggeredField w_rho(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i)
            w_rho.ux(i, j) = 1.0 / rho_f.ux(i, j);
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            w_rho.vy(i, j) = 1.0 / rho_f.vy(i, j);

    ScalarField q_scratch(g);
    auto apply_lrho = [&](const std::vector<double>& in, std::vector<double>& out) {
        q_scratch.v = in;
        StaggeredField gq = grad(q_scratch, Closure::neumann);
        for (size_t n = 0; n < gq.u.size(); ++n) gq.u[n] *= w_rho.u[n];
        for (size_t n = 0; n < gq.v.size(); ++n) gq.v[n] *= w_rho.v[n];
        const ScalarField d = div(gq);
        out.resize(in.size());
        for (size_t n = 0; n < out.size(); ++n) out[n] = -d.v[n];
    };
    std::vector<double> lrho_diag(g.cells(), 0.0);
    {
        const double ix2 = 1.0 / (g.hx * g.hx), iy2 = 1.0 / (g.hy * g.hy);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                lrho_diag[g.cidx(i, j)] =
                    (w_rho.ux(i, j) + w_rho.ux(i + 1, j)) * ix2 +
                    (w_rho.vy(i, j) + w_rho.vy(i, j + 1)) * iy2;
    }
    auto precond_lrho = [&](const std::vector<double>& in, std::vector<double>& out) {
        out.resize(in.size());
        for (size_t n = 0; n < in.size(); ++n) out[n] = in[n] / lrho_diag[n];
    };

    // Cahouet-Chabard style application of an approximate Schur inverse:
    // z = mu * r + (1/dt) * Lrho^{-1} r, with the weighted Poisson problem
    // solved tightly so the outer conjugate directions see one fixed
    // preconditioner.
    std::vector<double> q(g.cells(), 0.0);
    auto precond_schur = [&](const std::vector<double>& r, std::vector<double>& z) {
        std::vector<double> rm = r;
        subtract_mean(rm);
        q.assign(g.cells(), 0.0);
        detail::pcg(apply_lrho, precond_lrho, rm, q, 1e-12, opts.max_inner_iters,
                    "pressure preconditioner poisson solve");
        subtract_mean(q);
        z.resize(r.size());
        for (size_t n = 0; n < z.size(); ++n) z[n] = opts.mu * r[n] + q[n] / dt;
        subtract_mean(z);
    };

    // Outer conjugate directions on the pressure Schur complement
    // S = G^T A^{-1} G (SPD on mean-zero pressures).  The running velocity
    // u = A^{-1}(b - G p) makes -div(u) the exact outer residual.
    std::vector<double> p(g.cells(), 0.0);
    if (p_hint != nullptr) {
        require_same_grid(p_hint->grid, g);
        p = p_hint->v;
        subtract_mean(p);
    }
    std::vector<double> u;
    if (u_hint != nullptr) {
        require_same_grid(u_hint->grid, g);
        pack(*u_hint, u);
    } else {
        pack(u_old, u);
    }
    a_op.mask(u);

    ScalarField p_field(g);
    StaggeredField u_field(g);
    std::vector<double> rhs_u = b;
    {
        p_field.v = p;
        const StaggeredField gp = grad(p_field, Closure::neumann);
        std::vector<double> gpv;
        pack(gp, gpv);
        for (size_t n = 0; n < rhs_u.size(); ++n) rhs_u[n] = b[n] - gpv[n];
        a_op.mask(rhs_u);
        detail::pcg(apply_a, precond_a, rhs_u, u, inner_tol, opts.max_inner_iters,
                    "stokes velocity solve");
    }

    std::vector<double> r(g.cells()), z, dir, w_vec, s_dir(g.cells());
    double rz_prev = 0.0;
    int outer = 0;
    double div_inf = 0.0;
    for (;; ++outer) {
        unpack(u, u_field);
        const ScalarField du = div(u_field);
        div_inf = linf_norm_cells(du);
        if (div_inf <= opts.saddle_tol) break;
        if (outer >= opts.max_outer_iters)
            throw SaddleSolveDiverged("no convergence in " + std::to_string(outer) +
                                      " outer iterations, |div u|_inf = " +
                                      detail::sci(div_inf));
        for (int n = 0; n < g.cells(); ++n) r[n] = -du.v[n];

        precond_schur(r, z);
        const double rz = detail::dot(r, z);
        if (!(rz > 0.0))
            throw SaddleSolveDiverged("schur preconditioner lost positive definiteness");
        if (dir.empty()) {
            dir = z;
        } else {
            const double beta = rz / rz_prev;
            for (int n = 0; n < g.cells(); ++n) dir[n] = z[n] + beta * dir[n];
        }
        rz_prev = rz;

        // w = A^{-1} G dir, S dir = -div(w).
        p_field.v = dir;
        const StaggeredField gdir = grad(p_field, Closure::neumann);
        std::vector<double> gdirv;
        pack(gdir, gdirv);
        a_op.mask(gdirv);
        w_vec.assign(gdirv.size(), 0.0);
        detail::pcg(apply_a, precond_a, gdirv, w_vec, inner_tol, opts.max_inner_iters,
                    "stokes velocity solve");
        unpack(w_vec, u_field);
        const ScalarField dw = div(u_field);
        for (int n = 0; n < g.cells(); ++n) s_dir[n] = -dw.v[n];

        const double denom = detail::dot(dir, s_dir);
        if (!(denom > 0.0))
            throw SaddleSolveDiverged("schur operator lost positive definiteness");
        const double alpha = rz / denom;
        for (int n = 0; n < g.cells(); ++n) p[n] += alpha * dir[n];
        for (size_t n = 0; n < u.size(); ++n) u[n] -= alpha * w_vec[n];
    }

    StokesResult res{StaggeredField(g), ScalarField(g), outer, div_inf};
    unpack(u, res.u);
    subtract_mean(p);
    res.p.v = p;
    return res;
}

std::pair<double, double> saddle_residuals(const StaggeredField& u, const ScalarField& p,
                                           const ScalarField& rho, const StaggeredField& u_old,
                                           const StaggeredField& f_rhs, double dt,
                                           const StokesOptions& opts) {
    const Grid& g = rho.grid;
    const StaggeredField rho_f = face_density(rho);
    const StaggeredField lap = velocity_laplacian(u, opts.mu);
    const StaggeredField gp = grad(p, Closure::neumann);

    double mom = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) {
            const int n = g.uidx(i, j);
            const double res = rho_f.u[n] / dt * (u.u[n] - u_old.u[n]) - lap.u[n] + gp.u[n] -
                               f_rhs.u[n];
            mom = std::max(mom, std::abs(res));
        }
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int n = g.vidx(i, j);
            const double res = rho_f.v[n] / dt * (u.v[n] - u_old.v[n]) - lap.v[n] + gp.v[n] -
                               f_rhs.v[n];
            mom = std::max(mom, std::abs(res));
        }
    return {mom, linf_norm_cells(div(u))};
}

} // namespace nlc
