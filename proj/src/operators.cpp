#include "nlc/operators.hpp"

#include <cmath>

namespace nlc {

StaggeredField grad(const ScalarField& s, Closure bc) {
    const Grid& g = s.grid;
    StaggeredField out(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 1; i < g.nx; ++i)
            out.ux(i, j) = (s.at(i, j) - s.at(i - 1, j)) / g.hx;
        switch (bc) {
        case Closure::neumann:
            out.ux(0, j) = 0.0;
            out.ux(g.nx, j) = 0.0;
            break;
        case Closure::dirichlet:
            // Antimirror ghost: wall value 0 half a cell away.
            out.ux(0, j) = (s.at(0, j) + s.at(0, j)) / g.hx;
            out.ux(g.nx, j) = -(s.at(g.nx - 1, j) + s.at(g.nx - 1, j)) / g.hx;
            break;
        case Closure::periodic:
            out.ux(0, j) = (s.at(0, j) - s.at(g.nx - 1, j)) / g.hx;
            out.ux(g.nx, j) = out.ux(0, j);
            break;
        }
    }
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            out.vy(i, j) = (s.at(i, j) - s.at(i, j - 1)) / g.hy;
    for (int i = 0; i < g.nx; ++i) {
        switch (bc) {
        case Closure::neumann:
            out.vy(i, 0) = 0.0;
            out.vy(i, g.ny) = 0.0;
            break;
        case Closure::dirichlet:
            out.vy(i, 0) = (s.at(i, 0) + s.at(i, 0)) / g.hy;
            out.vy(i, g.ny) = -(s.at(i, g.ny - 1) + s.at(i, g.ny - 1)) / g.hy;
            break;
        case Closure::periodic:
            out.vy(i, 0) = (s.at(i, 0) - s.at(i, g.ny - 1)) / g.hy;
            out.vy(i, g.ny) = out.vy(i, 0);
            break;
        }
    }
    return out;
}

ScalarField div(const StaggeredField& w) {
    const Grid& g = w.grid;
    ScalarField out(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            out.at(i, j) = (w.ux(i + 1, j) - w.ux(i, j)) / g.hx +
                           (w.vy(i, j + 1) - w.vy(i, j)) / g.hy;
    return out;
}

ScalarField laplacian(const ScalarField& s, Closure bc) {
    // Composed form on purpose: tests require div(grad(s)) to match this
    // function entrywise with no rounding slack.
    return div(grad(s, bc));
}

StaggeredField center_to_faces(const ScalarField& s, FaceRule rule) {
    const Grid& g = s.grid;
    StaggeredField out(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 1; i < g.nx; ++i)
            out.ux(i, j) = 0.5 * (s.at(i - 1, j) + s.at(i, j));
        if (rule == FaceRule::extrapolate) {
            out.ux(0, j) = 0.5 * (3.0 * s.at(0, j) - s.at(1, j));
            out.ux(g.nx, j) = 0.5 * (3.0 * s.at(g.nx - 1, j) - s.at(g.nx - 2, j));
        } else {
            out.ux(0, j) = s.at(0, j);
            out.ux(g.nx, j) = s.at(g.nx - 1, j);
        }
    }
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            out.vy(i, j) = 0.5 * (s.at(i, j - 1) + s.at(i, j));
    for (int i = 0; i < g.nx; ++i) {
        if (rule == FaceRule::extrapolate) {
            out.vy(i, 0) = 0.5 * (3.0 * s.at(i, 0) - s.at(i, 1));
            out.vy(i, g.ny) = 0.5 * (3.0 * s.at(i, g.ny - 1) - s.at(i, g.ny - 2));
        } else {
            out.vy(i, 0) = s.at(i, 0);
            out.vy(i, g.ny) = s.at(i, g.ny - 1);
        }
    }
    return out;
}

std::pair<ScalarField, ScalarField> faces_to_center(const StaggeredField& w) {
    const Grid& g = w.grid;
    ScalarField uc(g), vc(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            uc.at(i, j) = 0.5 * (w.ux(i, j) + w.ux(i + 1, j));
            vc.at(i, j) = 0.5 * (w.vy(i, j) + w.vy(i, j + 1));
        }
    return {uc, vc};
}

double dot_cells(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a.grid, b.grid);
    double acc = 0.0;
    for (size_t n = 0; n < a.v.size(); ++n) acc += a.v[n] * b.v[n];
    return acc * a.grid.cell_volume();
}

double dot_faces(const StaggeredField& a, const StaggeredField& b) {
    require_same_grid(a.grid, b.grid);
    double acc = 0.0;
    for (size_t n = 0; n < a.u.size(); ++n) acc += a.u[n] * b.u[n];
    for (size_t n = 0; n < a.v.size(); ++n) acc += a.v[n] * b.v[n];
    return acc * a.grid.cell_volume();
}

double l2_norm_cells(const ScalarField& a) { return std::sqrt(dot_cells(a, a)); }
double l2_norm_faces(const StaggeredField& a) { return std::sqrt(dot_faces(a, a)); }

double linf_norm_cells(const ScalarField& a) {
    double m = 0.0;
    for (double x : a.v) m = std::max(m, std::abs(x));
    return m;
}

double linf_norm_faces(const StaggeredField& a) {
    double m = 0.0;
    for (double x : a.u) m = std::max(m, std::abs(x));
    for (double x : a.v) m = std::max(m, std::abs(x));
    return m;
}

double integral_cells(const ScalarField& a) {
    double acc = 0.0;
    for (double x : a.v) acc += x;
    return acc * a.grid.cell_volume();
}

double mean_cells(const ScalarField& a) {
    return integral_cells(a) / (a.grid.lx * a.grid.ly);
}

namespace {

// Centered difference with the requested ghost closure; i is a cell index.
inline double ghost_left(const std::vector<double>& f, const Grid& g, int i, int j, Closure bc) {
    if (i >= 1) return f[g.cidx(i - 1, j)];
    switch (bc) {
    case Closure::neumann: return f[g.cidx(0, j)];
    case Closure::dirichlet: return -f[g.cidx(0, j)];
    default: return f[g.cidx(g.nx - 1, j)];
    }
}

inline double ghost_right(const std::vector<double>& f, const Grid& g, int i, int j, Closure bc) {
    if (i + 1 < g.nx) return f[g.cidx(i + 1, j)];
    switch (bc) {
    case Closure::neumann: return f[g.cidx(g.nx - 1, j)];
    case Closure::dirichlet: return -f[g.cidx(g.nx - 1, j)];
    default: return f[g.cidx(0, j)];
    }
}

inline double ghost_down(const std::vector<double>& f, const Grid& g, int i, int j, Closure bc) {
    if (j >= 1) return f[g.cidx(i, j - 1)];
    switch (bc) {
    case Closure::neumann: return f[g.cidx(i, 0)];
    case Closure::dirichlet: return -f[g.cidx(i, 0)];
    default: return f[g.cidx(i, g.ny - 1)];
    }
}

inline double ghost_up(const std::vector<double>& f, const Grid& g, int i, int j, Closure bc) {
    if (j + 1 < g.ny) return f[g.cidx(i, j + 1)];
    switch (bc) {
    case Closure::neumann: return f[g.cidx(i, g.ny - 1)];
    case Closure::dirichlet: return -f[g.cidx(i, g.ny - 1)];
    default: return f[g.cidx(i, 0)];
    }
}

} // namespace

double centered_dx(const std::vector<double>& f, const Grid& g, int i, int j, Closure bc) {
    return (ghost_right(f, g, i, j, bc) - ghost_left(f, g, i, j, bc)) / (2.0 * g.hx);
}

double centered_dy(const std::vector<double>& f, const Grid& g, int i, int j, Closure bc) {
    return (ghost_up(f, g, i, j, bc) - ghost_down(f, g, i, j, bc)) / (2.0 * g.hy);
}

double h1_seminorm_director(const DirectorField& a, Closure bc) {
    const Grid& g = a.grid;
    double acc = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            for (int k = 0; k < 3; ++k) {
                const double dx = centered_dx(a.c[k], g, i, j, bc);
                const double dy = centered_dy(a.c[k], g, i, j, bc);
                acc += dx * dx + dy * dy;
            }
    return std::sqrt(acc * g.cell_volume());
}

} // namespace nlc
