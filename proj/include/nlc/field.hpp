#pragma once

#include <vector>

#include "nlc/errors.hpp"
#include "nlc/grid.hpp"

namespace nlc {

/// Cell-centered scalar (density, pressure, one director component).
struct ScalarField {
    Grid grid;
    std::vector<double> v;

    ScalarField() = default;
    explicit ScalarField(const Grid& g, double fill = 0.0) : grid(g), v(g.cells(), fill) {}

    double& at(int i, int j) { return v[grid.cidx(i, j)]; }
    double at(int i, int j) const { return v[grid.cidx(i, j)]; }
};

/// Face-normal velocity pair: u on x faces ((nx+1)*ny values), v on y
/// faces (nx*(ny+1) values).  Boundary-normal faces (i = 0, i = nx for u;
/// j = 0, j = ny for v) hold the no-penetration values and stay exactly
/// zero for every admissible flow state.
struct StaggeredField {
    Grid grid;
    std::vector<double> u, v;

    StaggeredField() = default;
    explicit StaggeredField(const Grid& g, double fu = 0.0, double fv = 0.0)
        : grid(g), u(g.xfaces(), fu), v(g.yfaces(), fv) {}

    double& ux(int i, int j) { return u[grid.uidx(i, j)]; }
    double ux(int i, int j) const { return u[grid.uidx(i, j)]; }
    double& vy(int i, int j) { return v[grid.vidx(i, j)]; }
    double vy(int i, int j) const { return v[grid.vidx(i, j)]; }
};

/// Cell-centered three-component director for the 2D slab reduction:
/// fields depend on (x, y) only but keep all three vector components.
struct DirectorField {
    Grid grid;
    std::vector<double> c[3];

    DirectorField() = default;
    explicit DirectorField(const Grid& g) : grid(g) {
        for (auto& comp : c) comp.assign(g.cells(), 0.0);
    }

    double& at(int k, int i, int j) { return c[k][grid.cidx(i, j)]; }
    double at(int k, int i, int j) const { return c[k][grid.cidx(i, j)]; }
};

inline void require_same_grid(const Grid& a, const Grid& b) {
    if (!a.same_shape(b)) throw GridMismatch();
}

} // namespace nlc
