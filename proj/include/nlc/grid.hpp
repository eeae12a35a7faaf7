#pragma once

#include <stdexcept>

namespace nlc {

/// Uniform MAC grid on the rectangle [0,lx] x [0,ly].
///
/// Scalars (rho, P) and director components live at cell centers
/// ((i+1/2)hx, (j+1/2)hy).  The x velocity component lives on x faces
/// (i*hx, (j+1/2)hy), the y component on y faces.  Storage is row major
/// with i fastest, matching the snapshot format.
struct Grid {
    int nx = 0, ny = 0;
    double lx = 1.0, ly = 1.0;
    double hx = 0.0, hy = 0.0;

    static Grid make(int nx, int ny, double lx = 1.0, double ly = 1.0) {
        if (nx < 4 || ny < 4)
            throw std::invalid_argument("Grid::make: need at least 4 cells per direction");
        if (!(lx > 0.0) || !(ly > 0.0))
            throw std::invalid_argument("Grid::make: domain extents must be positive");
        Grid g;
        g.nx = nx;
        g.ny = ny;
        g.lx = lx;
        g.ly = ly;
        g.hx = lx / nx;
        g.hy = ly / ny;
        return g;
    }

    int cells() const { return nx * ny; }
    int xfaces() const { return (nx + 1) * ny; }
    int yfaces() const { return nx * (ny + 1); }
    double cell_volume() const { return hx * hy; }

    // Flat indices.  cidx covers cell centers, uidx x faces, vidx y faces.
    int cidx(int i, int j) const { return i + nx * j; }
    int uidx(int i, int j) const { return i + (nx + 1) * j; }
    int vidx(int i, int j) const { return i + nx * j; }

    // Coordinates of cell centers and face centers.
    double xc(int i) const { return (i + 0.5) * hx; }
    double yc(int j) const { return (j + 0.5) * hy; }
    double xf(int i) const { return i * hx; }
    double yf(int j) const { return j * hy; }

    bool same_shape(const Grid& o) const {
        return nx == o.nx && ny == o.ny && lx == o.lx && ly == o.ly;
    }
};

} // namespace nlc
