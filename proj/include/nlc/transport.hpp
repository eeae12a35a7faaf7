#pragma once

#include <utility>

#include "nlc/field.hpp"

namespace nlc {

enum class TransportScheme { upwind, semi_lagrangian };

struct TransportOptions {
    double cfl_max = 0.5;
    TransportScheme scheme = TransportScheme::upwind;
    /// Largest |div v|_inf accepted before the advecting field is rejected.
    double div_tol = 1e-8;
};

/// Additive advective CFL number dt*(max|u|/hx + max|v|/hy).  Keeping this
/// at or below one is what makes the upwind update a convex combination.
double advective_cfl(const StaggeredField& v, double dt);

/// One explicit transport step for the density carried by the frozen face
/// velocity v.
///
/// upwind: conservative first-order fluxes.  With wall-bounded v the
/// boundary flux vanishes, so total mass is conserved exactly and the
/// update is a convex combination of old cell values (discrete maximum
/// principle, new extrema inside the old ones).
///
/// semi_lagrangian: one-step backtrace from each cell center with bilinear
/// sampling of rho_old; not conservative, kept as a cross-check scheme.
///
/// Throws CflViolation or NonSolenoidalVelocity when the preconditions
/// fail.
ScalarField solve_transport(const ScalarField& rho_old, const StaggeredField& v, double dt,
                            const TransportOptions& opts = {});

/// (min, max) over all cells.
std::pair<double, double> density_extrema(const ScalarField& rho);

} // namespace nlc
