#pragma once

#include <utility>

#include "nlc/field.hpp"
#include "nlc/operators.hpp"

namespace nlc {

struct StokesOptions {
    double mu = 1.0;
    double lambda = 1.0;
    /// Target |div u|_inf for the converged saddle solve.
    double saddle_tol = 1e-10;
    int max_outer_iters = 400;
    int max_inner_iters = 20000;
};

/// Elastic forcing -lambda (grad_h f)^T Lap_h f, assembled at cell centers
/// with centered differences and averaged to faces.  Boundary-normal faces
/// stay zero (the velocity there is pinned by no-slip).  The isotropic
/// part grad(|grad f|^2 / 2) of the full stress divergence is left to the
/// pressure gauge.
StaggeredField elastic_force(const DirectorField& f, double lambda,
                             Closure closure = Closure::neumann);

struct StokesResult {
    StaggeredField u;
    ScalarField p;
    int outer_iters = 0;
    double div_inf = 0.0;
};

/// One backward-Euler step of the variable-density Stokes problem
///   (rho/dt)(u - u_old) - mu Lap u + grad P = f_rhs,  div u = 0,
/// no-slip walls, mean-zero P.  Solved with conjugate directions on the
/// pressure Schur complement; every outer iteration does an inner velocity
/// solve at a tolerance one order tighter than saddle_tol and one
/// inverse-density-weighted Poisson solve for the preconditioner.  Optional
/// hints warm-start the iteration without affecting what it converges to.
///
/// Postconditions: |div u|_inf <= saddle_tol, mean(P) = 0 after the final
/// gauge shift.  Throws NonPositiveDensity or SaddleSolveDiverged.
StokesResult solve_stokes(const ScalarField& rho, const StaggeredField& u_old,
                          const StaggeredField& f_rhs, double dt, const StokesOptions& opts = {},
                          const StaggeredField* u_hint = nullptr,
                          const ScalarField* p_hint = nullptr);

/// (momentum residual inf-norm, |div u|_inf) for a candidate solution,
/// recomputed from the definitions.  Used by tests and the coupled-step
/// consistency checks.
std::pair<double, double> saddle_residuals(const StaggeredField& u, const ScalarField& p,
                                           const ScalarField& rho, const StaggeredField& u_old,
                                           const StaggeredField& f_rhs, double dt,
                                           const StokesOptions& opts = {});

/// Viscous operator applied to a wall-bounded velocity: five-point
/// Laplacian per component with antimirror tangential ghosts and pinned
/// boundary-normal faces.  Exposed for tests and diagnostics.
StaggeredField velocity_laplacian(const StaggeredField& u, double mu);

/// Advective term (v . grad_h) v at interior faces, centered differences,
/// tangential neighbors averaged from the other face family.  Feeds the
/// momentum right-hand side of the coupled step.
StaggeredField advect_velocity(const StaggeredField& v);

} // namespace nlc
