#pragma once

#include "nlc/field.hpp"
#include "nlc/operators.hpp"

namespace nlc {

struct DirectorOptions {
    double gamma = 1.0;
    double linear_solver_tol = 1e-10;
    int max_iters = 20000;
    /// When on, the solved director is projected back to unit length cell
    /// by cell.  Off by default: the drift is a verification observable.
    bool renormalize = false;
    Closure closure = Closure::neumann;
};

/// Frozen-coefficient source -(v . grad_h) f + gamma |grad_h f|^2 f with
/// centered differences, v averaged from faces to centers.
DirectorField director_source(const StaggeredField& v, const DirectorField& f, double gamma,
                              Closure closure = Closure::neumann);

/// Backward-Euler heat step per component:
///   (I - gamma dt Lap_h) d_new = d_old + dt * director_source(v, f)
/// with the closure from opts (Neumann for the wall problem).  Conjugate
/// gradients on the SPD operator; throws LinearSolveDiverged on failure.
DirectorField solve_director(const DirectorField& d_old, const StaggeredField& v,
                             const DirectorField& f, double dt, const DirectorOptions& opts = {});

/// max over cells of | |d| - 1 |.
double unit_norm_drift(const DirectorField& d);

/// Cellwise projection d / |d|.  Cells already within a few ulps of unit
/// length are returned unchanged, which makes the projection exactly
/// idempotent.
DirectorField renormalized(const DirectorField& d);

} // namespace nlc
