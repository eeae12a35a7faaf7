#pragma once

#include "nlc/field.hpp"
#include "nlc/operators.hpp"

namespace nlc {

/// One time slice of the flow: density, face velocity, gauge-fixed
/// pressure (zero mean), director, and the time stamp.
struct FlowState {
    ScalarField rho;
    StaggeredField u;
    ScalarField p;
    DirectorField d;
    double t = 0.0;

    FlowState() = default;
    explicit FlowState(const Grid& g)
        : rho(g, 1.0), u(g), p(g), d(g), t(0.0) {
        for (double& dx : d.c[0]) dx = 1.0;
    }

    const Grid& grid() const { return rho.grid; }

    /// Checks the admissibility invariants: rho strictly positive,
    /// mean-zero pressure, and |div u|_inf below div_tol.  Throws the
    /// matching SolverError on violation.
    void validate(double div_tol = 1e-8) const;
};

} // namespace nlc
