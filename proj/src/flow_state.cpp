#include "nlc/flow_state.hpp"

#include <cmath>

#include "pcg.hpp"

namespace nlc {

void FlowState::validate(double div_tol) const {
    double rmin = rho.v.empty() ? 0.0 : rho.v[0];
    for (double r : rho.v) rmin = std::min(rmin, r);
    if (!(rmin > 0.0)) throw NonPositiveDensity(rmin);

    const double pm = mean_cells(p);
    if (std::abs(pm) > 1e-10 * (1.0 + linf_norm_cells(p)))
        throw SolverError("FlowState: pressure mean " + detail::sci(pm) + " not gauge-fixed");

    const double dinf = linf_norm_cells(div(u));
    if (dinf > div_tol) throw NonSolenoidalVelocity(dinf, div_tol);
}

} // namespace nlc
