#include "nlc/coupling.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "nlc/transport.hpp"
#include "pcg.hpp"

namespace nlc {

double iterate_distance(const FlowState& a, const FlowState& b) {
    require_same_grid(a.grid(), b.grid());
    const Grid& g = a.grid();

    double du = 0.0;
    for (size_t n = 0; n < a.u.u.size(); ++n) {
        const double d = a.u.u[n] - b.u.u[n];
        du += d * d;
    }
    for (size_t n = 0; n < a.u.v.size(); ++n) {
        const double d = a.u.v[n] - b.u.v[n];
        du += d * d;
    }

    double dd = 0.0;
    DirectorField delta(g);
    for (int k = 0; k < 3; ++k)
        for (int n = 0; n < g.cells(); ++n) {
            const double d = a.d.c[k][n] - b.d.c[k][n];
            delta.c[k][n] = d;
            dd += d * d;
        }

    double drho = 0.0;
    for (int n = 0; n < g.cells(); ++n) {
        const double d = a.rho.v[n] - b.rho.v[n];
        drho += d * d;
    }

    const double vol = g.cell_volume();
    return std::sqrt(du * vol) + std::sqrt(dd * vol) + h1_seminorm_director(delta) +
           std::sqrt(drho * vol);
}

namespace {

// Momentum forcing for the frozen iterate (v, f): convection with the new
// density plus the elastic force of the frozen director.
StaggeredField momentum_forcing(const ScalarField& rho_new, const StaggeredField& v,
                                const DirectorField& f, double lambda) {
    const StaggeredField adv = advect_velocity(v);
    const StaggeredField rho_face = center_to_faces(rho_new, FaceRule::nearest);
    StaggeredField out = elastic_force(f, lambda);
    const Grid& g = rho_new.grid;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) {
            const int n = g.uidx(i, j);
            out.u[n] -= rho_face.u[n] * adv.u[n];
        }
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int n = g.vidx(i, j);
            out.v[n] -= rho_face.v[n] * adv.v[n];
        }
    return out;
}

} // namespace

FlowState step_coupled(const FlowState& state, double dt, const SolverConfig& config,
                       StepStats* stats) {
    const double cfl = advective_cfl(state.u, dt);
    if (cfl > config.transport.cfl_max) throw CflViolation(cfl, config.transport.cfl_max);

    // Frozen fields for the first sweep are the step's initial data, so a
    // stationary state converges in a single iteration.
    const StaggeredField* v = &state.u;
    const DirectorField* f = &state.d;
    const StaggeredField* u_hint = &state.u;
    const ScalarField* p_hint = &state.p;

    FlowState prev = state;
    double prev_dist = std::numeric_limits<double>::infinity();
    int grew = 0;

    for (int k = 1; k <= config.picard.max_iters; ++k) {
        FlowState next;
        next.rho = solve_transport(state.rho, *v, dt, config.transport);
        next.d = solve_director(state.d, *v, *f, dt, config.director);
        const StaggeredField f_rhs = momentum_forcing(next.rho, *v, *f, config.stokes.lambda);
        StokesResult sr = solve_stokes(next.rho, state.u, f_rhs, dt, config.stokes,
                                       u_hint, p_hint);
        next.u = std::move(sr.u);
        next.p = std::move(sr.p);
        next.t = state.t + dt;

        const double dist = iterate_distance(next, prev);
        if (stats != nullptr) {
            stats->picard_iters = k;
            stats->final_distance = dist;
            stats->div_inf = sr.div_inf;
            stats->stokes_outer_iters = sr.outer_iters;
        }
        if (dist < config.picard.tol) return next;

        grew = dist > prev_dist ? grew + 1 : 0;
        if (grew >= 3)
            throw PicardDiverged("iterate distance grew three sweeps in a row (last " +
                                 detail::sci(dist) + ")");
        prev_dist = dist;
        prev = std::move(next);
        v = &prev.u;
        f = &prev.d;
        u_hint = &prev.u;
        p_hint = &prev.p;
    }
    throw PicardDiverged("no convergence in " + std::to_string(config.picard.max_iters) +
                         " sweeps (last distance " + detail::sci(prev_dist) + ")");
}

namespace {

DiagnosticsRow make_row(const FlowState& state, const SolverConfig& config,
                        const DiagnosticsRow* prev_row, const StepStats* stats) {
    DiagnosticsRow row;
    row.t = state.t;
    const EnergyBreakdown e = energy(state, config.stokes.lambda);
    row.e_kin = e.kinetic;
    row.e_elastic = e.elastic;
    row.e_total = e.total;
    row.dissipation = dissipation(state, config.stokes.mu, config.stokes.lambda, config.gamma);
    if (prev_row != nullptr)
        row.energy_residual = (row.e_total - prev_row->e_total) / (row.t - prev_row->t) +
                              row.dissipation;
    row.d_drift = unit_norm_drift(state.d);
    auto [lo, hi] = density_extrema(state.rho);
    row.rho_min = lo;
    row.rho_max = hi;
    row.mass = integral_cells(state.rho);
    row.div_inf = linf_norm_cells(div(state.u));
    row.picard_iters = stats != nullptr ? stats->picard_iters : 0;
    return row;
}

} // namespace

RunResult run(const SolverConfig& config) {
    if (config.picard.mode != PicardMode::per_step)
        throw ConfigError("picard.mode", "run() integrates per_step; use trajectory_iteration "
                                         "for whole-trajectory sweeps");
    const Grid g = config.grid();
    FlowState state = make_initial_data(config.init, g);

    RunResult out;
    out.diagnostics.rows.push_back(make_row(state, config, nullptr, nullptr));
    out.trajectory.states.push_back(state);

    const int n_steps = config.n_steps();
    for (int n = 1; n <= n_steps; ++n) {
        StepStats stats;
        state = step_coupled(state, config.dt, config, &stats);
        out.trajectory.step_stats.push_back(stats);
        out.diagnostics.rows.push_back(
            make_row(state, config, &out.diagnostics.rows.back(), &stats));
        if (n % config.sample_stride == 0 || n == n_steps)
            out.trajectory.states.push_back(state);
    }
    return out;
}

std::vector<double> trajectory_iteration(const SolverConfig& config, int n_iters) {
    if (n_iters < 1) throw ConfigError("iters", "need at least one trajectory sweep");
    const Grid g = config.grid();
    const FlowState x0 = make_initial_data(config.init, g);
    const int n_steps = config.n_steps();

    // Iterate 0 parks the initial data in every time slot.
    std::vector<FlowState> prev(n_steps + 1, x0);
    for (int m = 0; m <= n_steps; ++m) prev[m].t = m * config.dt;

    std::vector<double> distances;
    for (int k = 1; k <= n_iters; ++k) {
        std::vector<FlowState> cur;
        cur.reserve(n_steps + 1);
        cur.push_back(x0);
        for (int m = 0; m < n_steps; ++m) {
            const FlowState& frozen = prev[m + 1];
            FlowState next;
            next.rho = solve_transport(cur[m].rho, frozen.u, config.dt, config.transport);
            next.d = solve_director(cur[m].d, frozen.u, frozen.d, config.dt, config.director);
            const StaggeredField f_rhs =
                momentum_forcing(next.rho, frozen.u, frozen.d, config.stokes.lambda);
            StokesResult sr = solve_stokes(next.rho, cur[m].u, f_rhs, config.dt, config.stokes,
                                           &frozen.u, &frozen.p);
            next.u = std::move(sr.u);
            next.p = std::move(sr.p);
            next.t = (m + 1) * config.dt;
            cur.push_back(std::move(next));
        }
        double dk = 0.0;
        for (int m = 0; m <= n_steps; ++m)
            dk = std::max(dk, iterate_distance(cur[m], prev[m]));
        distances.push_back(dk);
        prev = std::move(cur);
    }
    return distances;
}

} // namespace nlc
