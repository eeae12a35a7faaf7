#pragma once

#include <vector>

#include "nlc/config.hpp"
#include "nlc/diagnostics.hpp"
#include "nlc/flow_state.hpp"

namespace nlc {

struct StepStats {
    int picard_iters = 0;
    double final_distance = 0.0;
    double div_inf = 0.0;
    int stokes_outer_iters = 0;
};

/// Distance that drives both Picard loops:
///   |u_a - u_b|_L2 + |d_a - d_b|_L2 + |grad_h(d_a - d_b)|_L2
///   + |rho_a - rho_b|_L2.
double iterate_distance(const FlowState& a, const FlowState& b);

/// One coupled time step by Picard iteration over the three linear
/// sub-solves.  Each sweep freezes (v, f) at the previous iterate, then
/// runs transport (new density), the director heat step, and the
/// variable-density Stokes step with the fresh density and the frozen
/// convection and elastic forcing.  Converged when the iterate distance
/// drops below picard.tol; throws PicardDiverged when it grows three times
/// in a row or max_iters runs out.
FlowState step_coupled(const FlowState& state, double dt, const SolverConfig& config,
                       StepStats* stats = nullptr);

struct Trajectory {
    /// Initial state plus every sample_stride-th step (final state always
    /// included).
    std::vector<FlowState> states;
    std::vector<StepStats> step_stats;
};

struct RunResult {
    Trajectory trajectory;
    DiagnosticsRecord diagnostics;
};

/// Integrates the preset initial data to t_final with per-step Picard
/// coupling, recording one diagnostics row per step.
RunResult run(const SolverConfig& config);

/// Whole-trajectory fixed-point iteration: iterate 0 holds the initial
/// data at every time slot; iterate k+1 re-solves the three linear
/// problems over [0, T] with iterate k frozen as (v, f).  Returns the
/// sup-in-time iterate distances D_k between consecutive trajectory
/// iterates, the sequence whose geometric decay the acceptance suite
/// checks.
std::vector<double> trajectory_iteration(const SolverConfig& config, int n_iters);

} // namespace nlc
