#pragma once

#include <vector>

#include "nlc/flow_state.hpp"

namespace nlc {

struct EnergyBreakdown {
    double kinetic = 0.0;
    double elastic = 0.0;
    double total = 0.0;
};

/// Kinetic part 1/2 sum rho |u_c|^2 h^2 with the velocity averaged to cell
/// centers, elastic part lambda/2 sum |grad_h d|^2 h^2 with centered
/// differences.  The same stencils back the decay check and the iterate
/// distance so every diagnostic sees one discrete energy.
EnergyBreakdown energy(const FlowState& state, double lambda, Closure closure = Closure::neumann);

/// Instantaneous dissipation mu * sum |grad_h u|^2 + lambda gamma * sum
/// |Lap_h d + |grad_h d|^2 d|^2.  The velocity quadrature uses differences
/// of stored face values only (trapezoid-extended weights, no wall
/// closure), so a linear shear integrates exactly.
double dissipation(const FlowState& state, double mu, double lambda, double gamma,
                   Closure closure = Closure::neumann);

/// One row of the per-step diagnostics series; the column order matches
/// the CSV layout.
struct DiagnosticsRow {
    double t = 0.0;
    double e_kin = 0.0;
    double e_elastic = 0.0;
    double e_total = 0.0;
    double dissipation = 0.0;
    double energy_residual = 0.0;
    double d_drift = 0.0;
    double rho_min = 0.0;
    double rho_max = 0.0;
    double mass = 0.0;
    double div_inf = 0.0;
    int picard_iters = 0;
};

struct DiagnosticsRecord {
    std::vector<DiagnosticsRow> rows;
};

/// Discrete energy-law defect per step, (E(t_n) - E(t_{n-1}))/dt + D(t_n),
/// read back from a diagnostics record.  Entry n-1 corresponds to step n.
std::vector<double> energy_law_residual(const DiagnosticsRecord& rec);

/// Time integral of |energy_law_residual|; the quantity whose refinement
/// behavior the acceptance suite pins.
double integrated_energy_residual(const DiagnosticsRecord& rec);

/// Smallest eigenvalue of the negative cell-centered Laplacian with
/// Dirichlet closure, by inverse power iteration.  For the unit square
/// this converges to 2 pi^2 as h -> 0.
double dirichlet_lambda1(const Grid& grid, double tol = 1e-10);

struct DecayReport {
    double lambda1 = 0.0;
    double rho_hat = 0.0;
    double x0 = 0.0;
    /// decay bound minus measured value, one entry per diagnostics row;
    /// nonnegative entries mean the bound holds.
    std::vector<double> margins;
    double min_margin = 0.0;
};

/// Small-data decay bound for X(t) = |sqrt(rho) u|^2 + |grad_h d|^2:
///   X(t) <= X(0) * (exp(-a t) + a t),  a = 2 lambda1 / rho_hat,
/// with rho_hat the initial maximum density.  X is reconstructed from the
/// energy columns (lambda is needed to unscale the elastic part); lambda1
/// can be supplied to reuse an eigenvalue already computed for the grid.
DecayReport decay_check(const DiagnosticsRecord& rec, const Grid& grid, double lambda,
                        double lambda1 = 0.0);

/// Relative-energy distance between two states on one grid:
///   int( rho_b |u_a - u_b|^2 + |grad_h(d_a - d_b)|^2
///        + (rho_a - rho_b)^2 + |d_a - d_b|^2 )
/// with the velocity difference taken at cell centers.
double relative_energy(const FlowState& a, const FlowState& b);

struct ConservationRow {
    double t = 0.0;
    double mass = 0.0;
    double rho_min = 0.0;
    double rho_max = 0.0;
    double l1 = 0.0;
    double l2 = 0.0;
};

struct ConservationReport {
    std::vector<ConservationRow> rows;
    double max_mass_drift_rel = 0.0;
    double min_over_time = 0.0;
    double max_over_time = 0.0;
};

/// Mass, extrema, and L^p norms of the density along a sequence of states.
ConservationReport transport_conservation_report(const std::vector<FlowState>& states);

} // namespace nlc
