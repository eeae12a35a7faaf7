#pragma once

#include <string>

#include "nlc/director.hpp"
#include "nlc/flow_state.hpp"
#include "nlc/stokes.hpp"
#include "nlc/transport.hpp"

namespace nlc {

enum class PicardMode { per_step, trajectory };

struct PicardOptions {
    double tol = 1e-8;
    int max_iters = 50;
    PicardMode mode = PicardMode::per_step;
};

/// Initial-data recipe.  `name` accepts a single preset or a '+'-joined
/// combination ("small_vortex_twist+density_bump"); later presets override
/// only the fields they define, so the vortex/twist velocity and director
/// compose with the density bump.
struct PresetParams {
    std::string name = "equilibrium";
    /// Stream-function amplitude of the vortex.
    double amplitude = 0.05;
    /// Director tilt angle amplitude (radians).
    double twist = 0.2;
    /// Density bump extremes; the discrete min and max hit these exactly.
    double rho_min = 0.5;
    double rho_max = 2.0;
    /// L2 amplitude of an extra divergence-free velocity mode; 0 disables.
    double perturb_eps = 0.0;
};

/// Full run description: grid, coefficients, step sizes, sub-solver
/// options, and initial data.  parse_config validates every key and
/// rejects unknown ones by name.
struct SolverConfig {
    int nx = 64, ny = 64;
    double lx = 1.0, ly = 1.0;
    double dt = 1.0 / 256.0;
    double t_final = 1.0;
    PicardOptions picard;
    TransportOptions transport;
    DirectorOptions director;
    StokesOptions stokes;
    double gamma = 1.0; // relaxation coefficient, mirrored into director
    PresetParams init;
    /// Keep every stride-th state in the in-memory trajectory (and write
    /// that many snapshots); diagnostics are recorded every step.
    int sample_stride = 1;

    Grid grid() const { return Grid::make(nx, ny, lx, ly); }
    int n_steps() const { return int(t_final / dt + 0.5); }
};

/// Builds the preset initial state: wall-compatible divergence-free
/// velocity from a stream function, unit director, density inside
/// [rho_min, rho_max] with both extremes attained.  Throws InvalidPreset.
FlowState make_initial_data(const PresetParams& params, const Grid& grid);

/// Parses "key = value" lines ('#' starts a comment).  Unknown keys, bad
/// values, and inconsistent settings raise ConfigError carrying the key.
SolverConfig parse_config_text(const std::string& text);
SolverConfig parse_config_file(const std::string& path);

/// Canonical flat-key rendering of a config, suitable for re-parsing.
std::string config_to_text(const SolverConfig& config);

} // namespace nlc
