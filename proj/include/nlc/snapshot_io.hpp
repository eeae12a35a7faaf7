#pragma once

#include <string>
#include <vector>

#include "nlc/coupling.hpp"
#include "nlc/flow_state.hpp"

namespace nlc {

/// On-disk state format: one file per field (rho, u, v, p, d) in the given
/// directory.  Each file starts with the magic line "NLCF1\n", one ASCII
/// header line "kind nx ny hx hy t components\n" (floats at 17 significant
/// digits), then the raw little-endian float64 payload, row-major with the
/// component index outermost.  Writes go to a temp file that is renamed
/// into place, so readers never see partial files.
void write_snapshot(const FlowState& state, const std::string& dir);

/// Reads the five field files back; validates magic, kind, grid shape, and
/// exact payload length, throwing FormatError on any mismatch and IoError
/// when a file cannot be opened.
FlowState read_snapshot(const std::string& dir);

/// Diagnostics CSV with the fixed column set
///   t,e_kin,e_elastic,e_total,dissipation,energy_residual,d_drift,
///   rho_min,rho_max,mass,div_inf,picard_iters
/// one row per record entry, floats at 17 significant digits.  Written
/// atomically; identical records produce byte-identical files.
void write_diagnostics_csv(const DiagnosticsRecord& rec, const std::string& path);

/// Writes the retained trajectory samples under dir/snapshots/sample_NNNNNN.
void write_trajectory(const Trajectory& traj, const std::string& dir);

/// Sorted sample names present under dir/snapshots.
std::vector<std::string> list_snapshot_samples(const std::string& dir);

} // namespace nlc
