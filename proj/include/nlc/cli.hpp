#pragma once

#include <string>
#include <vector>

namespace nlc {

/// Command-line front end.  Subcommands:
///   run      --config <file> --out <dir>            integrate and write
///            diagnostics.csv, config.txt, and snapshot samples
///   iterate  --config <file> --iters N --out <dir>  whole-trajectory
///            fixed-point sweeps; writes iterate_distances.csv
///   diagnose --traj <dir> --out <csv>               recompute state-derived
///            diagnostics from stored snapshots
///   compare  --a <dir> --b <dir> --out <csv>        relative-energy series
///            between matching samples of two trajectories
/// Returns 0 on success, 1 on solver errors, 2 on config or usage errors.
int cli_main(const std::vector<std::string>& args);

} // namespace nlc
