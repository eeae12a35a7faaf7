#include "nlc/cli.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "nlc/coupling.hpp"
#include "nlc/snapshot_io.hpp"

namespace nlc {

namespace {

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
}

int cmd_run(const std::string& config_path, const std::string& out_dir) {
    const SolverConfig config = parse_config_file(config_path);
    std::filesystem::create_directories(out_dir);
    const RunResult result = run(config);
    write_diagnostics_csv(result.diagnostics, out_dir + "/diagnostics.csv");
    write_text(out_dir + "/config.txt", config_to_text(config));
    write_trajectory(result.trajectory, out_dir);
    std::cout << "run: " << result.diagnostics.rows.size() - 1 << " steps, "
              << result.trajectory.states.size() << " samples -> " << out_dir << "\n";
    return 0;
}

int cmd_iterate(const std::string& config_path, int iters, const std::string& out_dir) {
    const SolverConfig config = parse_config_file(config_path);
    std::filesystem::create_directories(out_dir);
    const std::vector<double> d = trajectory_iteration(config, iters);
    std::string csv = "k,distance,ratio\n";
    char buf[128];
    for (size_t k = 0; k < d.size(); ++k) {
        const double ratio = k > 0 ? d[k] / d[k - 1] : std::nan("");
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", k + 1, d[k], ratio);
        csv += buf;
    }
    write_text(out_dir + "/iterate_distances.csv", csv);
    std::cout << "iterate: " << d.size() << " sweeps -> " << out_dir << "\n";
    return 0;
}

int cmd_diagnose(const std::string& traj_dir, const std::string& out_csv) {
    const std::vector<std::string> names = list_snapshot_samples(traj_dir);
    if (names.empty()) throw IoError("no snapshot samples under '" + traj_dir + "'");

    // Run directories store the config they were produced with; use its
    // coefficients so recomputed energies match the run diagnostics.
    double mu = 1.0, lambda = 1.0, gamma = 1.0;
    if (std::filesystem::exists(traj_dir + "/config.txt")) {
        const SolverConfig stored = parse_config_file(traj_dir + "/config.txt");
        mu = stored.stokes.mu;
        lambda = stored.stokes.lambda;
        gamma = stored.gamma;
    }

    DiagnosticsRecord rec;
    const DiagnosticsRow* prev = nullptr;
    for (const std::string& name : names) {
        const FlowState state = read_snapshot(traj_dir + "/snapshots/" + name);
        DiagnosticsRow row;
        row.t = state.t;
        const EnergyBreakdown e = energy(state, lambda);
        row.e_kin = e.kinetic;
        row.e_elastic = e.elastic;
        row.e_total = e.total;
        row.dissipation = dissipation(state, mu, lambda, gamma);
        if (prev != nullptr && state.t > prev->t)
            row.energy_residual = (row.e_total - prev->e_total) / (row.t - prev->t) +
                                  row.dissipation;
        row.d_drift = unit_norm_drift(state.d);
        auto [lo, hi] = density_extrema(state.rho);
        row.rho_min = lo;
        row.rho_max = hi;
        row.mass = integral_cells(state.rho);
        row.div_inf = linf_norm_cells(div(state.u));
        row.picard_iters = 0; // solver metadata is not recoverable from snapshots
        rec.rows.push_back(row);
        prev = &rec.rows.back();
    }
    write_diagnostics_csv(rec, out_csv);
    std::cout << "diagnose: " << rec.rows.size() << " samples -> " << out_csv << "\n";
    return 0;
}

int cmd_compare(const std::string& dir_a, const std::string& dir_b, const std::string& out_csv) {
    const std::vector<std::string> names_a = list_snapshot_samples(dir_a);
    const std::vector<std::string> names_b = list_snapshot_samples(dir_b);
    std::vector<std::string> common;
    std::set_intersection(names_a.begin(), names_a.end(), names_b.begin(), names_b.end(),
                          std::back_inserter(common));
    if (common.empty()) throw IoError("no matching samples between the two trajectories");

    std::string csv = "t,relative_energy\n";
    char buf[96];
    for (const std::string& name : common) {
        const FlowState a = read_snapshot(dir_a + "/snapshots/" + name);
        const FlowState b = read_snapshot(dir_b + "/snapshots/" + name);
        if (a.t != b.t)
            throw FormatError("sample '" + name + "' carries different times in the two "
                                                  "trajectories");
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", a.t, relative_energy(a, b));
        csv += buf;
    }
    write_text(out_csv, csv);
    std::cout << "compare: " << common.size() << " samples -> " << out_csv << "\n";
    return 0;
}

} // namespace

int cli_main(const std::vector<std::string>& args) {
    CLI::App app{"MAC-grid solver and verification harness for density-dependent "
                 "nematic liquid-crystal flow"};
    app.require_subcommand(1);

    std::string config_path, out_path, traj_dir, dir_a, dir_b;
    int iters = 6;

    CLI::App* c_run = app.add_subcommand("run", "integrate a configured flow");
    c_run->add_option("--config", config_path, "config file")->required();
    c_run->add_option("--out", out_path, "output directory")->required();

    CLI::App* c_iter = app.add_subcommand("iterate", "whole-trajectory fixed-point sweeps");
    c_iter->add_option("--config", config_path, "config file")->required();
    c_iter->add_option("--iters", iters, "number of sweeps")->required();
    c_iter->add_option("--out", out_path, "output directory")->required();

    CLI::App* c_diag = app.add_subcommand("diagnose", "recompute diagnostics from snapshots");
    c_diag->add_option("--traj", traj_dir, "trajectory directory")->required();
    c_diag->add_option("--out", out_path, "output CSV path")->required();

    CLI::App* c_cmp = app.add_subcommand("compare", "relative energy between two trajectories");
    c_cmp->add_option("--a", dir_a, "first trajectory directory")->required();
    c_cmp->add_option("--b", dir_b, "second trajectory directory")->required();
    c_cmp->add_option("--out", out_path, "output CSV path")->required();

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help
            std::cout << app.help();
            return 0;
        }
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (c_run->parsed()) return cmd_run(config_path, out_path);
        if (c_iter->parsed()) return cmd_iterate(config_path, iters, out_path);
        if (c_diag->parsed()) return cmd_diagnose(traj_dir, out_path);
        return cmd_compare(dir_a, dir_b, out_path);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const SolverError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace nlc
