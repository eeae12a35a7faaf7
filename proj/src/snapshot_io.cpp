#include "nlc/snapshot_io.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace nlc {

static_assert(std::endian::native == std::endian::little,
              "snapshot payloads are little-endian; this build targets LE hosts");

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[] = "NLCF1\n";

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void atomic_write(const std::string& path, const std::string& bytes) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp + "' for writing");
        out.write(bytes.data(), std::streamsize(bytes.size()));
        if (!out) throw IoError("short write to '" + tmp + "'");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
}

void write_field(const std::string& dir, const std::string& kind, const Grid& g, double t,
                 const std::vector<const std::vector<double>*>& comps) {
    std::string bytes = kMagic;
    bytes += kind + " " + std::to_string(g.nx) + " " + std::to_string(g.ny) + " " +
             fmt17(g.hx) + " " + fmt17(g.hy) + " " + fmt17(t) + " " +
             std::to_string(comps.size()) + "\n";
    for (const auto* c : comps)
        bytes.append(reinterpret_cast<const char*>(c->data()), c->size() * sizeof(double));
    atomic_write(dir + "/" + kind + ".nlcf", bytes);
}

struct FieldHeader {
    std::string kind;
    int nx = 0, ny = 0;
    double hx = 0.0, hy = 0.0, t = 0.0;
    int components = 0;
};

size_t values_per_component(const FieldHeader& h) {
    if (h.kind == "rho" || h.kind == "p" || h.kind == "d") return size_t(h.nx) * h.ny;
    if (h.kind == "u") return size_t(h.nx + 1) * h.ny;
    if (h.kind == "v") return size_t(h.nx) * (h.ny + 1);
    throw FormatError("unknown field kind '" + h.kind + "'");
}

int expected_components(const std::string& kind) { return kind == "d" ? 3 : 1; }

FieldHeader read_field(const std::string& path, std::vector<std::vector<double>>& comps) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");

    char magic[6];
    in.read(magic, 6);
    if (!in || std::memcmp(magic, kMagic, 6) != 0)
        throw FormatError("'" + path + "': bad magic");

    std::string header_line;
    if (!std::getline(in, header_line)) throw FormatError("'" + path + "': missing header");
    std::istringstream hs(header_line);
    FieldHeader h;
    if (!(hs >> h.kind >> h.nx >> h.ny >> h.hx >> h.hy >> h.t >> h.components))
        throw FormatError("'" + path + "': malformed header '" + header_line + "'");
    std::string extra;
    if (hs >> extra) throw FormatError("'" + path + "': trailing header fields");
    if (h.nx < 4 || h.ny < 4 || !(h.hx > 0.0) || !(h.hy > 0.0))
        throw FormatError("'" + path + "': implausible grid in header");
    if (h.components != expected_components(h.kind))
        throw FormatError("'" + path + "': kind '" + h.kind + "' expects " +
                          std::to_string(expected_components(h.kind)) + " components");

    const size_t per = values_per_component(h);
    comps.assign(size_t(h.components), std::vector<double>(per));
    for (auto& c : comps) {
        in.read(reinterpret_cast<char*>(c.data()), std::streamsize(per * sizeof(double)));
        if (size_t(in.gcount()) != per * sizeof(double))
            throw FormatError("'" + path + "': truncated payload");
    }
    char probe;
    if (in.read(&probe, 1), in.gcount() != 0)
        throw FormatError("'" + path + "': trailing bytes after payload");
    return h;
}

} // namespace

void write_snapshot(const FlowState& state, const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create '" + dir + "': " + ec.message());
    const Grid& g = state.grid();
    write_field(dir, "rho", g, state.t, {&state.rho.v});
    write_field(dir, "u", g, state.t, {&state.u.u});
    write_field(dir, "v", g, state.t, {&state.u.v});
    write_field(dir, "p", g, state.t, {&state.p.v});
    write_field(dir, "d", g, state.t, {&state.d.c[0], &state.d.c[1], &state.d.c[2]});
}

FlowState read_snapshot(const std::string& dir) {
    std::vector<std::vector<double>> comps;
    const FieldHeader href = read_field(dir + "/rho.nlcf", comps);

    Grid g;
    g.nx = href.nx;
    g.ny = href.ny;
    g.hx = href.hx;
    g.hy = href.hy;
    g.lx = href.hx * href.nx;
    g.ly = href.hy * href.ny;

    FlowState state(g);
    state.t = href.t;
    state.rho.v = std::move(comps[0]);

    auto check = [&](const FieldHeader& h, const std::string& path) {
        if (h.nx != href.nx || h.ny != href.ny || h.hx != href.hx || h.hy != href.hy)
            throw FormatError("'" + path + "': grid differs from rho.nlcf");
        if (h.t != href.t) throw FormatError("'" + path + "': time stamp differs from rho.nlcf");
    };
    check(read_field(dir + "/u.nlcf", comps), dir + "/u.nlcf");
    state.u.u = std::move(comps[0]);
    check(read_field(dir + "/v.nlcf", comps), dir + "/v.nlcf");
    state.u.v = std::move(comps[0]);
    check(read_field(dir + "/p.nlcf", comps), dir + "/p.nlcf");
    state.p.v = std::move(comps[0]);
    check(read_field(dir + "/d.nlcf", comps), dir + "/d.nlcf");
    for (int k = 0; k < 3; ++k) state.d.c[k] = std::move(comps[k]);
    return state;
}

void write_diagnostics_csv(const DiagnosticsRecord& rec, const std::string& path) {
    std::string bytes =
        "t,e_kin,e_elastic,e_total,dissipation,energy_residual,d_drift,rho_min,rho_max,"
        "mass,div_inf,picard_iters\n";
    char buf[512];
    for (const DiagnosticsRow& r : rec.rows) {
        std::snprintf(buf, sizeof buf,
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n",
                      r.t, r.e_kin, r.e_elastic, r.e_total, r.dissipation, r.energy_residual,
                      r.d_drift, r.rho_min, r.rho_max, r.mass, r.div_inf, r.picard_iters);
        bytes += buf;
    }
    atomic_write(path, bytes);
}

void write_trajectory(const Trajectory& traj, const std::string& dir) {
    char name[32];
    for (size_t n = 0; n < traj.states.size(); ++n) {
        std::snprintf(name, sizeof name, "sample_%06zu", n);
        write_snapshot(traj.states[n], dir + "/snapshots/" + name);
    }
}

std::vector<std::string> list_snapshot_samples(const std::string& dir) {
    const fs::path root = fs::path(dir) / "snapshots";
    std::vector<std::string> names;
    if (!fs::exists(root)) return names; // no samples yet is not an error
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(root, ec)) {
        if (entry.is_directory() && entry.path().filename().string().rfind("sample_", 0) == 0)
            names.push_back(entry.path().filename().string());
    }
    if (ec) throw IoError("cannot list '" + root.string() + "': " + ec.message());
    std::sort(names.begin(), names.end());
    return names;
}

} // namespace nlc
