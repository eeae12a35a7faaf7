#include "nlc/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace nlc {

namespace {

constexpr double kPi = 3.14159265358979323846;

// The stream functions below vanish on the boundary analytically, but
// sin(pi x / lx) evaluated at x = lx leaves an O(1e-16) residue.  The
// transport guarantees (exact conservation, maximum principle) assume
// boundary-normal faces that are exactly zero, so pin them.
void pin_wall_faces(StaggeredField& u) {
    const Grid& g = u.grid;
    for (int j = 0; j < g.ny; ++j) {
        u.ux(0, j) = 0.0;
        u.ux(g.nx, j) = 0.0;
    }
    for (int i = 0; i < g.nx; ++i) {
        u.vy(i, 0) = 0.0;
        u.vy(i, g.ny) = 0.0;
    }
}

void apply_vortex_twist(FlowState& state, const PresetParams& p) {
    const Grid& g = state.grid();
    // Stream function on grid nodes; it vanishes with its tangential
    // derivative on the whole boundary, so the discrete curl below gives a
    // no-slip compatible, exactly divergence-free velocity.
    auto psi = [&](int i, int j) {
        const double sx = std::sin(kPi * g.xf(i) / g.lx);
        const double sy = std::sin(kPi * g.yf(j) / g.ly);
        return p.amplitude * sx * sx * sy * sy;
    };
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i)
            state.u.ux(i, j) = (psi(i, j + 1) - psi(i, j)) / g.hy;
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            state.u.vy(i, j) = -(psi(i + 1, j) - psi(i, j)) / g.hx;
    pin_wall_faces(state.u);

    // Tilt angle with zero normal derivative at the walls, matching the
    // Neumann director condition; |d| = 1 holds cell by cell.
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double theta = p.twist * std::cos(kPi * g.xc(i) / g.lx) *
                                 std::cos(kPi * g.yc(j) / g.ly);
            state.d.at(0, i, j) = std::cos(theta);
            state.d.at(1, i, j) = std::sin(theta);
            state.d.at(2, i, j) = 0.0;
        }
}

void apply_density_bump(FlowState& state, const PresetParams& p) {
    const Grid& g = state.grid();
    if (!(p.rho_min > 0.0) || !(p.rho_max >= p.rho_min))
        throw SolverError("density_bump preset needs 0 < rho_min <= rho_max");
    // Gaussian centered off the vortex core so the peak cell sits in
    // moving fluid; rescaled so the discrete extremes hit the requested
    // bounds exactly.
    const double w = 0.15 * std::min(g.lx, g.ly);
    std::vector<double> b(g.cells());
    double bmin = 1e300, bmax = -1e300;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double dx = g.xc(i) - 0.35 * g.lx;
            const double dy = g.yc(j) - 0.55 * g.ly;
            const double val = std::exp(-(dx * dx + dy * dy) / (w * w));
            b[g.cidx(i, j)] = val;
            bmin = std::min(bmin, val);
            bmax = std::max(bmax, val);
        }
    for (int n = 0; n < g.cells(); ++n)
        state.rho.v[n] = p.rho_min + (p.rho_max - p.rho_min) * ((b[n] - bmin) / (bmax - bmin));
}

void apply_perturbation(FlowState& state, const PresetParams& p) {
    if (p.perturb_eps == 0.0) return;
    const Grid& g = state.grid();
    auto psi = [&](int i, int j) {
        return std::sin(2.0 * kPi * g.xf(i) / g.lx) * std::sin(2.0 * kPi * g.yf(j) / g.ly);
    };
    StaggeredField delta(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i)
            delta.ux(i, j) = (psi(i, j + 1) - psi(i, j)) / g.hy;
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            delta.vy(i, j) = -(psi(i + 1, j) - psi(i, j)) / g.hx;
    pin_wall_faces(delta);
    const double norm = l2_norm_faces(delta);
    const double scale = p.perturb_eps / norm;
    for (size_t n = 0; n < delta.u.size(); ++n) state.u.u[n] += scale * delta.u[n];
    for (size_t n = 0; n < delta.v.size(); ++n) state.u.v[n] += scale * delta.v[n];
}

} // namespace

FlowState make_initial_data(const PresetParams& params, const Grid& grid) {
    FlowState state(grid);
    std::stringstream names(params.name);
    std::string part;
    bool any = false;
    while (std::getline(names, part, '+')) {
        if (part.empty()) continue;
        any = true;
        if (part == "equilibrium") {
            // FlowState already is the resting state.
        } else if (part == "small_vortex_twist") {
            apply_vortex_twist(state, params);
        } else if (part == "density_bump") {
            apply_density_bump(state, params);
        } else {
            throw InvalidPreset(part);
        }
    }
    if (!any) throw InvalidPreset(params.name);
    apply_perturbation(state, params);
    return state;
}

namespace {

double parse_double(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double x = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0' || !std::isfinite(x))
        throw ConfigError(key, "expected a finite number, got '" + value + "'");
    return x;
}

int parse_int(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const long x = std::strtol(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0')
        throw ConfigError(key, "expected an integer, got '" + value + "'");
    return int(x);
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "on" || value == "true" || value == "1") return true;
    if (value == "off" || value == "false" || value == "0") return false;
    throw ConfigError(key, "expected on/off, got '" + value + "'");
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

} // namespace

SolverConfig parse_config_text(const std::string& text) {
    SolverConfig c;
    std::stringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno), "missing '=' in '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno), "empty key");

        if (key == "grid.nx") c.nx = parse_int(key, value);
        else if (key == "grid.ny") c.ny = parse_int(key, value);
        else if (key == "grid.lx") c.lx = parse_double(key, value);
        else if (key == "grid.ly") c.ly = parse_double(key, value);
        else if (key == "time.dt") c.dt = parse_double(key, value);
        else if (key == "time.t_final") c.t_final = parse_double(key, value);
        else if (key == "coeff.mu") c.stokes.mu = parse_double(key, value);
        else if (key == "coeff.lambda") c.stokes.lambda = parse_double(key, value);
        else if (key == "coeff.gamma") c.gamma = parse_double(key, value);
        else if (key == "picard.tol") c.picard.tol = parse_double(key, value);
        else if (key == "picard.max_iters") c.picard.max_iters = parse_int(key, value);
        else if (key == "picard.mode") {
            if (value == "per_step") c.picard.mode = PicardMode::per_step;
            else if (value == "trajectory") c.picard.mode = PicardMode::trajectory;
            else throw ConfigError(key, "expected per_step or trajectory, got '" + value + "'");
        }
        else if (key == "transport.scheme") {
            if (value == "upwind") c.transport.scheme = TransportScheme::upwind;
            else if (value == "semi_lagrangian") c.transport.scheme = TransportScheme::semi_lagrangian;
            else throw ConfigError(key, "expected upwind or semi_lagrangian, got '" + value + "'");
        }
        else if (key == "transport.cfl_max") c.transport.cfl_max = parse_double(key, value);
        else if (key == "transport.div_tol") c.transport.div_tol = parse_double(key, value);
        else if (key == "director.tol") c.director.linear_solver_tol = parse_double(key, value);
        else if (key == "director.renormalize") c.director.renormalize = parse_bool(key, value);
        else if (key == "stokes.saddle_tol") c.stokes.saddle_tol = parse_double(key, value);
        else if (key == "stokes.max_outer_iters") c.stokes.max_outer_iters = parse_int(key, value);
        else if (key == "stokes.max_inner_iters") c.stokes.max_inner_iters = parse_int(key, value);
        else if (key == "init.preset") c.init.name = value;
        else if (key == "init.amplitude") c.init.amplitude = parse_double(key, value);
        else if (key == "init.twist") c.init.twist = parse_double(key, value);
        else if (key == "init.rho_min") c.init.rho_min = parse_double(key, value);
        else if (key == "init.rho_max") c.init.rho_max = parse_double(key, value);
        else if (key == "init.perturb_eps") c.init.perturb_eps = parse_double(key, value);
        else if (key == "output.sample_stride") c.sample_stride = parse_int(key, value);
        else throw ConfigError(key, "unknown key");
    }

    if (c.nx < 4 || c.ny < 4) throw ConfigError("grid.nx", "grid needs at least 4x4 cells");
    if (!(c.lx > 0.0) || !(c.ly > 0.0)) throw ConfigError("grid.lx", "domain extents must be positive");
    if (!(c.dt > 0.0)) throw ConfigError("time.dt", "dt must be positive");
    if (!(c.t_final >= 0.0)) throw ConfigError("time.t_final", "t_final must be nonnegative");
    if (!(c.stokes.mu > 0.0)) throw ConfigError("coeff.mu", "mu must be positive");
    if (!(c.stokes.lambda > 0.0)) throw ConfigError("coeff.lambda", "lambda must be positive");
    if (!(c.gamma > 0.0)) throw ConfigError("coeff.gamma", "gamma must be positive");
    if (!(c.picard.tol > 0.0)) throw ConfigError("picard.tol", "tolerance must be positive");
    if (c.picard.max_iters < 1) throw ConfigError("picard.max_iters", "need at least one iteration");
    if (!(c.transport.cfl_max > 0.0 && c.transport.cfl_max <= 1.0))
        throw ConfigError("transport.cfl_max", "CFL limit must lie in (0, 1]");
    if (!(c.init.rho_min > 0.0)) throw ConfigError("init.rho_min", "density must stay positive");
    if (!(c.init.rho_max >= c.init.rho_min))
        throw ConfigError("init.rho_max", "rho_max must be >= rho_min");
    if (c.sample_stride < 1) throw ConfigError("output.sample_stride", "stride must be >= 1");

    c.director.gamma = c.gamma;
    return c;
}

SolverConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string config_to_text(const SolverConfig& c) {
    char buf[64];
    auto num = [&](double x) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return std::string(buf);
    };
    std::string out;
    out += "grid.nx = " + std::to_string(c.nx) + "\n";
    out += "grid.ny = " + std::to_string(c.ny) + "\n";
    out += "grid.lx = " + num(c.lx) + "\n";
    out += "grid.ly = " + num(c.ly) + "\n";
    out += "time.dt = " + num(c.dt) + "\n";
    out += "time.t_final = " + num(c.t_final) + "\n";
    out += "coeff.mu = " + num(c.stokes.mu) + "\n";
    out += "coeff.lambda = " + num(c.stokes.lambda) + "\n";
    out += "coeff.gamma = " + num(c.gamma) + "\n";
    out += "picard.tol = " + num(c.picard.tol) + "\n";
    out += "picard.max_iters = " + std::to_string(c.picard.max_iters) + "\n";
    out += std::string("picard.mode = ") +
           (c.picard.mode == PicardMode::per_step ? "per_step" : "trajectory") + "\n";
    out += std::string("transport.scheme = ") +
           (c.transport.scheme == TransportScheme::upwind ? "upwind" : "semi_lagrangian") + "\n";
    out += "transport.cfl_max = " + num(c.transport.cfl_max) + "\n";
    out += "transport.div_tol = " + num(c.transport.div_tol) + "\n";
    out += "director.tol = " + num(c.director.linear_solver_tol) + "\n";
    out += std::string("director.renormalize = ") + (c.director.renormalize ? "on" : "off") + "\n";
    out += "stokes.saddle_tol = " + num(c.stokes.saddle_tol) + "\n";
    out += "stokes.max_outer_iters = " + std::to_string(c.stokes.max_outer_iters) + "\n";
    out += "stokes.max_inner_iters = " + std::to_string(c.stokes.max_inner_iters) + "\n";
    out += "init.preset = " + c.init.name + "\n";
    out += "init.amplitude = " + num(c.init.amplitude) + "\n";
    out += "init.twist = " + num(c.init.twist) + "\n";
    out += "init.rho_min = " + num(c.init.rho_min) + "\n";
    out += "init.rho_max = " + num(c.init.rho_max) + "\n";
    out += "init.perturb_eps = " + num(c.init.perturb_eps) + "\n";
    out += "output.sample_stride = " + std::to_string(c.sample_stride) + "\n";
    return out;
}

} // namespace nlc
