#pragma once

#include <stdexcept>
#include <string>

namespace nlc {

/// Base class for every recoverable failure the solver reports.
/// The CLI maps these to exit code 1 (ConfigError to exit code 2).
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

class CflViolation : public SolverError {
public:
    CflViolation(double cfl, double cfl_max)
        : SolverError("CflViolation: advective CFL " + std::to_string(cfl) +
                      " exceeds limit " + std::to_string(cfl_max)) {}
};

class NonSolenoidalVelocity : public SolverError {
public:
    NonSolenoidalVelocity(double div_inf, double tol)
        : SolverError("NonSolenoidalVelocity: |div v|_inf = " + std::to_string(div_inf) +
                      " above tolerance " + std::to_string(tol)) {}
};

class LinearSolveDiverged : public SolverError {
public:
    explicit LinearSolveDiverged(const std::string& what)
        : SolverError("LinearSolveDiverged: " + what) {}
};

class SaddleSolveDiverged : public SolverError {
public:
    explicit SaddleSolveDiverged(const std::string& what)
        : SolverError("SaddleSolveDiverged: " + what) {}
};

class NonPositiveDensity : public SolverError {
public:
    explicit NonPositiveDensity(double rho_min)
        : SolverError("NonPositiveDensity: min rho = " + std::to_string(rho_min)) {}
};

class PicardDiverged : public SolverError {
public:
    explicit PicardDiverged(const std::string& what)
        : SolverError("PicardDiverged: " + what) {}
};

class GridMismatch : public SolverError {
public:
    GridMismatch() : SolverError("GridMismatch: fields live on different grids") {}
};

class InvalidPreset : public SolverError {
public:
    explicit InvalidPreset(const std::string& name)
        : SolverError("InvalidPreset: unknown initial-data preset '" + name + "'") {}
};

class IoError : public SolverError {
public:
    explicit IoError(const std::string& what) : SolverError("IoError: " + what) {}
};

class FormatError : public SolverError {
public:
    explicit FormatError(const std::string& what) : SolverError("FormatError: " + what) {}
};

/// Configuration problems carry the offending key so the CLI can name it.
class ConfigError : public SolverError {
public:
    ConfigError(const std::string& key, const std::string& what)
        : SolverError("ConfigError: key '" + key + "': " + what), key_(key) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

} // namespace nlc
