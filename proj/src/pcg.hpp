#pragma once

// Matrix-free preconditioned conjugate gradients on flat vectors, shared by
// the director and momentum solves.  Plain dot products in fixed serial
// order keep every solve bit-reproducible.

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <string>
#include <vector>

#include "nlc/errors.hpp"

namespace nlc::detail {

/// Scientific-notation rendering for diagnostics in error messages; the
/// default to_string(double) prints %f, which rounds small residuals to
/// an unreadable 0.000000.
inline std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (size_t n = 0; n < a.size(); ++n) acc += a[n] * b[n];
    return acc;
}

inline void axpy(double a, const std::vector<double>& x, std::vector<double>& y) {
    for (size_t n = 0; n < y.size(); ++n) y[n] += a * x[n];
}

struct PcgReport {
    int iters = 0;
    double rel_residual = 0.0;
};

/// Solves A x = b for SPD A, overwriting x (used as the initial guess).
/// apply_a(in, out) evaluates the operator, apply_m(in, out) the
/// preconditioner.  Stops when |r|_2 <= tol * |b|_2 (or |b| = 0, which
/// short-circuits to x = 0).  Throws LinearSolveDiverged via the caller's
/// label when max_iters is exhausted.
template <class ApplyA, class ApplyM>
PcgReport pcg(const ApplyA& apply_a, const ApplyM& apply_m, const std::vector<double>& b,
              std::vector<double>& x, double tol, int max_iters, const std::string& label) {
    const size_t n = b.size();
    const double bnorm = std::sqrt(dot(b, b));
    if (bnorm == 0.0) {
        x.assign(n, 0.0);
        return {0, 0.0};
    }

    std::vector<double> r(n), z(n), q(n), ap(n);
    apply_a(x, ap);
    for (size_t k = 0; k < n; ++k) r[k] = b[k] - ap[k];

    double rnorm = std::sqrt(dot(r, r));
    if (rnorm <= tol * bnorm) return {0, rnorm / bnorm};

    apply_m(r, z);
    q = z;
    double rz = dot(r, z);

    for (int it = 1; it <= max_iters; ++it) {
        apply_a(q, ap);
        const double qaq = dot(q, ap);
        if (!(qaq > 0.0))
            throw LinearSolveDiverged(label + ": operator lost positive definiteness");
        const double alpha = rz / qaq;
        axpy(alpha, q, x);
        axpy(-alpha, ap, r);
        rnorm = std::sqrt(dot(r, r));
        if (rnorm <= tol * bnorm || !std::isfinite(rnorm))
            return {it, rnorm / bnorm};
        apply_m(r, z);
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (size_t k = 0; k < n; ++k) q[k] = z[k] + beta * q[k];
    }
    throw LinearSolveDiverged(label + ": no convergence in " + std::to_string(max_iters) +
                              " iterations (rel residual " + sci(rnorm / bnorm) + ")");
}

} // namespace nlc::detail
