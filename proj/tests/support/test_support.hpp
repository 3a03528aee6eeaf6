#pragma once

// Shared helpers for the test suites: small dense linear-algebra oracles
// (kept independent of the solver under test) and random grid functions.

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "gfm/grid.hpp"
#include "gfm/problem_case.hpp"

namespace gfm::testing {

/// Dense symmetric positive-definite solve via Cholesky, row-major a (n x n).
inline std::vector<double> dense_cholesky_solve(std::vector<double> a,
                                                std::vector<double> b) {
    const std::size_t n = b.size();
    if (a.size() != n * n) throw std::invalid_argument("dense_cholesky_solve: size mismatch");
    // a = L L^T in the lower triangle
    for (std::size_t k = 0; k < n; ++k) {
        double d = a[k * n + k];
        for (std::size_t p = 0; p < k; ++p) d -= a[k * n + p] * a[k * n + p];
        if (!(d > 0.0)) throw std::runtime_error("dense_cholesky_solve: matrix not positive definite");
        const double lkk = std::sqrt(d);
        a[k * n + k] = lkk;
        for (std::size_t i = k + 1; i < n; ++i) {
            double s = a[i * n + k];
            for (std::size_t p = 0; p < k; ++p) s -= a[i * n + p] * a[k * n + p];
            a[i * n + k] = s / lkk;
        }
    }
    // forward then backward substitution
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t p = 0; p < i; ++p) s -= a[i * n + p] * b[p];
        b[i] = s / a[i * n + i];
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t p = ii + 1; p < n; ++p) s -= a[p * n + ii] * b[p];
        b[ii] = s / a[ii * n + ii];
    }
    return b;
}

/// Eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations.
inline std::vector<double> jacobi_eigenvalues(std::vector<double> a, std::size_t n,
                                              int max_sweeps = 50) {
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a[i * n + j] * a[i * n + j];
        if (off < 1e-28 * n * n) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (std::abs(apq) < 1e-300) continue;
                const double app = a[p * n + p], aqq = a[q * n + q];
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t), s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k * n + p], akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p * n + k], aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a[i * n + i];
    return eig;
}

/// Random grid function vanishing on the boundary ring.
inline GridFunction random_h10(const Grid& g, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    GridFunction psi(g);
    for (int j = 1; j <= g.nj(); ++j)
        for (int i = 1; i <= g.ni(); ++i)
            psi.at(i, j) = dist(rng);
    return psi;
}

/// Random grid function with boundary values included.
inline GridFunction random_grid_function(const Grid& g, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    GridFunction w(g);
    for (double& x : w.values()) x = dist(rng);
    return w;
}

inline double rel_gap(double a, double b) {
    return std::abs(a - b) / (1.0 + std::abs(a) + std::abs(b));
}

/// A no-interface case with the given coefficient; data default to zero.
inline ProblemCase plain_case(ScalarFn beta, double m, double M) {
    ProblemCase c;
    c.name = "plain";
    c.phi_fn = [](double, double) { return 1.0; };
    c.has_interface = false;
    c.beta_minus_fn = c.beta_plus_fn = std::move(beta);
    c.m = m;
    c.M = M;
    c.f_minus_fn = c.f_plus_fn = [](double, double) { return 0.0; };
    c.a_fn = c.b_fn = c.g_fn = [](double, double) { return 0.0; };
    return c;
}

/// A deterministic smooth trig mix in [lo, hi], for "random beta" style cases.
inline ScalarFn trig_mix(unsigned seed, double lo, double hi) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const double a1 = dist(rng), a2 = dist(rng), a3 = dist(rng);
    return [=](double x, double y) {
        const double t = a1 * std::sin(3.0 * x + a3) + a2 * std::cos(2.0 * y - a1) +
                         0.5 * std::sin(5.0 * x * y);
        const double unit = 0.5 + 0.5 * std::tanh(t);  // in (0,1)
        return lo + (hi - lo) * unit;
    };
}

}  // namespace gfm::testing
