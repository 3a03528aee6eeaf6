#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <string>

#include "gfm/grid.hpp"

namespace gfm {

using ScalarFn = std::function<double(double, double)>;
using VectorFn = std::function<std::array<double, 2>(double, double)>;

/// Raised when a case's data functions contradict each other (jumps not
/// matching the exact branches, bad coefficient bounds, ...).
struct CaseConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One interface problem: div(beta grad u) = f away from Gamma,
/// [u] = a and [(beta u)_n] = b across Gamma = {phi = 0}, u = g on the
/// boundary. Points with phi <= 0 belong to Omega^-; beta takes its
/// Omega^- limit on Gamma.
struct ProblemCase {
    std::string name;
    double x_w = 0.0, x_e = 1.0, y_s = 0.0, y_n = 1.0;

    ScalarFn phi_fn;  // constant positive means "no interface"

    ScalarFn beta_minus_fn, beta_plus_fn;
    double m = 1.0, M = 1.0;  // m <= beta <= M on the whole domain

    ScalarFn f_minus_fn, f_plus_fn;
    ScalarFn a_fn, b_fn, g_fn;

    // Exact solution branches and their gradients, when available.
    ScalarFn u_minus_fn, u_plus_fn;
    VectorFn grad_u_minus_fn, grad_u_plus_fn;

    // Analytic extension of the interface normal and its divergence,
    // used only by the continuous-side quadrature oracles.
    VectorFn normal_fn;
    ScalarFn div_normal_fn;

    bool has_interface = true;
    bool interface_closed = false;  // zero set strictly inside the rectangle

    bool has_exact() const { return static_cast<bool>(u_minus_fn) && static_cast<bool>(u_plus_fn); }
    bool has_analytics() const { return static_cast<bool>(phi_fn); }

    bool in_minus(double x, double y) const { return phi_fn(x, y) <= 0.0; }

    double beta(double x, double y) const {
        return in_minus(x, y) ? beta_minus_fn(x, y) : beta_plus_fn(x, y);
    }
    double f(double x, double y) const {
        return in_minus(x, y) ? f_minus_fn(x, y) : f_plus_fn(x, y);
    }
    double u_exact(double x, double y) const {
        return in_minus(x, y) ? u_minus_fn(x, y) : u_plus_fn(x, y);
    }

    Grid make_grid(int ni, int nj) const { return Grid(x_w, x_e, y_s, y_n, ni, nj); }
};

/// Registration-time self-check: with exact branches present, the
/// prescribed jumps must match the branches along Gamma and g must match
/// the active branch on the boundary; closed interfaces must clear the
/// boundary by 2*h0. Throws CaseConsistencyError on violation.
void validate_case(const ProblemCase& c, double h0, double tol = 1e-10);

/// C1 cutoff: 1 for t <= 0, 0 for t >= 1, cubic smoothstep in between.
double smooth_cutoff01(double t);

}  // namespace gfm
