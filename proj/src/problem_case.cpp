#include "gfm/problem_case.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace gfm {

double smooth_cutoff01(double t) {
    if (t <= 0.0) return 1.0;
    if (t >= 1.0) return 0.0;
    return 1.0 - t * t * (3.0 - 2.0 * t);
}

namespace {

std::array<double, 2> fd_gradient(const ScalarFn& f, double x, double y, double step) {
    return {(f(x + step, y) - f(x - step, y)) / (2.0 * step),
            (f(x, y + step) - f(x, y - step)) / (2.0 * step)};
}

// Fourth-order central differences, for the interface normal where the
// second-order truncation error would eat the validation tolerance.
std::array<double, 2> fd_gradient4(const ScalarFn& f, double x, double y, double step) {
    auto d = [&](double fp2, double fp1, double fm1, double fm2) {
        return (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * step);
    };
    return {d(f(x + 2 * step, y), f(x + step, y), f(x - step, y), f(x - 2 * step, y)),
            d(f(x, y + 2 * step), f(x, y + step), f(x, y - step), f(x, y - 2 * step))};
}

// Bisect phi to a root along the segment [p, q]; assumes a sign change.
std::array<double, 2> bisect_interface(const ScalarFn& phi,
                                       std::array<double, 2> p, std::array<double, 2> q) {
    double fp = phi(p[0], p[1]);
    for (int it = 0; it < 80; ++it) {
        const std::array<double, 2> mid{0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])};
        const double fm = phi(mid[0], mid[1]);
        if ((fm <= 0.0) == (fp <= 0.0)) {
            p = mid;
            fp = fm;
        } else {
            q = mid;
        }
    }
    return {0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])};
}

}  // namespace

void validate_case(const ProblemCase& c, double h0, double tol) {
    if (!(c.x_w < c.x_e) || !(c.y_s < c.y_n))
        throw CaseConsistencyError(c.name + ": degenerate domain rectangle");
    if (!(c.m > 0.0) || !(c.m <= c.M))
        throw CaseConsistencyError(c.name + ": coefficient bounds need 0 < m <= M");
    if (!c.phi_fn || !c.beta_minus_fn || !c.beta_plus_fn || !c.f_minus_fn ||
        !c.f_plus_fn || !c.a_fn || !c.b_fn || !c.g_fn)
        throw CaseConsistencyError(c.name + ": missing data function");

    const int k = 160;  // samples per scan line / wall
    const double lx = c.x_e - c.x_w, ly = c.y_n - c.y_s;

    // Collect interface points by scanning grid lines for sign changes.
    std::vector<std::array<double, 2>> gamma_pts;
    if (c.has_interface) {
        for (int r = 1; r < k; ++r) {
            const double y = c.y_s + ly * r / k;
            for (int s = 0; s < k; ++s) {
                const double x0 = c.x_w + lx * s / k, x1 = c.x_w + lx * (s + 1) / k;
                if ((c.phi_fn(x0, y) <= 0.0) != (c.phi_fn(x1, y) <= 0.0))
                    gamma_pts.push_back(bisect_interface(c.phi_fn, {x0, y}, {x1, y}));
            }
            const double x = c.x_w + lx * r / k;
            for (int s = 0; s < k; ++s) {
                const double y0 = c.y_s + ly * s / k, y1 = c.y_s + ly * (s + 1) / k;
                if ((c.phi_fn(x, y0) <= 0.0) != (c.phi_fn(x, y1) <= 0.0))
                    gamma_pts.push_back(bisect_interface(c.phi_fn, {x, y0}, {x, y1}));
            }
        }
    }

    if (c.has_exact() && !gamma_pts.empty()) {
        const bool exact_grads = static_cast<bool>(c.grad_u_minus_fn) &&
                                 static_cast<bool>(c.grad_u_plus_fn);
        const double fd_step = 1e-5 * std::max(lx, ly);
        const double jump_tol = exact_grads ? tol : std::max(tol, 1e-7);

        for (const auto& p : gamma_pts) {
            const double x = p[0], y = p[1];
            const double up = c.u_plus_fn(x, y), um = c.u_minus_fn(x, y);
            const double scale_a = 1.0 + std::abs(up) + std::abs(um);
            if (std::abs(c.a_fn(x, y) - (up - um)) > tol * scale_a)
                throw CaseConsistencyError(c.name + ": a does not match [u] on the interface");

            const auto gphi = fd_gradient4(c.phi_fn, x, y, 10.0 * fd_step);
            const double mag = std::hypot(gphi[0], gphi[1]);
            if (mag < 1e-10) continue;  // cannot orient here, skip the flux check
            const double n1 = gphi[0] / mag, n2 = gphi[1] / mag;

            const auto gup = exact_grads ? c.grad_u_plus_fn(x, y)
                                         : fd_gradient(c.u_plus_fn, x, y, fd_step);
            const auto gum = exact_grads ? c.grad_u_minus_fn(x, y)
                                         : fd_gradient(c.u_minus_fn, x, y, fd_step);
            const double bp = c.beta_plus_fn(x, y), bm = c.beta_minus_fn(x, y);
            const double flux_jump = bp * (gup[0] * n1 + gup[1] * n2) -
                                     bm * (gum[0] * n1 + gum[1] * n2);
            const double scale_b = 1.0 + bp * (std::abs(gup[0]) + std::abs(gup[1])) +
                                   bm * (std::abs(gum[0]) + std::abs(gum[1]));
            if (std::abs(c.b_fn(x, y) - flux_jump) > jump_tol * scale_b)
                throw CaseConsistencyError(c.name + ": b does not match [(beta u)_n] on the interface");
        }
    }

    if (c.has_exact()) {
        for (int s = 0; s <= k; ++s) {
            const double xs = c.x_w + lx * s / k, ys = c.y_s + ly * s / k;
            const std::array<std::array<double, 2>, 4> wall_pts{{
                {xs, c.y_s}, {xs, c.y_n}, {c.x_w, ys}, {c.x_e, ys}}};
            for (const auto& p : wall_pts) {
                const double ue = c.u_exact(p[0], p[1]);
                if (std::abs(c.g_fn(p[0], p[1]) - ue) > tol * (1.0 + std::abs(ue)))
                    throw CaseConsistencyError(c.name + ": g does not match the exact solution on the boundary");
            }
        }
    }

    if (c.interface_closed) {
        // phi is signed-distance-like near Gamma, so the boundary values of
        // phi bound the clearance of the zero set.
        double min_phi = std::numeric_limits<double>::max();
        for (int s = 0; s <= k; ++s) {
            const double xs = c.x_w + lx * s / k, ys = c.y_s + ly * s / k;
            min_phi = std::min({min_phi, c.phi_fn(xs, c.y_s), c.phi_fn(xs, c.y_n),
                                c.phi_fn(c.x_w, ys), c.phi_fn(c.x_e, ys)});
        }
        if (min_phi < 2.0 * h0)
            throw CaseConsistencyError(c.name + ": interface too close to the boundary");
    }
}

}  // namespace gfm
