#pragma once

#include "gfm/stencil.hpp"
#include "gfm/weak_form.hpp"

namespace gfm {

struct SolveReport {
    int iterations = 0;
    double residual_norm = 0.0;  // relative, ||Ax-b|| / ||b||
    bool converged = false;
    double tolerance = 0.0;
};

struct SolverError : std::runtime_error {
    SolveReport report;
    SolverError(const std::string& msg, SolveReport r)
        : std::runtime_error(msg), report(r) {}
};

struct CgOptions {
    double tol = 1e-10;
    int max_iter = 0;  // 0 means 10 * I * J
    bool jacobi = false;
    std::vector<double>* energy_log = nullptr;  // 0.5 x'Ax - b'x per iterate
};

/// Conjugate gradients with fixed initial guess x0 = 0. ||b|| = 0 returns
/// x = 0 after zero iterations; NaN in the recurrence aborts with a
/// SolverError. Non-convergence is reported, not thrown.
SolveReport cg_solve_raw(const FivePointOperator& A, const std::vector<double>& b,
                         std::vector<double>& x, const CgOptions& opts = {});

/// Solve the weak system; the solution has a zero boundary ring.
std::pair<GridFunction, SolveReport> cg_solve(const SparseSpdSystem& sys,
                                              const CgOptions& opts = {});

/// Solve the stencil system; the solution carries g on the boundary ring.
std::pair<GridFunction, SolveReport> cg_solve(const StencilSystem& sys,
                                              const CgOptions& opts = {});

}  // namespace gfm
