#include "gfm/solver.hpp"

#include <cmath>

namespace gfm {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

GridFunction embed_interior(const Grid& grid, const std::vector<double>& x,
                            const GridFunction* ring) {
    GridFunction u = ring ? *ring : GridFunction(grid);
    for (int j = 1; j <= grid.nj(); ++j)
        for (int i = 1; i <= grid.ni(); ++i)
            u.at(i, j) = x[static_cast<std::size_t>(j - 1) * grid.ni() + (i - 1)];
    return u;
}

}  // namespace

SolveReport cg_solve_raw(const FivePointOperator& A, const std::vector<double>& b,
                         std::vector<double>& x, const CgOptions& opts) {
    const std::size_t n = A.size();
    SolveReport rep;
    rep.tolerance = opts.tol;
    x.assign(n, 0.0);

    const double bnorm = std::sqrt(dot(b, b));
    if (bnorm == 0.0) {
        rep.converged = true;
        return rep;
    }

    const int max_iter = opts.max_iter > 0 ? opts.max_iter : 10 * static_cast<int>(n);

    std::vector<double> inv_diag;
    if (opts.jacobi) {
        inv_diag.resize(n);
        const Grid& g = A.grid();
        for (int j = 1; j <= g.nj(); ++j)
            for (int i = 1; i <= g.ni(); ++i)
                inv_diag[A.index(i, j)] = 1.0 / A.diag(i, j);
    }

    std::vector<double> r(n), z(n), p(n), q(n);
    auto precondition = [&](const std::vector<double>& rv, std::vector<double>& zv) {
        if (opts.jacobi)
            for (std::size_t k = 0; k < n; ++k) zv[k] = inv_diag[k] * rv[k];
        else
            zv = rv;
    };

    auto log_energy = [&]() {
        if (!opts.energy_log) return;
        A.apply(x, q);
        opts.energy_log->push_back(0.5 * dot(x, q) - dot(b, x));
    };
    if (opts.energy_log) {
        opts.energy_log->clear();
        log_energy();
    }

    // true residual; the recursive one drifts and can even collapse to an
    // exact zero, so convergence is always re-checked against this
    auto true_residual = [&]() {
        A.apply(x, q);
        for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - q[k];
        return std::sqrt(dot(r, r));
    };

    int it = 0;
    double rnorm = true_residual();
    if (std::isnan(rnorm)) {
        rep.residual_norm = rnorm;
        throw SolverError("cg_solve: NaN in the initial residual (bad matrix or rhs)", rep);
    }
    while (it < max_iter && rnorm > opts.tol * bnorm) {
        // (re)start the recursion from the true residual
        precondition(r, z);
        p = z;
        double rz = dot(r, z);
        double rec_norm = rnorm;
        while (it < max_iter && rec_norm > 0.5 * opts.tol * bnorm) {
            A.apply(p, q);
            const double pq = dot(p, q);
            if (!(pq > 0.0) || std::isnan(pq)) {
                rep.iterations = it;
                rep.residual_norm = rnorm / bnorm;
                throw SolverError(
                    "cg_solve: direction curvature is not positive (matrix not SPD or NaN)", rep);
            }
            const double alpha = rz / pq;
            for (std::size_t k = 0; k < n; ++k) {
                x[k] += alpha * p[k];
                r[k] -= alpha * q[k];
            }
            precondition(r, z);
            const double rz_new = dot(r, z);
            if (std::isnan(rz_new)) {
                rep.iterations = it;
                rep.residual_norm = rnorm / bnorm;
                throw SolverError("cg_solve: NaN detected in the residual recurrence", rep);
            }
            const double beta = rz_new / rz;
            for (std::size_t k = 0; k < n; ++k) p[k] = z[k] + beta * p[k];
            rz = rz_new;
            rec_norm = std::sqrt(dot(r, r));
            ++it;
            log_energy();
        }
        const double polished = true_residual();
        if (polished >= 0.999 * rnorm) {
            rnorm = polished;  // stagnated at the attainable floor
            break;
        }
        rnorm = polished;
    }

    rep.iterations = it;
    rep.residual_norm = rnorm / bnorm;
    rep.converged = rep.residual_norm <= opts.tol;
    return rep;
}

std::pair<GridFunction, SolveReport> cg_solve(const SparseSpdSystem& sys,
                                              const CgOptions& opts) {
    std::vector<double> x;
    SolveReport rep = cg_solve_raw(sys.op, sys.rhs, x, opts);
    return {embed_interior(sys.op.grid(), x, nullptr), rep};
}

std::pair<GridFunction, SolveReport> cg_solve(const StencilSystem& sys,
                                              const CgOptions& opts) {
    std::vector<double> x;
    SolveReport rep = cg_solve_raw(sys.op, sys.rhs, x, opts);
    return {embed_interior(sys.op.grid(), x, &sys.boundary), rep};
}

}  // namespace gfm
