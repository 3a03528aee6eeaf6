#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gfm/extension.hpp"
#include "gfm/problem_case.hpp"
#include "gfm/solver.hpp"

namespace gfm {

enum class SolvePath { Weak, Stencil };

/// One line of a refinement study.
struct ConvergenceRow {
    int ni = 0, nj = 0;
    double h = 0.0;
    double err_l2 = 0.0;
    double err_h1 = 0.0;  // arm-gradient error over non-crossing arms
    int cg_iters = 0;
    double wall_ms = 0.0;
    bool richardson = false;  // errors vs a fine-grid reference, not exact
};

struct BatteryCondition {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct BatteryReport {
    std::vector<BatteryCondition> conditions;
    bool all_passed() const {
        for (const auto& c : conditions)
            if (!c.passed) return false;
        return true;
    }
};

/// The built-in manufactured cases: smooth (no interface), planar (1D
/// two-material profile extended in y), circle (piecewise manufactured
/// solution, contrast 10), circle1000 (contrast 1000).
const std::vector<ProblemCase>& builtin_cases();

std::optional<ProblemCase> find_builtin_case(const std::string& name);
std::vector<std::string> builtin_case_names();

/// Weak path: solve -B^h[v,psi] = F^h(psi) and reconstruct u = v + g - a chi.
/// Stencil path: solve the summation-by-parts system for u directly.
/// Either way u carries g on its boundary ring.
std::pair<GridFunction, SolveReport> solve_case(const ProblemCase& c, const Grid& grid,
                                                SolvePath path, const CgOptions& opts = {});

/// Refinement study: `levels` grids with (I+1, J+1) doubling from the
/// coarsest. Without exact branches, errors are measured against one extra
/// refinement level (rows flagged richardson).
std::vector<ConvergenceRow> convergence_study(const ProblemCase& c, int levels,
                                              SolvePath path,
                                              int coarse_ni = 15, int coarse_nj = 15,
                                              const CgOptions& opts = {});

/// Executable structural conditions: sum-to-integral identities, extension
/// bounds, strong approximation, weak consistency, uniform functional bound,
/// and uniform boundedness of the discrete solutions.
BatteryReport run_structural_battery(const ProblemCase& c, int levels = 4);

}  // namespace gfm
