#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gfm/cases.hpp"
#include "gfm/problem_case.hpp"

namespace gfm {

/// Load a case from a key=value text file. Supported keys: name, x_w, x_e,
/// y_s, y_n, phi (families: "planar s=<x0>", "circle cx=<x> cy=<y> r=<r>",
/// "none", "file <path>"), beta_minus, beta_plus, f_minus, f_plus, a, b, g
/// (constants). Jumps are extended off the interface with a smooth cutoff in
/// |phi|. Throws std::invalid_argument on parse errors and
/// CaseConsistencyError on semantic ones.
ProblemCase load_case_file(const std::string& path);

/// Nodal level-set file: first line "I J", then (I+2)x(J+2) values,
/// row-major in j (one row per j, i varying fastest).
GridFunction read_phi_file(const std::string& path, double x_w, double x_e,
                           double y_s, double y_n);

/// Bilinear interpolation of nodal values at an arbitrary point of the
/// closed rectangle (clamped outside).
double interpolate_bilinear(const GridFunction& w, double x, double y);

/// Full-lattice dump, one row per j, space-separated.
void write_solution_matrix(std::ostream& os, const GridFunction& u);

/// Study rows as CSV: header I,J,h,err_l2,err_h1,cg_iters,wall_ms.
void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows);

}  // namespace gfm
