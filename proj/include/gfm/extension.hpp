#pragma once

#include "gfm/interface_geometry.hpp"
#include "gfm/problem_case.hpp"
#include "gfm/weak_form.hpp"

namespace gfm {

/// Right-triangle tiling of the rectangle: every grid cell (i,j),
/// i in [0,I], j in [0,J], splits into a lower triangle
/// {(i,j),(i+1,j),(i,j+1)} and an upper triangle {(i+1,j+1),(i,j+1),(i+1,j)}.
/// Triangles are indexed 2*(j*(I+1)+i) + (0 = lower, 1 = upper).
class Triangulation {
public:
    explicit Triangulation(const Grid& grid) : grid_(grid) {}

    const Grid& grid() const { return grid_; }
    int cells_x() const { return grid_.ni() + 1; }
    int cells_y() const { return grid_.nj() + 1; }
    int num_triangles() const { return 2 * cells_x() * cells_y(); }
    double triangle_area() const { return 0.5 * grid_.cell_area(); }

    int triangle_id(int i, int j, bool upper) const {
        return 2 * (j * cells_x() + i) + (upper ? 1 : 0);
    }
    int cell_i(int t) const { return (t / 2) % cells_x(); }
    int cell_j(int t) const { return (t / 2) / cells_x(); }
    bool is_upper(int t) const { return t & 1; }

    /// Vertices ordered so the first is the right-angle corner.
    std::array<std::array<double, 2>, 3> vertices(int t) const;

private:
    Grid grid_;
};

/// Continuous piecewise-linear interpolant of nodal values; the gradient is
/// constant on each triangle.
class PiecewiseLinearField {
public:
    PiecewiseLinearField(const Triangulation& tri, const GridFunction& w);

    const Triangulation& triangulation() const { return tri_; }
    const GridFunction& nodal() const { return nodal_; }

    double grad_x(int t) const { return gx_[t]; }
    double grad_y(int t) const { return gy_[t]; }

    /// Affine evaluation inside triangle t.
    double eval(int t, double x, double y) const;

    /// Evaluation at an arbitrary point of the closed rectangle.
    double eval(double x, double y) const { return eval(locate(x, y), x, y); }

    int locate(double x, double y) const;

private:
    Triangulation tri_;
    GridFunction nodal_;
    std::vector<double> gx_, gy_;
};

/// Per-triangle constant extension of a half-grid field: each arm value is
/// assigned to the one or two triangles sharing that arm as an edge.
class PiecewiseConstantField {
public:
    PiecewiseConstantField(const Triangulation& tri, Axis axis)
        : tri_(tri), axis_(axis), v_(static_cast<std::size_t>(tri.num_triangles()), 0.0) {}

    const Triangulation& triangulation() const { return tri_; }
    Axis axis() const { return axis_; }
    double at(int t) const { return v_[t]; }
    double& at(int t) { return v_[t]; }

private:
    Triangulation tri_;
    Axis axis_;
    std::vector<double> v_;
};

PiecewiseLinearField extend_T(const Triangulation& tri, const GridFunction& w);
PiecewiseConstantField extend_S(const Triangulation& tri, const HalfGridField& field);

/// Exact sum-to-integral form of the bilinear form:
/// int_Omega [ S1(beta1) T(v)_x T(psi)_x + S2(beta2) T(v)_y T(psi)_y ].
double integral_bilinear(const GridFunction& v, const GridFunction& psi,
                         const HalfGridField& beta_x, const HalfGridField& beta_y);

/// Exact-integral forms of F^h_3 and F^h_4 built from the S and T extensions.
double integral_f3_form(const GridFunction& a, const GridFunction& psi,
                        const CoefficientSamples& coeff, const ArmFractions& arms);
double integral_f4_form(const GridFunction& b, const LevelSetData& ls,
                        const GridFunction& psi, const ArmFractions& arms);

/// Quadrature of int beta grad(u) . grad(psi) with the 3-point edge-midpoint
/// rule per triangle; exact whenever beta is quadratic on each triangle.
double quad_B(const PiecewiseLinearField& u, const PiecewiseLinearField& psi,
              const ScalarFn& beta);

struct QuadFResult {
    double value = 0.0;
    double richardson_error = 0.0;  // |Q(refinement) - Q(refinement/2)|
};

/// Continuous-side oracle for F(psi) = F_1 + ... + F_4 by composite midpoint
/// quadrature on `refinement`^2 subtriangles per triangle. The localization
/// to Omega^- uses the analytic sign of phi, never the discrete chi.
QuadFResult quad_F(const ProblemCase& c, const PiecewiseLinearField& psi,
                   int refinement);

struct ExtensionBoundsResult {
    bool lower_ok = false;
    bool upper_ok = false;
    double ratio = 0.0;  // quad_B(T psi, T psi, beta) / ||psi||_h^2
};

/// m/M ||psi||_h^2 <= B[T psi, T psi] <= M/m ||psi||_h^2, with relative
/// slack for quadrature roundoff.
ExtensionBoundsResult check_extension_bounds(const GridFunction& psi,
                                             const CoefficientSamples& coeff,
                                             const ProblemCase& c,
                                             double slack = 1e-6);

/// Analytic scalar field with its gradient, for the approximation checks.
struct ScalarField {
    ScalarFn f, fx, fy;
};

/// || grad(T^h psi^h - psi) ||_L2 per refinement level, doubling from
/// `coarsest`. First-order decay is the expected profile.
std::vector<double> check_strong_approximation(const Grid& coarsest,
                                               const ScalarField& psi,
                                               int levels, int quad_refine = 4);

struct WeakConsistencyResult {
    std::vector<double> dev_bilinear;
    std::vector<double> dev_functional;
};

/// |B^h[v^h,psi^h] - quad_B(Tv, Tpsi, beta)| and |F^h(psi^h) - quad_F(...)|
/// per level for fixed smooth v, psi; both must tend to zero.
WeakConsistencyResult check_weak_consistency(const ProblemCase& c,
                                             const ScalarFn& v_fn,
                                             const ScalarFn& psi_fn,
                                             const Grid& coarsest, int levels,
                                             int quad_refine = 48);

}  // namespace gfm
