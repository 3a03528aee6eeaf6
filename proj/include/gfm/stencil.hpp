#pragma once

#include "gfm/weak_form.hpp"

namespace gfm {

/// The summation-by-parts form of the weak problem: a 5-point system in PDE
/// units, matrix = (weak matrix) / (dx dy), kept positive definite. With
/// L = grad_x(beta1 grad_x .) + grad_y(beta2 grad_y .) the stored system is
/// -L u = -f - jump corrections, plus the Dirichlet lift of g on the rhs.
struct StencilSystem {
    FivePointOperator op;
    std::vector<double> rhs;
    std::vector<double> lift;  // boundary contributions folded into rhs
    GridFunction boundary;     // g on the ring; the solution carries it

    explicit StencilSystem(const Grid& g)
        : op(g), rhs(op.size(), 0.0), lift(op.size(), 0.0), boundary(g) {}
};

/// Interface-weighted arm averages a^1, a^2 (note the weights are reversed
/// relative to chi^1: theta multiplies the near endpoint).
std::pair<HalfGridField, HalfGridField> ghost_values(const GridFunction& a,
                                                     const ArmFractions& arms);

/// Max residual of the discrete product rule
/// grad(a chi) = (grad a) chi^alpha + a^alpha (grad chi) over all arms.
double discrete_product_rule_check(const GridFunction& a, const ArmFractions& arms,
                                   const GridFunction& chi);

StencilSystem assemble_stencil_system(const ProblemCase& c, const Grid& grid);

/// u = v + g - a chi at every node.
GridFunction reconstruct_u(const GridFunction& v, const GridFunction& g,
                           const GridFunction& a, const GridFunction& chi);

}  // namespace gfm
