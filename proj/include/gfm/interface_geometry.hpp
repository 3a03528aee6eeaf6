#pragma once

#include "gfm/grid.hpp"

namespace gfm {

/// Discrete interface representation: sampled level-set phi, the 0/1
/// characteristic function of { phi <= 0 }, and unit normals from central
/// differences at interior nodes (boundary entries are zero and unread).
struct LevelSetData {
    GridFunction phi;
    GridFunction chi;
    GridFunction n1;
    GridFunction n2;
    int degenerate_normals = 0;  // interior nodes where |grad phi| < 1e-12

    explicit LevelSetData(const Grid& g) : phi(g), chi(g), n1(g), n2(g) {}
};

/// Arm fractions: theta weights and the estimated portion of each arm
/// inside Omega^- (chi1 on x-arms, chi2 on y-arms), all in [0,1].
struct ArmFractions {
    HalfGridField theta_x;
    HalfGridField chi1;
    HalfGridField theta_y;
    HalfGridField chi2;

    explicit ArmFractions(const Grid& g)
        : theta_x(g, Axis::X), chi1(g, Axis::X),
          theta_y(g, Axis::Y), chi2(g, Axis::Y) {}
};

LevelSetData build_levelset(const std::function<double(double, double)>& phi_fn,
                            const Grid& grid);

/// Same, but starting from already sampled nodal phi (e.g. read from a file).
LevelSetData build_levelset_from_values(const GridFunction& phi);

ArmFractions arm_fractions(const GridFunction& phi);

}  // namespace gfm
