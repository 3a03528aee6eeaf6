#include "gfm/stencil.hpp"

namespace gfm {

std::pair<HalfGridField, HalfGridField> ghost_values(const GridFunction& a,
                                                     const ArmFractions& arms) {
    const Grid& g = a.grid();
    HalfGridField a1(g, Axis::X), a2(g, Axis::Y);
    for (int j = 0; j <= g.nj() + 1; ++j) {
        for (int i = 0; i <= g.ni(); ++i) {
            const double th = arms.theta_x.at(i, j);
            a1.at(i, j) = a.at(i + 1, j) * (1.0 - th) + a.at(i, j) * th;
        }
    }
    for (int j = 0; j <= g.nj(); ++j) {
        for (int i = 0; i <= g.ni() + 1; ++i) {
            const double th = arms.theta_y.at(i, j);
            a2.at(i, j) = a.at(i, j + 1) * (1.0 - th) + a.at(i, j) * th;
        }
    }
    return {std::move(a1), std::move(a2)};
}

double discrete_product_rule_check(const GridFunction& a, const ArmFractions& arms,
                                   const GridFunction& chi) {
    const Grid& g = a.grid();
    const auto [a1, a2] = ghost_values(a, arms);
    double worst = 0.0;
    for (int j = 0; j <= g.nj() + 1; ++j) {
        for (int i = 0; i <= g.ni(); ++i) {
            const double lhs = (a.at(i + 1, j) * chi.at(i + 1, j) - a.at(i, j) * chi.at(i, j)) / g.dx();
            const double rhs = (a.at(i + 1, j) - a.at(i, j)) / g.dx() * arms.chi1.at(i, j) +
                               a1.at(i, j) * (chi.at(i + 1, j) - chi.at(i, j)) / g.dx();
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    for (int j = 0; j <= g.nj(); ++j) {
        for (int i = 0; i <= g.ni() + 1; ++i) {
            const double lhs = (a.at(i, j + 1) * chi.at(i, j + 1) - a.at(i, j) * chi.at(i, j)) / g.dy();
            const double rhs = (a.at(i, j + 1) - a.at(i, j)) / g.dy() * arms.chi2.at(i, j) +
                               a2.at(i, j) * (chi.at(i, j + 1) - chi.at(i, j)) / g.dy();
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    return worst;
}

StencilSystem assemble_stencil_system(const ProblemCase& c, const Grid& grid) {
    const LevelSetData ls = build_levelset(c.phi_fn, grid);
    const ArmFractions arms = arm_fractions(ls.phi);
    const CoefficientSamples coeff = sample_beta(c, grid);

    const GridFunction ah = restrict_to_grid(c.a_fn, grid);
    const GridFunction bh = restrict_to_grid(c.b_fn, grid);
    const GridFunction gh = restrict_to_grid(c.g_fn, grid);
    const GridFunction fh = restrict_to_grid([&](double x, double y) { return c.f(x, y); }, grid);
    const auto [a1, a2] = ghost_values(ah, arms);

    StencilSystem sys(grid);
    sys.boundary = gh;
    FivePointOperator& A = sys.op;
    const int ni = grid.ni(), nj = grid.nj();
    const double ix2 = 1.0 / (grid.dx() * grid.dx());
    const double iy2 = 1.0 / (grid.dy() * grid.dy());
    const double idx = 1.0 / grid.dx();
    const double idy = 1.0 / grid.dy();

    for (int j = 1; j <= nj; ++j) {
        for (int i = 1; i <= ni; ++i) {
            const std::size_t k = A.index(i, j);
            const double bw = coeff.beta1.at(i - 1, j), be = coeff.beta1.at(i, j);
            const double bs = coeff.beta2.at(i, j - 1), bn = coeff.beta2.at(i, j);

            A.diag(i, j) = (bw + be) * ix2 + (bs + bn) * iy2;
            if (i > 1) A.west(i, j) = -bw * ix2; else sys.lift[k] += bw * gh.at(0, j) * ix2;
            if (i < ni) A.east(i, j) = -be * ix2; else sys.lift[k] += be * gh.at(ni + 1, j) * ix2;
            if (j > 1) A.south(i, j) = -bs * iy2; else sys.lift[k] += bs * gh.at(i, 0) * iy2;
            if (j < nj) A.north(i, j) = -bn * iy2; else sys.lift[k] += bn * gh.at(i, nj + 1) * iy2;

            // Jump corrections, entering the rhs of -L u = -f - corrections.
            // grad_x(beta1 a1 grad_x chi) uses the raw 0/1 nodal chi;
            // grad_x chi1 differences the fractional arm field. The two chi
            // objects are distinct and must not be conflated.
            const double corr_x =
                (be * a1.at(i, j) * (ls.chi.at(i + 1, j) - ls.chi.at(i, j)) -
                 bw * a1.at(i - 1, j) * (ls.chi.at(i, j) - ls.chi.at(i - 1, j))) * ix2;
            const double corr_y =
                (bn * a2.at(i, j) * (ls.chi.at(i, j + 1) - ls.chi.at(i, j)) -
                 bs * a2.at(i, j - 1) * (ls.chi.at(i, j) - ls.chi.at(i, j - 1))) * iy2;
            const double corr_b =
                bh.at(i, j) * (ls.n1.at(i, j) * (arms.chi1.at(i, j) - arms.chi1.at(i - 1, j)) * idx +
                               ls.n2.at(i, j) * (arms.chi2.at(i, j) - arms.chi2.at(i, j - 1)) * idy);

            sys.rhs[k] = -fh.at(i, j) + corr_x + corr_y + corr_b + sys.lift[k];
        }
    }
    return sys;
}

GridFunction reconstruct_u(const GridFunction& v, const GridFunction& g,
                           const GridFunction& a, const GridFunction& chi) {
    const Grid& grid = v.grid();
    GridFunction u(grid);
    for (int j = 0; j <= grid.nj() + 1; ++j)
        for (int i = 0; i <= grid.ni() + 1; ++i)
            u.at(i, j) = v.at(i, j) + g.at(i, j) - a.at(i, j) * chi.at(i, j);
    return u;
}

}  // namespace gfm
