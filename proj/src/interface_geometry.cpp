#include "gfm/interface_geometry.hpp"

namespace gfm {

namespace {
constexpr double kDegenerateGradient = 1e-12;
}

LevelSetData build_levelset_from_values(const GridFunction& phi) {
    const Grid& g = phi.grid();
    LevelSetData ls(g);
    ls.phi = phi;

    for (int j = 0; j <= g.nj() + 1; ++j)
        for (int i = 0; i <= g.ni() + 1; ++i)
            ls.chi.at(i, j) = (phi.at(i, j) <= 0.0) ? 1.0 : 0.0;

    // Central-difference normals at interior nodes. A vanishing discrete
    // gradient gives a zero normal and bumps the degeneracy counter; the
    // normal field is never read on the boundary ring.
    const double ix = 1.0 / (2.0 * g.dx());
    const double iy = 1.0 / (2.0 * g.dy());
    for (int j = 1; j <= g.nj(); ++j) {
        for (int i = 1; i <= g.ni(); ++i) {
            const double px = (phi.at(i + 1, j) - phi.at(i - 1, j)) * ix;
            const double py = (phi.at(i, j + 1) - phi.at(i, j - 1)) * iy;
            const double mag = std::sqrt(px * px + py * py);
            if (mag < kDegenerateGradient) {
                ls.n1.at(i, j) = 0.0;
                ls.n2.at(i, j) = 0.0;
                ++ls.degenerate_normals;
            } else {
                ls.n1.at(i, j) = px / mag;
                ls.n2.at(i, j) = py / mag;
            }
        }
    }
    return ls;
}

LevelSetData build_levelset(const std::function<double(double, double)>& phi_fn,
                            const Grid& grid) {
    return build_levelset_from_values(restrict_to_grid(phi_fn, grid));
}

ArmFractions arm_fractions(const GridFunction& phi) {
    const Grid& g = phi.grid();
    ArmFractions arms(g);

    auto chi_of = [](double p) { return p <= 0.0 ? 1.0 : 0.0; };
    // theta weights the far endpoint; with |phi_a|+|phi_b| = 0 both nodes sit
    // on the interface and theta falls back to 0.
    auto theta_of = [](double pa, double pb) {
        const double denom = std::abs(pa) + std::abs(pb);
        return denom > 0.0 ? std::abs(pb) / denom : 0.0;
    };

    for (int j = 0; j <= g.nj() + 1; ++j) {
        for (int i = 0; i <= g.ni(); ++i) {
            const double pa = phi.at(i, j), pb = phi.at(i + 1, j);
            const double th = theta_of(pa, pb);
            arms.theta_x.at(i, j) = th;
            arms.chi1.at(i, j) = chi_of(pa) * (1.0 - th) + chi_of(pb) * th;
        }
    }
    for (int j = 0; j <= g.nj(); ++j) {
        for (int i = 0; i <= g.ni() + 1; ++i) {
            const double pa = phi.at(i, j), pb = phi.at(i, j + 1);
            const double th = theta_of(pa, pb);
            arms.theta_y.at(i, j) = th;
            arms.chi2.at(i, j) = chi_of(pa) * (1.0 - th) + chi_of(pb) * th;
        }
    }
    return arms;
}

}  // namespace gfm
