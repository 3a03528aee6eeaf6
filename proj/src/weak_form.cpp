#include "gfm/weak_form.hpp"

#include <string>

namespace gfm {

void FivePointOperator::apply(const std::vector<double>& x, std::vector<double>& y) const {
    assert(x.size() == n_);
    y.resize(n_);
    const int ni = grid_.ni(), nj = grid_.nj();
    for (int j = 1; j <= nj; ++j) {
        for (int i = 1; i <= ni; ++i) {
            const std::size_t k = index(i, j);
            double s = diag_[k] * x[k];
            if (i > 1) s += west_[k] * x[k - 1];
            if (i < ni) s += east_[k] * x[k + 1];
            if (j > 1) s += south_[k] * x[k - ni];
            if (j < nj) s += north_[k] * x[k + ni];
            y[k] = s;
        }
    }
}

std::vector<double> FivePointOperator::dense() const {
    std::vector<double> a(n_ * n_, 0.0);
    const int ni = grid_.ni(), nj = grid_.nj();
    for (int j = 1; j <= nj; ++j) {
        for (int i = 1; i <= ni; ++i) {
            const std::size_t k = index(i, j);
            a[k * n_ + k] = diag_[k];
            if (i > 1) a[k * n_ + (k - 1)] = west_[k];
            if (i < ni) a[k * n_ + (k + 1)] = east_[k];
            if (j > 1) a[k * n_ + (k - ni)] = south_[k];
            if (j < nj) a[k * n_ + (k + ni)] = north_[k];
        }
    }
    return a;
}

CoefficientSamples sample_beta(const ProblemCase& c, const Grid& grid) {
    CoefficientSamples coeff(grid);
    coeff.m = c.m;
    coeff.M = c.M;

    auto sample = [&](double x, double y) {
        const double s = c.in_minus(x, y) ? c.beta_minus_fn(x, y) : c.beta_plus_fn(x, y);
        if (!(s >= c.m) || !(s <= c.M))
            throw CaseConsistencyError(c.name + ": beta sample " + std::to_string(s) +
                                       " outside [m, M]");
        return s;
    };

    for (int j = 0; j <= grid.nj() + 1; ++j)
        for (int i = 0; i <= grid.ni(); ++i)
            coeff.beta1.at(i, j) = sample(grid.x_half(i), grid.y(j));
    for (int j = 0; j <= grid.nj(); ++j)
        for (int i = 0; i <= grid.ni() + 1; ++i)
            coeff.beta2.at(i, j) = sample(grid.x(i), grid.y_half(j));
    return coeff;
}

namespace {

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
    if (a != b) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

void require_zero_trace(const GridFunction& psi, const char* what) {
    if (!psi.vanishes_on_boundary())
        throw std::invalid_argument(std::string(what) + ": test function has nonzero boundary values");
}

}  // namespace

double bilinear(const GridFunction& v, const GridFunction& psi,
                const CoefficientSamples& coeff) {
    const Grid& g = v.grid();
    require_same_grid(g, psi.grid(), "bilinear");
    require_same_grid(g, coeff.beta1.grid(), "bilinear");
    require_zero_trace(psi, "bilinear");

    const int ni = g.ni(), nj = g.nj();
    const double ax = g.cell_area() / (g.dx() * g.dx());
    const double ay = g.cell_area() / (g.dy() * g.dy());
    double s = 0.0;
    for (int j = 1; j <= nj; ++j)
        for (int i = 0; i <= ni; ++i)
            s += coeff.beta1.at(i, j) * (v.at(i + 1, j) - v.at(i, j)) *
                 (psi.at(i + 1, j) - psi.at(i, j)) * ax;
    for (int i = 1; i <= ni; ++i)
        for (int j = 0; j <= nj; ++j)
            s += coeff.beta2.at(i, j) * (v.at(i, j + 1) - v.at(i, j)) *
                 (psi.at(i, j + 1) - psi.at(i, j)) * ay;
    return s;
}

double discrete_norm(const GridFunction& psi, const CoefficientSamples& coeff) {
    return std::sqrt(bilinear(psi, psi, coeff));
}

double functional_f1(const GridFunction& f, const GridFunction& psi) {
    const Grid& g = f.grid();
    require_same_grid(g, psi.grid(), "functional_f1");
    double s = 0.0;
    for (int j = 1; j <= g.nj(); ++j)
        for (int i = 1; i <= g.ni(); ++i)
            s += f.at(i, j) * psi.at(i, j);
    return s * g.cell_area();
}

double functional_f2(const GridFunction& g, const GridFunction& psi,
                     const CoefficientSamples& coeff) {
    return bilinear(g, psi, coeff);
}

double functional_f3(const GridFunction& a, const GridFunction& psi,
                     const CoefficientSamples& coeff, const ArmFractions& arms) {
    const Grid& g = a.grid();
    require_same_grid(g, psi.grid(), "functional_f3");
    require_zero_trace(psi, "functional_f3");

    const int ni = g.ni(), nj = g.nj();
    const double ax = g.cell_area() / (g.dx() * g.dx());
    const double ay = g.cell_area() / (g.dy() * g.dy());
    double s = 0.0;
    for (int j = 1; j <= nj; ++j)
        for (int i = 0; i <= ni; ++i)
            s -= coeff.beta1.at(i, j) * arms.chi1.at(i, j) *
                 (a.at(i + 1, j) - a.at(i, j)) * (psi.at(i + 1, j) - psi.at(i, j)) * ax;
    for (int i = 1; i <= ni; ++i)
        for (int j = 0; j <= nj; ++j)
            s -= coeff.beta2.at(i, j) * arms.chi2.at(i, j) *
                 (a.at(i, j + 1) - a.at(i, j)) * (psi.at(i, j + 1) - psi.at(i, j)) * ay;
    return s;
}

double functional_f4(const GridFunction& b, const LevelSetData& ls,
                     const GridFunction& psi, const ArmFractions& arms) {
    const Grid& g = b.grid();
    require_same_grid(g, psi.grid(), "functional_f4");
    require_zero_trace(psi, "functional_f4");

    // Nodal products b n psi; zero on the ring where psi vanishes.
    GridFunction p1(g), p2(g);
    for (int j = 1; j <= g.nj(); ++j) {
        for (int i = 1; i <= g.ni(); ++i) {
            p1.at(i, j) = b.at(i, j) * ls.n1.at(i, j) * psi.at(i, j);
            p2.at(i, j) = b.at(i, j) * ls.n2.at(i, j) * psi.at(i, j);
        }
    }

    const int ni = g.ni(), nj = g.nj();
    const double sx = g.cell_area() / g.dx();
    const double sy = g.cell_area() / g.dy();
    double s = 0.0;
    for (int j = 1; j <= nj; ++j)
        for (int i = 0; i <= ni; ++i)
            s += (p1.at(i + 1, j) - p1.at(i, j)) * arms.chi1.at(i, j) * sx;
    for (int i = 1; i <= ni; ++i)
        for (int j = 0; j <= nj; ++j)
            s += (p2.at(i, j + 1) - p2.at(i, j)) * arms.chi2.at(i, j) * sy;
    return s;
}

SparseSpdSystem assemble_weak_system(const ProblemCase& c, const Grid& grid) {
    const LevelSetData ls = build_levelset(c.phi_fn, grid);
    const ArmFractions arms = arm_fractions(ls.phi);
    const CoefficientSamples coeff = sample_beta(c, grid);

    const GridFunction ah = restrict_to_grid(c.a_fn, grid);
    const GridFunction bh = restrict_to_grid(c.b_fn, grid);
    const GridFunction gh = restrict_to_grid(c.g_fn, grid);
    const GridFunction fh = restrict_to_grid([&](double x, double y) { return c.f(x, y); }, grid);

    SparseSpdSystem sys(grid);
    FivePointOperator& A = sys.op;
    const int ni = grid.ni(), nj = grid.nj();
    const double axy = grid.cell_area();
    const double wx = axy / (grid.dx() * grid.dx());
    const double wy = axy / (grid.dy() * grid.dy());
    const double sx = axy / grid.dx();
    const double sy = axy / grid.dy();

    auto add_rhs = [&](int i, int j, double val) {
        if (grid.is_interior(i, j)) sys.rhs[A.index(i, j)] += val;
    };

    // Matrix and rhs in one arm-by-arm sweep. Each arm adds +/- beta dx dy / d^2
    // to the four entries it touches; the functional pieces F2..F4 are
    // distributed over the same arms, F1 over nodes, and rhs = -F.
    for (int j = 1; j <= nj; ++j) {
        for (int i = 0; i <= ni; ++i) {
            const double w = coeff.beta1.at(i, j) * wx;
            if (i >= 1) A.diag(i, j) += w;
            if (i + 1 <= ni) A.diag(i + 1, j) += w;
            if (i >= 1 && i + 1 <= ni) {
                A.east(i, j) = -w;
                A.west(i + 1, j) = -w;
            }

            const double chi = arms.chi1.at(i, j);
            const double t = w * (gh.at(i + 1, j) - gh.at(i, j))        // F2 piece
                             - w * chi * (ah.at(i + 1, j) - ah.at(i, j));  // F3 piece
            add_rhs(i + 1, j, -t);
            add_rhs(i, j, t);

            const double q = chi * sx;  // F4 piece, nodal product b n1 psi
            if (grid.is_interior(i + 1, j))
                add_rhs(i + 1, j, -q * bh.at(i + 1, j) * ls.n1.at(i + 1, j));
            if (grid.is_interior(i, j))
                add_rhs(i, j, q * bh.at(i, j) * ls.n1.at(i, j));
        }
    }
    for (int i = 1; i <= ni; ++i) {
        for (int j = 0; j <= nj; ++j) {
            const double w = coeff.beta2.at(i, j) * wy;
            if (j >= 1) A.diag(i, j) += w;
            if (j + 1 <= nj) A.diag(i, j + 1) += w;
            if (j >= 1 && j + 1 <= nj) {
                A.north(i, j) = -w;
                A.south(i, j + 1) = -w;
            }

            const double chi = arms.chi2.at(i, j);
            const double t = w * (gh.at(i, j + 1) - gh.at(i, j))
                             - w * chi * (ah.at(i, j + 1) - ah.at(i, j));
            add_rhs(i, j + 1, -t);
            add_rhs(i, j, t);

            const double q = chi * sy;
            if (grid.is_interior(i, j + 1))
                add_rhs(i, j + 1, -q * bh.at(i, j + 1) * ls.n2.at(i, j + 1));
            if (grid.is_interior(i, j))
                add_rhs(i, j, q * bh.at(i, j) * ls.n2.at(i, j));
        }
    }
    for (int j = 1; j <= nj; ++j)
        for (int i = 1; i <= ni; ++i)
            sys.rhs[A.index(i, j)] -= fh.at(i, j) * axy;  // F1 piece

    return sys;
}

}  // namespace gfm
