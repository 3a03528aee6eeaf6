#pragma once

#include "gfm/grid.hpp"
#include "gfm/interface_geometry.hpp"
#include "gfm/problem_case.hpp"

namespace gfm {

/// Two-way point samples of the coefficient: beta1 at x-arm midpoints
/// (x_{i+1/2}, y_j), beta2 at y-arm midpoints (x_i, y_{j+1/2}). On the
/// interface beta takes its Omega^- limit.
struct CoefficientSamples {
    HalfGridField beta1;
    HalfGridField beta2;
    double m = 1.0, M = 1.0;

    explicit CoefficientSamples(const Grid& g)
        : beta1(g, Axis::X), beta2(g, Axis::Y) {}
};

/// Symmetric 5-point operator over interior nodes. Off-diagonal arrays are
/// 0 where the neighbour is a boundary node; entries are mirrored by
/// construction (east(i,j) == west(i+1,j), north(i,j) == south(i,j+1)).
class FivePointOperator {
public:
    explicit FivePointOperator(const Grid& grid)
        : grid_(grid),
          n_(static_cast<std::size_t>(grid.ni()) * grid.nj()),
          diag_(n_, 0.0), west_(n_, 0.0), east_(n_, 0.0),
          south_(n_, 0.0), north_(n_, 0.0) {}

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return n_; }

    std::size_t index(int i, int j) const {
        assert(grid_.is_interior(i, j));
        return static_cast<std::size_t>(j - 1) * grid_.ni() + (i - 1);
    }

    double& diag(int i, int j) { return diag_[index(i, j)]; }
    double& west(int i, int j) { return west_[index(i, j)]; }
    double& east(int i, int j) { return east_[index(i, j)]; }
    double& south(int i, int j) { return south_[index(i, j)]; }
    double& north(int i, int j) { return north_[index(i, j)]; }
    double diag(int i, int j) const { return diag_[index(i, j)]; }
    double west(int i, int j) const { return west_[index(i, j)]; }
    double east(int i, int j) const { return east_[index(i, j)]; }
    double south(int i, int j) const { return south_[index(i, j)]; }
    double north(int i, int j) const { return north_[index(i, j)]; }

    /// y = A x over interior-node vectors.
    void apply(const std::vector<double>& x, std::vector<double>& y) const;

    /// Dense copy, row-major over interior indices (test oracle sizes only).
    std::vector<double> dense() const;

private:
    Grid grid_;
    std::size_t n_;
    std::vector<double> diag_, west_, east_, south_, north_;
};

/// Matrix form of the discrete weak problem: A v = rhs with
/// A[(k,l),(i,j)] = B^h[e_ij, e_kl] (entries carry the dx dy weighting)
/// and rhs = -F^h(e_kl). The solution v has a zero boundary ring.
struct SparseSpdSystem {
    FivePointOperator op;
    std::vector<double> rhs;

    explicit SparseSpdSystem(const Grid& g) : op(g), rhs(op.size(), 0.0) {}
};

/// Point-sample beta on both half grids, selecting the side by the sign of
/// phi at the sample point. Throws CaseConsistencyError if a sample leaves
/// [m, M].
CoefficientSamples sample_beta(const ProblemCase& c, const Grid& grid);

/// B^h[v, psi]: psi must vanish on the boundary ring; v may carry data.
double bilinear(const GridFunction& v, const GridFunction& psi,
                const CoefficientSamples& coeff);

/// ||psi||_h = sqrt(B^h[psi, psi]).
double discrete_norm(const GridFunction& psi, const CoefficientSamples& coeff);

/// F^h_1 = sum f psi dx dy over interior nodes.
double functional_f1(const GridFunction& f, const GridFunction& psi);

/// F^h_2 = B^h[g, psi]; g carries its true boundary values.
double functional_f2(const GridFunction& g, const GridFunction& psi,
                     const CoefficientSamples& coeff);

/// F^h_3 = -sum beta (grad a)(grad psi) chi^alpha dx dy over both arm sets.
double functional_f3(const GridFunction& a, const GridFunction& psi,
                     const CoefficientSamples& coeff, const ArmFractions& arms);

/// F^h_4 = sum grad(b n psi) chi^alpha dx dy; the nodal product b n psi is
/// zero on the boundary ring (psi vanishes there and normals are unused).
double functional_f4(const GridFunction& b, const LevelSetData& ls,
                     const GridFunction& psi, const ArmFractions& arms);

/// Assemble the weak system arm by arm (never by basis-vector probing).
SparseSpdSystem assemble_weak_system(const ProblemCase& c, const Grid& grid);

}  // namespace gfm
