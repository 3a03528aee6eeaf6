#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace gfm {

/// Uniform rectangular grid on (x_w,x_e) x (y_s,y_n) with I x J interior
/// nodes. Node (i,j) = (x_w + i*dx, y_s + j*dy) for i in [0,I+1],
/// j in [0,J+1]; the outermost ring is the Dirichlet boundary.
class Grid {
public:
    Grid(double x_w, double x_e, double y_s, double y_n, int ni, int nj)
        : x_w_(x_w), x_e_(x_e), y_s_(y_s), y_n_(y_n), ni_(ni), nj_(nj) {
        if (!(x_w < x_e) || !(y_s < y_n))
            throw std::invalid_argument("Grid: degenerate rectangle");
        if (ni < 1 || nj < 1)
            throw std::invalid_argument("Grid: need at least one interior node per axis");
        dx_ = (x_e - x_w) / (ni + 1);
        dy_ = (y_n - y_s) / (nj + 1);
    }

    double x_west() const { return x_w_; }
    double x_east() const { return x_e_; }
    double y_south() const { return y_s_; }
    double y_north() const { return y_n_; }

    int ni() const { return ni_; }            // interior node count I
    int nj() const { return nj_; }            // interior node count J
    int npx() const { return ni_ + 2; }       // nodes per row, including boundary
    int npy() const { return nj_ + 2; }

    double dx() const { return dx_; }
    double dy() const { return dy_; }
    double h() const { return std::min(dx_, dy_); }
    double aspect() const { return dx_ / dy_; }
    double cell_area() const { return dx_ * dy_; }

    double x(int i) const { return x_w_ + i * dx_; }
    double y(int j) const { return y_s_ + j * dy_; }
    double x_half(int i) const { return x_w_ + (i + 0.5) * dx_; }  // x_{i+1/2}
    double y_half(int j) const { return y_s_ + (j + 0.5) * dy_; }  // y_{j+1/2}

    bool is_interior(int i, int j) const {
        return i >= 1 && i <= ni_ && j >= 1 && j <= nj_;
    }
    bool is_boundary(int i, int j) const {
        return i == 0 || i == ni_ + 1 || j == 0 || j == nj_ + 1;
    }

    /// Same rectangle, (I+1, J+1) scaled by `factor`; dx/dy is preserved.
    Grid refined(int factor = 2) const {
        return Grid(x_w_, x_e_, y_s_, y_n_, (ni_ + 1) * factor - 1, (nj_ + 1) * factor - 1);
    }

    bool operator==(const Grid& o) const {
        return x_w_ == o.x_w_ && x_e_ == o.x_e_ && y_s_ == o.y_s_ &&
               y_n_ == o.y_n_ && ni_ == o.ni_ && nj_ == o.nj_;
    }
    bool operator!=(const Grid& o) const { return !(*this == o); }

private:
    double x_w_, x_e_, y_s_, y_n_;
    int ni_, nj_;
    double dx_, dy_;
};

/// Nodal values over the full (I+2) x (J+2) lattice, boundary ring included.
/// Membership in the zero-trace space H^{1,h}_0 means the ring vanishes.
class GridFunction {
public:
    explicit GridFunction(const Grid& grid)
        : grid_(grid), v_(static_cast<std::size_t>(grid.npx()) * grid.npy(), 0.0) {}

    const Grid& grid() const { return grid_; }

    double& at(int i, int j) {
        assert(i >= 0 && i <= grid_.ni() + 1 && j >= 0 && j <= grid_.nj() + 1);
        return v_[static_cast<std::size_t>(j) * grid_.npx() + i];
    }
    double at(int i, int j) const {
        assert(i >= 0 && i <= grid_.ni() + 1 && j >= 0 && j <= grid_.nj() + 1);
        return v_[static_cast<std::size_t>(j) * grid_.npx() + i];
    }
    double& operator()(int i, int j) { return at(i, j); }
    double operator()(int i, int j) const { return at(i, j); }

    std::vector<double>& values() { return v_; }
    const std::vector<double>& values() const { return v_; }

    bool vanishes_on_boundary(double tol = 0.0) const {
        const int ni = grid_.ni(), nj = grid_.nj();
        for (int i = 0; i <= ni + 1; ++i)
            if (std::abs(at(i, 0)) > tol || std::abs(at(i, nj + 1)) > tol) return false;
        for (int j = 0; j <= nj + 1; ++j)
            if (std::abs(at(0, j)) > tol || std::abs(at(ni + 1, j)) > tol) return false;
        return true;
    }

    void zero_boundary() {
        const int ni = grid_.ni(), nj = grid_.nj();
        for (int i = 0; i <= ni + 1; ++i) at(i, 0) = at(i, nj + 1) = 0.0;
        for (int j = 0; j <= nj + 1; ++j) at(0, j) = at(ni + 1, j) = 0.0;
    }

private:
    Grid grid_;
    std::vector<double> v_;
};

enum class Axis { X, Y };

/// Values at arm midpoints: axis X lives at (i+1/2, j) for i in [0,I],
/// j in [0,J+1]; axis Y at (i, j+1/2) for i in [0,I+1], j in [0,J].
class HalfGridField {
public:
    HalfGridField(const Grid& grid, Axis axis)
        : grid_(grid), axis_(axis),
          v_(axis == Axis::X
                 ? static_cast<std::size_t>(grid.ni() + 1) * grid.npy()
                 : static_cast<std::size_t>(grid.npx()) * (grid.nj() + 1),
             0.0) {}

    const Grid& grid() const { return grid_; }
    Axis axis() const { return axis_; }

    // axis X: at(i,j) is the value at (i+1/2, j); axis Y: at (i, j+1/2).
    double& at(int i, int j) {
        return v_[index(i, j)];
    }
    double at(int i, int j) const {
        return v_[index(i, j)];
    }

    std::vector<double>& values() { return v_; }
    const std::vector<double>& values() const { return v_; }

private:
    std::size_t index(int i, int j) const {
        if (axis_ == Axis::X) {
            assert(i >= 0 && i <= grid_.ni() && j >= 0 && j <= grid_.nj() + 1);
            return static_cast<std::size_t>(j) * (grid_.ni() + 1) + i;
        }
        assert(i >= 0 && i <= grid_.ni() + 1 && j >= 0 && j <= grid_.nj());
        return static_cast<std::size_t>(j) * grid_.npx() + i;
    }

    Grid grid_;
    Axis axis_;
    std::vector<double> v_;
};

/// Restriction of an analytic function to the node lattice.
GridFunction restrict_to_grid(const std::function<double(double, double)>& fn,
                              const Grid& grid);

/// Forward difference along x: (w_{i+1,j} - w_{i,j})/dx at (i+1/2, j).
HalfGridField diff_x(const GridFunction& w);

/// Forward difference along y: (w_{i,j+1} - w_{i,j})/dy at (i, j+1/2).
HalfGridField diff_y(const GridFunction& w);

/// sqrt( sum_{interior} w^2 dx dy ).
double discrete_l2_norm(const GridFunction& w);

}  // namespace gfm
