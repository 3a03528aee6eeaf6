#include "gfm/grid.hpp"

namespace gfm {

GridFunction restrict_to_grid(const std::function<double(double, double)>& fn,
                              const Grid& grid) {
    GridFunction w(grid);
    for (int j = 0; j <= grid.nj() + 1; ++j)
        for (int i = 0; i <= grid.ni() + 1; ++i)
            w.at(i, j) = fn(grid.x(i), grid.y(j));
    return w;
}

HalfGridField diff_x(const GridFunction& w) {
    const Grid& g = w.grid();
    HalfGridField d(g, Axis::X);
    const double inv = 1.0 / g.dx();
    for (int j = 0; j <= g.nj() + 1; ++j)
        for (int i = 0; i <= g.ni(); ++i)
            d.at(i, j) = (w.at(i + 1, j) - w.at(i, j)) * inv;
    return d;
}

HalfGridField diff_y(const GridFunction& w) {
    const Grid& g = w.grid();
    HalfGridField d(g, Axis::Y);
    const double inv = 1.0 / g.dy();
    for (int j = 0; j <= g.nj(); ++j)
        for (int i = 0; i <= g.ni() + 1; ++i)
            d.at(i, j) = (w.at(i, j + 1) - w.at(i, j)) * inv;
    return d;
}

double discrete_l2_norm(const GridFunction& w) {
    const Grid& g = w.grid();
    double s = 0.0;
    for (int j = 1; j <= g.nj(); ++j)
        for (int i = 1; i <= g.ni(); ++i)
            s += w.at(i, j) * w.at(i, j);
    return std::sqrt(s * g.cell_area());
}

}  // namespace gfm
