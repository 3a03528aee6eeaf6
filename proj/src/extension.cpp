#include "gfm/extension.hpp"

#include <algorithm>
#include <cmath>

namespace gfm {

std::array<std::array<double, 2>, 3> Triangulation::vertices(int t) const {
    const int i = cell_i(t), j = cell_j(t);
    const double x0 = grid_.x(i), x1 = grid_.x(i + 1);
    const double y0 = grid_.y(j), y1 = grid_.y(j + 1);
    if (is_upper(t)) return {{{x1, y1}, {x0, y1}, {x1, y0}}};
    return {{{x0, y0}, {x1, y0}, {x0, y1}}};
}

PiecewiseLinearField::PiecewiseLinearField(const Triangulation& tri, const GridFunction& w)
    : tri_(tri), nodal_(w),
      gx_(static_cast<std::size_t>(tri.num_triangles()), 0.0),
      gy_(static_cast<std::size_t>(tri.num_triangles()), 0.0) {
    if (tri.grid() != w.grid())
        throw std::invalid_argument("extend_T: grid mismatch");
    const Grid& g = tri.grid();
    const double ix = 1.0 / g.dx(), iy = 1.0 / g.dy();
    for (int j = 0; j < tri.cells_y(); ++j) {
        for (int i = 0; i < tri.cells_x(); ++i) {
            const int lo = tri.triangle_id(i, j, false);
            const int up = tri.triangle_id(i, j, true);
            gx_[lo] = (w.at(i + 1, j) - w.at(i, j)) * ix;
            gy_[lo] = (w.at(i, j + 1) - w.at(i, j)) * iy;
            gx_[up] = (w.at(i + 1, j + 1) - w.at(i, j + 1)) * ix;
            gy_[up] = (w.at(i + 1, j + 1) - w.at(i + 1, j)) * iy;
        }
    }
}

double PiecewiseLinearField::eval(int t, double x, double y) const {
    const int i = tri_.cell_i(t), j = tri_.cell_j(t);
    const Grid& g = tri_.grid();
    if (tri_.is_upper(t))
        return nodal_.at(i + 1, j + 1) + gx_[t] * (x - g.x(i + 1)) + gy_[t] * (y - g.y(j + 1));
    return nodal_.at(i, j) + gx_[t] * (x - g.x(i)) + gy_[t] * (y - g.y(j));
}

int PiecewiseLinearField::locate(double x, double y) const {
    const Grid& g = tri_.grid();
    int i = static_cast<int>(std::floor((x - g.x_west()) / g.dx()));
    int j = static_cast<int>(std::floor((y - g.y_south()) / g.dy()));
    i = std::clamp(i, 0, tri_.cells_x() - 1);
    j = std::clamp(j, 0, tri_.cells_y() - 1);
    const double xi = (x - g.x(i)) / g.dx();
    const double eta = (y - g.y(j)) / g.dy();
    return tri_.triangle_id(i, j, xi + eta > 1.0);
}

PiecewiseLinearField extend_T(const Triangulation& tri, const GridFunction& w) {
    return PiecewiseLinearField(tri, w);
}

PiecewiseConstantField extend_S(const Triangulation& tri, const HalfGridField& field) {
    if (tri.grid() != field.grid())
        throw std::invalid_argument("extend_S: grid mismatch");
    PiecewiseConstantField out(tri, field.axis());
    // Every triangle has exactly one horizontal and one vertical edge; the
    // arm value on that edge is the triangle's value.
    for (int j = 0; j < tri.cells_y(); ++j) {
        for (int i = 0; i < tri.cells_x(); ++i) {
            const int lo = tri.triangle_id(i, j, false);
            const int up = tri.triangle_id(i, j, true);
            if (field.axis() == Axis::X) {
                out.at(lo) = field.at(i, j);      // bottom edge (i+1/2, j)
                out.at(up) = field.at(i, j + 1);  // top edge (i+1/2, j+1)
            } else {
                out.at(lo) = field.at(i, j);      // left edge (i, j+1/2)
                out.at(up) = field.at(i + 1, j);  // right edge (i+1, j+1/2)
            }
        }
    }
    return out;
}

namespace {

void require_zero_trace(const GridFunction& psi, const char* what) {
    if (!psi.vanishes_on_boundary())
        throw std::invalid_argument(std::string(what) + ": test function has nonzero boundary values");
}

}  // namespace

double integral_bilinear(const GridFunction& v, const GridFunction& psi,
                         const HalfGridField& beta_x, const HalfGridField& beta_y) {
    require_zero_trace(psi, "integral_bilinear");
    const Triangulation tri(v.grid());
    const PiecewiseLinearField tv = extend_T(tri, v);
    const PiecewiseLinearField tp = extend_T(tri, psi);
    const PiecewiseConstantField s1 = extend_S(tri, beta_x);
    const PiecewiseConstantField s2 = extend_S(tri, beta_y);
    const double area = tri.triangle_area();
    double acc = 0.0;
    for (int t = 0; t < tri.num_triangles(); ++t)
        acc += (s1.at(t) * tv.grad_x(t) * tp.grad_x(t) +
                s2.at(t) * tv.grad_y(t) * tp.grad_y(t)) * area;
    return acc;
}

double integral_f3_form(const GridFunction& a, const GridFunction& psi,
                        const CoefficientSamples& coeff, const ArmFractions& arms) {
    require_zero_trace(psi, "integral_f3_form");
    const Triangulation tri(a.grid());
    const PiecewiseLinearField ta = extend_T(tri, a);
    const PiecewiseLinearField tp = extend_T(tri, psi);
    const PiecewiseConstantField s1 = extend_S(tri, coeff.beta1);
    const PiecewiseConstantField s2 = extend_S(tri, coeff.beta2);
    const PiecewiseConstantField c1 = extend_S(tri, arms.chi1);
    const PiecewiseConstantField c2 = extend_S(tri, arms.chi2);
    const double area = tri.triangle_area();
    double acc = 0.0;
    for (int t = 0; t < tri.num_triangles(); ++t)
        acc -= (s1.at(t) * c1.at(t) * ta.grad_x(t) * tp.grad_x(t) +
                s2.at(t) * c2.at(t) * ta.grad_y(t) * tp.grad_y(t)) * area;
    return acc;
}

double integral_f4_form(const GridFunction& b, const LevelSetData& ls,
                        const GridFunction& psi, const ArmFractions& arms) {
    require_zero_trace(psi, "integral_f4_form");
    const Grid& g = b.grid();
    GridFunction p1(g), p2(g);
    for (int j = 1; j <= g.nj(); ++j) {
        for (int i = 1; i <= g.ni(); ++i) {
            p1.at(i, j) = b.at(i, j) * ls.n1.at(i, j) * psi.at(i, j);
            p2.at(i, j) = b.at(i, j) * ls.n2.at(i, j) * psi.at(i, j);
        }
    }
    const Triangulation tri(g);
    const PiecewiseLinearField t1 = extend_T(tri, p1);
    const PiecewiseLinearField t2 = extend_T(tri, p2);
    const PiecewiseConstantField c1 = extend_S(tri, arms.chi1);
    const PiecewiseConstantField c2 = extend_S(tri, arms.chi2);
    const double area = tri.triangle_area();
    double acc = 0.0;
    for (int t = 0; t < tri.num_triangles(); ++t)
        acc += (c1.at(t) * t1.grad_x(t) + c2.at(t) * t2.grad_y(t)) * area;
    return acc;
}

double quad_B(const PiecewiseLinearField& u, const PiecewiseLinearField& psi,
              const ScalarFn& beta) {
    const Triangulation& tri = u.triangulation();
    const double third = tri.triangle_area() / 3.0;
    double acc = 0.0;
    for (int t = 0; t < tri.num_triangles(); ++t) {
        const auto v = tri.vertices(t);
        const double bsum = beta(0.5 * (v[0][0] + v[1][0]), 0.5 * (v[0][1] + v[1][1])) +
                            beta(0.5 * (v[1][0] + v[2][0]), 0.5 * (v[1][1] + v[2][1])) +
                            beta(0.5 * (v[2][0] + v[0][0]), 0.5 * (v[2][1] + v[0][1]));
        acc += (u.grad_x(t) * psi.grad_x(t) + u.grad_y(t) * psi.grad_y(t)) * bsum * third;
    }
    return acc;
}

namespace {

struct FdGradient {
    const ScalarFn& fn;
    double step;
    std::array<double, 2> operator()(double x, double y) const {
        return {(fn(x + step, y) - fn(x - step, y)) / (2.0 * step),
                (fn(x, y + step) - fn(x, y - step)) / (2.0 * step)};
    }
};

// Fraction of a subtriangle lying in {phi <= 0}, treating phi as linear on
// it. Exact for planar interfaces, O(diam^3) otherwise.
double inside_fraction(double p0, double p1, double p2) {
    const bool in0 = p0 <= 0.0, in1 = p1 <= 0.0, in2 = p2 <= 0.0;
    const int n_in = int(in0) + int(in1) + int(in2);
    if (n_in == 0) return 0.0;
    if (n_in == 3) return 1.0;
    // Identify the minority vertex.
    const bool minority_in = (n_in == 1);
    double pv, pa, pb;
    if (in0 == minority_in) { pv = p0; pa = p1; pb = p2; }
    else if (in1 == minority_in) { pv = p1; pa = p0; pb = p2; }
    else { pv = p2; pa = p0; pb = p1; }
    const double t1 = pv / (pv - pa);
    const double t2 = pv / (pv - pb);
    const double corner = t1 * t2;
    return minority_in ? corner : 1.0 - corner;
}

}  // namespace

QuadFResult quad_F(const ProblemCase& c, const PiecewiseLinearField& psi,
                   int refinement) {
    if (!c.has_analytics())
        throw std::invalid_argument("quad_F: case has no analytic level set");
    const Triangulation& tri = psi.triangulation();
    const Grid& g = tri.grid();
    const double fd_step = 1e-5 * std::max(c.x_e - c.x_w, c.y_n - c.y_s);
    const FdGradient grad_a{c.a_fn, fd_step};
    const FdGradient grad_b{c.b_fn, fd_step};
    const FdGradient grad_g{c.g_fn, fd_step};
    const double near_band = 2.0 * std::max(g.dx(), g.dy());

    auto integrand = [&](int t, double x, double y, double inside) {
        const double psv = psi.eval(t, x, y);
        const double psx = psi.grad_x(t), psy = psi.grad_y(t);
        const bool minus = inside > 0.0;

        double val = 0.0;
        // F_1 and F_2 integrate over the whole domain (side-selected data);
        // for cut cells the two side contributions are weighted by area.
        const double fm = c.f_minus_fn(x, y), fp = c.f_plus_fn(x, y);
        val += inside * fm + (1.0 - inside) * fp;
        const auto gg = grad_g(x, y);
        const double dgp = gg[0] * psx + gg[1] * psy;
        val = val * psv + (inside * c.beta_minus_fn(x, y) + (1.0 - inside) * c.beta_plus_fn(x, y)) * dgp;

        if (minus) {
            const auto ga = grad_a(x, y);
            val -= inside * c.beta_minus_fn(x, y) * (ga[0] * psx + ga[1] * psy);

            const double bv = c.b_fn(x, y);
            const auto gb = grad_b(x, y);
            if (std::abs(bv) + std::abs(gb[0]) + std::abs(gb[1]) > 0.0) {
                if (!c.normal_fn || !c.div_normal_fn)
                    throw std::invalid_argument(
                        "quad_F: case needs an analytic normal extension for b != 0");
                const auto n = c.normal_fn(x, y);
                const double divn = c.div_normal_fn(x, y);
                val += inside * (psv * (gb[0] * n[0] + gb[1] * n[1]) +
                                 bv * (psx * n[0] + psy * n[1]) + bv * psv * divn);
            }
        }
        return val;
    };

    auto run = [&](int rf) {
        double acc = 0.0;
        for (int t = 0; t < tri.num_triangles(); ++t) {
            const auto v = tri.vertices(t);
            const double e1x = v[1][0] - v[0][0], e1y = v[1][1] - v[0][1];
            const double e2x = v[2][0] - v[0][0], e2y = v[2][1] - v[0][1];

            // Triangles near the interface band get the full refinement and a
            // linear interface reconstruction per subtriangle; away from the
            // band the side is uniform (phi is distance-like near its zero
            // set) and a few midpoint panels suffice.
            const double p0 = c.phi_fn(v[0][0], v[0][1]);
            const double p1 = c.phi_fn(v[1][0], v[1][1]);
            const double p2 = c.phi_fn(v[2][0], v[2][1]);
            const bool mixed = ((p0 <= 0.0) != (p1 <= 0.0)) || ((p0 <= 0.0) != (p2 <= 0.0));
            const bool near = mixed ||
                (std::min({std::abs(p0), std::abs(p1), std::abs(p2)}) < near_band);
            const int r = near ? rf : std::min(rf, 8);
            const double sub_area = tri.triangle_area() / (r * r);

            if (!near) {
                const double inside = p0 <= 0.0 ? 1.0 : 0.0;
                for (int p = 0; p < r; ++p) {
                    for (int q = 0; q < r - p; ++q) {
                        double bc1 = (p + 1.0 / 3.0) / r, bc2 = (q + 1.0 / 3.0) / r;
                        acc += sub_area * integrand(t, v[0][0] + e1x * bc1 + e2x * bc2,
                                                    v[0][1] + e1y * bc1 + e2y * bc2, inside);
                        if (p + q < r - 1) {
                            bc1 = (p + 2.0 / 3.0) / r;
                            bc2 = (q + 2.0 / 3.0) / r;
                            acc += sub_area * integrand(t, v[0][0] + e1x * bc1 + e2x * bc2,
                                                        v[0][1] + e1y * bc1 + e2y * bc2, inside);
                        }
                    }
                }
                continue;
            }

            auto corner_phi = [&](int p, int q) {
                const double x = v[0][0] + (e1x * p + e2x * q) / r;
                const double y = v[0][1] + (e1y * p + e2y * q) / r;
                return c.phi_fn(x, y);
            };
            auto add_sub = [&](double bc1, double bc2, double pa, double pb, double pc) {
                const double x = v[0][0] + e1x * bc1 + e2x * bc2;
                const double y = v[0][1] + e1y * bc1 + e2y * bc2;
                acc += sub_area * integrand(t, x, y, inside_fraction(pa, pb, pc));
            };
            for (int p = 0; p < r; ++p) {
                for (int q = 0; q < r - p; ++q) {
                    add_sub((p + 1.0 / 3.0) / r, (q + 1.0 / 3.0) / r,
                            corner_phi(p, q), corner_phi(p + 1, q), corner_phi(p, q + 1));
                    if (p + q < r - 1)
                        add_sub((p + 2.0 / 3.0) / r, (q + 2.0 / 3.0) / r,
                                corner_phi(p + 1, q), corner_phi(p, q + 1), corner_phi(p + 1, q + 1));
                }
            }
        }
        return acc;
    };

    QuadFResult res;
    res.value = run(std::max(refinement, 2));
    res.richardson_error = std::abs(res.value - run(std::max(refinement / 2, 1)));
    return res;
}

ExtensionBoundsResult check_extension_bounds(const GridFunction& psi,
                                             const CoefficientSamples& coeff,
                                             const ProblemCase& c, double slack) {
    const double nh2 = bilinear(psi, psi, coeff);
    const Triangulation tri(psi.grid());
    const PiecewiseLinearField tp = extend_T(tri, psi);
    const double qb = quad_B(tp, tp, [&](double x, double y) { return c.beta(x, y); });

    ExtensionBoundsResult res;
    res.ratio = nh2 > 0.0 ? qb / nh2 : 1.0;
    const double lo = coeff.m / coeff.M, hi = coeff.M / coeff.m;
    res.lower_ok = lo * nh2 <= qb * (1.0 + slack) + slack;
    res.upper_ok = qb <= hi * nh2 * (1.0 + slack) + slack;
    return res;
}

std::vector<double> check_strong_approximation(const Grid& coarsest,
                                               const ScalarField& psi,
                                               int levels, int quad_refine) {
    if (levels < 1) throw std::invalid_argument("check_strong_approximation: levels must be >= 1");
    std::vector<double> errs;
    errs.reserve(levels);
    for (int lvl = 0; lvl < levels; ++lvl) {
        const Grid g = coarsest.refined(1 << lvl);
        const Triangulation tri(g);
        const PiecewiseLinearField tp = extend_T(tri, restrict_to_grid(psi.f, g));
        const int r = quad_refine;
        double acc = 0.0;
        for (int t = 0; t < tri.num_triangles(); ++t) {
            const auto v = tri.vertices(t);
            const double e1x = v[1][0] - v[0][0], e1y = v[1][1] - v[0][1];
            const double e2x = v[2][0] - v[0][0], e2y = v[2][1] - v[0][1];
            const double sub_area = tri.triangle_area() / (r * r);
            auto add = [&](double bc1, double bc2) {
                const double x = v[0][0] + e1x * bc1 + e2x * bc2;
                const double y = v[0][1] + e1y * bc1 + e2y * bc2;
                const double ex = tp.grad_x(t) - psi.fx(x, y);
                const double ey = tp.grad_y(t) - psi.fy(x, y);
                acc += sub_area * (ex * ex + ey * ey);
            };
            for (int p = 0; p < r; ++p) {
                for (int q = 0; q < r - p; ++q) {
                    add((p + 1.0 / 3.0) / r, (q + 1.0 / 3.0) / r);
                    if (p + q < r - 1) add((p + 2.0 / 3.0) / r, (q + 2.0 / 3.0) / r);
                }
            }
        }
        errs.push_back(std::sqrt(acc));
    }
    return errs;
}

WeakConsistencyResult check_weak_consistency(const ProblemCase& c,
                                             const ScalarFn& v_fn,
                                             const ScalarFn& psi_fn,
                                             const Grid& coarsest, int levels,
                                             int quad_refine) {
    if (levels < 1) throw std::invalid_argument("check_weak_consistency: levels must be >= 1");
    WeakConsistencyResult res;
    for (int lvl = 0; lvl < levels; ++lvl) {
        const Grid g = coarsest.refined(1 << lvl);
        GridFunction vh = restrict_to_grid(v_fn, g);
        GridFunction psih = restrict_to_grid(psi_fn, g);
        // psi_fn vanishes on the boundary analytically; clear the roundoff.
        psih.zero_boundary();

        const CoefficientSamples coeff = sample_beta(c, g);
        const LevelSetData ls = build_levelset(c.phi_fn, g);
        const ArmFractions arms = arm_fractions(ls.phi);
        const GridFunction ah = restrict_to_grid(c.a_fn, g);
        const GridFunction bh = restrict_to_grid(c.b_fn, g);
        const GridFunction gh = restrict_to_grid(c.g_fn, g);
        const GridFunction fh = restrict_to_grid([&](double x, double y) { return c.f(x, y); }, g);

        const Triangulation tri(g);
        const PiecewiseLinearField tv = extend_T(tri, vh);
        const PiecewiseLinearField tp = extend_T(tri, psih);

        const double bh_disc = bilinear(vh, psih, coeff);
        const double bh_cont = quad_B(tv, tp, [&](double x, double y) { return c.beta(x, y); });
        res.dev_bilinear.push_back(std::abs(bh_disc - bh_cont));

        const double fh_disc = functional_f1(fh, psih) + functional_f2(gh, psih, coeff) +
                               functional_f3(ah, psih, coeff, arms) +
                               functional_f4(bh, ls, psih, arms);
        const double fh_cont = quad_F(c, tp, quad_refine).value;
        res.dev_functional.push_back(std::abs(fh_disc - fh_cont));
    }
    return res;
}

}  // namespace gfm
