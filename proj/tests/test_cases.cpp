#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gfm/cases.hpp"
#include "test_support.hpp"

using namespace gfm;
using namespace gfm::testing;

namespace {

std::array<double, 2> fd_grad(const ScalarFn& f, double x, double y, double h = 1e-6) {
    return {(f(x + h, y) - f(x - h, y)) / (2.0 * h),
            (f(x, y + h) - f(x, y - h)) / (2.0 * h)};
}

double fd_laplace(const ScalarFn& f, double x, double y, double h = 1e-4) {
    return (f(x + h, y) + f(x - h, y) + f(x, y + h) + f(x, y - h) - 4.0 * f(x, y)) / (h * h);
}

}  // namespace

TEST_CASE("builtin registry") {
    const auto names = builtin_case_names();
    REQUIRE(names.size() == 4);
    CHECK(names[0] == "smooth");
    CHECK(names[1] == "planar");
    CHECK(names[2] == "circle");
    CHECK(names[3] == "circle1000");
    CHECK(find_builtin_case("circle").has_value());
    CHECK_FALSE(find_builtin_case("nonsense").has_value());
}

TEST_CASE("smooth case: no jump machinery") {
    const ProblemCase c = *find_builtin_case("smooth");
    CHECK_FALSE(c.has_interface);
    const Grid g = c.make_grid(8, 8);
    const LevelSetData ls = build_levelset(c.phi_fn, g);
    const ArmFractions arms = arm_fractions(ls.phi);
    const CoefficientSamples coeff = sample_beta(c, g);
    const GridFunction psi = random_h10(g, 1);
    CHECK(functional_f3(restrict_to_grid(c.a_fn, g), psi, coeff, arms) == 0.0);
    CHECK(functional_f4(restrict_to_grid(c.b_fn, g), ls, psi, arms) == 0.0);
    // f = beta Lap u
    const double x = 0.31, y = 0.57;
    CHECK(std::abs(c.f(x, y) - fd_laplace(c.u_plus_fn, x, y)) <= 1e-5);
}

TEST_CASE("planar case: 1D matching conditions") {
    const ProblemCase c = *find_builtin_case("planar");
    const double s = 0.613;
    for (double y : {0.2, 0.5, 0.9}) {
        // continuous solution, prescribed flux jump
        CHECK(std::abs(c.u_plus_fn(s, y) - c.u_minus_fn(s, y)) <= 1e-13);
        const auto gp = c.grad_u_plus_fn(s, y);
        const auto gm = c.grad_u_minus_fn(s, y);
        const double flux_jump = c.beta_plus_fn(s, y) * gp[0] - c.beta_minus_fn(s, y) * gm[0];
        CHECK(flux_jump == doctest::Approx(c.b_fn(s, y)).epsilon(1e-12));
        CHECK(c.b_fn(s, y) == doctest::Approx(-2.0).epsilon(1e-12));
        CHECK(c.a_fn(s, y) == 0.0);
    }
    // branches solve beta u'' = f
    for (double x : {0.2, 0.8}) {
        const ScalarFn& u = x < s ? c.u_minus_fn : c.u_plus_fn;
        const double beta = x < s ? c.beta_minus_fn(x, 0.5) : c.beta_plus_fn(x, 0.5);
        CHECK(std::abs(beta * fd_laplace(u, x, 0.5) - c.f(x, 0.5)) <= 1e-4);
    }
    // gradient callables match the branches
    for (double x : {0.1, 0.4, 0.9}) {
        const auto g1 = c.grad_u_minus_fn(x, 0.3);
        const auto g2 = fd_grad(c.u_minus_fn, x, 0.3);
        CHECK(std::abs(g1[0] - g2[0]) <= 1e-6);
        CHECK(std::abs(g1[1] - g2[1]) <= 1e-6);
    }
}

TEST_CASE("circle case: manufactured data") {
    const ProblemCase c = *find_builtin_case("circle");
    // f = div(beta grad u) on each side
    CHECK(c.f(0.5, 0.5) == 40.0);
    CHECK(c.f(0.45, 0.55) == 40.0);  // every Omega^- point
    const double xo = 0.9, yo = 0.9;
    CHECK(std::abs(c.f(xo, yo) - fd_laplace(c.u_plus_fn, xo, yo)) <= 1e-5);

    // jumps match the exact branches on the interface
    for (double ang : {0.0, 0.7, 2.1, 4.4}) {
        const double x = 0.5 + 0.25 * std::cos(ang), y = 0.5 + 0.25 * std::sin(ang);
        CHECK(std::abs(c.a_fn(x, y) - (c.u_plus_fn(x, y) - c.u_minus_fn(x, y))) <= 1e-12);
        const auto gp = c.grad_u_plus_fn(x, y);
        const auto gm = c.grad_u_minus_fn(x, y);
        const auto n = c.normal_fn(x, y);
        const double flux = c.beta_plus_fn(x, y) * (gp[0] * n[0] + gp[1] * n[1]) -
                            c.beta_minus_fn(x, y) * (gm[0] * n[0] + gm[1] * n[1]);
        CHECK(std::abs(c.b_fn(x, y) - flux) <= 1e-12);
    }

    // gradient callables agree with finite differences of the branches
    const auto gm = c.grad_u_minus_fn(0.4, 0.6);
    const auto gm_fd = fd_grad(c.u_minus_fn, 0.4, 0.6);
    CHECK(std::abs(gm[0] - gm_fd[0]) <= 1e-6);
    const auto gp = c.grad_u_plus_fn(0.8, 0.2);
    const auto gp_fd = fd_grad(c.u_plus_fn, 0.8, 0.2);
    CHECK(std::abs(gp[1] - gp_fd[1]) <= 1e-6);

    // a and b vanish on the boundary ring
    for (double t : {0.0, 0.3, 0.7, 1.0}) {
        CHECK(c.a_fn(t, 0.0) == 0.0);
        CHECK(c.a_fn(1.0, t) == 0.0);
        CHECK(c.b_fn(t, 1.0) == 0.0);
    }
    // and b vanishes near the centre, where the normal field degenerates
    CHECK(c.b_fn(0.5, 0.5) == 0.0);
    CHECK(c.b_fn(0.52, 0.48) == 0.0);
}

TEST_CASE("case validation rejects inconsistent data") {
    ProblemCase c = *find_builtin_case("circle");
    c.b_fn = [](double, double) { return 0.0; };  // contradicts the branches
    CHECK_THROWS_AS(validate_case(c, 1.0 / 16.0), CaseConsistencyError);

    ProblemCase far = *find_builtin_case("circle");
    CHECK_THROWS_AS(validate_case(far, 0.2), CaseConsistencyError);  // 2 h0 > clearance
}

TEST_CASE("solve_case accuracy and path agreement") {
    const ProblemCase smooth = *find_builtin_case("smooth");
    auto [u, rep] = solve_case(smooth, smooth.make_grid(31, 31), SolvePath::Stencil);
    REQUIRE(rep.converged);
    const Grid g = u.grid();
    double emax = 0.0;
    for (int j = 1; j <= g.nj(); ++j)
        for (int i = 1; i <= g.ni(); ++i)
            emax = std::max(emax, std::abs(u.at(i, j) - smooth.u_exact(g.x(i), g.y(j))));
    CHECK(emax < 5e-3);

    CgOptions tight;
    tight.tol = 1e-12;
    for (const ProblemCase& c : builtin_cases()) {
        const Grid gc = c.make_grid(15, 15);
        auto [uw, rw] = solve_case(c, gc, SolvePath::Weak, tight);
        auto [us, rs] = solve_case(c, gc, SolvePath::Stencil, tight);
        REQUIRE(rw.converged);
        REQUIRE(rs.converged);
        double gap = 0.0, scale = 0.0;
        for (std::size_t k = 0; k < uw.values().size(); ++k) {
            gap = std::max(gap, std::abs(uw.values()[k] - us.values()[k]));
            scale = std::max(scale, std::abs(us.values()[k]));
        }
        CHECK(gap <= 1e-10 * scale);
    }
}

TEST_CASE("constant solutions are reproduced") {
    ProblemCase c = plain_case([](double, double) { return 1.0; }, 1.0, 1.0);
    c.g_fn = [](double, double) { return 2.5; };
    auto [u, rep] = solve_case(c, c.make_grid(9, 9), SolvePath::Stencil, {.tol = 1e-14});
    REQUIRE(rep.converged);
    for (double v : u.values()) CHECK(std::abs(v - 2.5) <= 1e-10);
}

TEST_CASE("convergence study: rates, trends, validation") {
    CHECK_THROWS_AS(convergence_study(*find_builtin_case("smooth"), 0, SolvePath::Stencil),
                    std::invalid_argument);

    const auto rows = convergence_study(*find_builtin_case("smooth"), 4, SolvePath::Stencil);
    REQUIRE(rows.size() == 4);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        CHECK_FALSE(rows[k].richardson);
        if (k > 0) {
            CHECK(rows[k].h == doctest::Approx(0.5 * rows[k - 1].h).epsilon(1e-14));
            const double ratio = rows[k - 1].err_l2 / rows[k].err_l2;
            CHECK(ratio >= 3.5);
            CHECK(ratio <= 4.5);
        }
    }

    // the arm-gradient error decreases under refinement for every case
    for (const char* name : {"smooth", "planar", "circle", "circle1000"}) {
        const auto r = convergence_study(*find_builtin_case(name), 3, SolvePath::Stencil);
        for (std::size_t k = 1; k < r.size(); ++k) {
            CHECK(r[k].err_l2 < r[k - 1].err_l2);
            CHECK(r[k].err_h1 < r[k - 1].err_h1);
        }
    }
}

TEST_CASE("Richardson fallback kicks in without exact branches") {
    ProblemCase c = *find_builtin_case("circle");
    c.u_minus_fn = c.u_plus_fn = nullptr;
    c.grad_u_minus_fn = c.grad_u_plus_fn = nullptr;
    const auto rows = convergence_study(c, 2, SolvePath::Stencil);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
        CHECK(r.richardson);
        CHECK(r.err_l2 > 0.0);
    }
    CHECK(rows[1].err_l2 < rows[0].err_l2);
}

TEST_CASE("structural battery passes for smooth and circle") {
    const BatteryReport smooth = run_structural_battery(*find_builtin_case("smooth"), 3);
    CHECK(smooth.all_passed());
    REQUIRE(smooth.conditions.size() == 6);

    // constant beta: the measured extension ratio collapses to [1, 1]
    for (const auto& cond : smooth.conditions)
        if (cond.name == "extension_bounds") CHECK(cond.passed);

    const BatteryReport circle = run_structural_battery(*find_builtin_case("circle"), 3);
    CHECK(circle.all_passed());
}

TEST_CASE("negative control: a half-grid offset in beta breaks the identity") {
    const ProblemCase c = *find_builtin_case("circle");
    const Grid g = c.make_grid(8, 8);
    const CoefficientSamples coeff = sample_beta(c, g);

    // shift the x-samples by one arm, as a wrong-offset bug would
    CoefficientSamples bad = coeff;
    for (int j = 0; j <= g.nj() + 1; ++j)
        for (int i = 0; i <= g.ni(); ++i)
            bad.beta1.at(i, j) = coeff.beta1.at(std::max(i - 1, 0), j);

    double worst = 0.0;
    for (unsigned seed = 0; seed < 5; ++seed) {
        const GridFunction v = random_h10(g, 2000 + seed);
        const GridFunction psi = random_h10(g, 2100 + seed);
        worst = std::max(worst, rel_gap(bilinear(v, psi, coeff),
                                        integral_bilinear(v, psi, bad.beta1, bad.beta2)));
    }
    CHECK(worst > 1e-6);  // orders of magnitude above the 1e-13 identity tolerance
}
