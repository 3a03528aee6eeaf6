#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gfm/case_io.hpp"
#include "gfm/cases.hpp"
#include "gfm/solver.hpp"
#include "gfm/stencil.hpp"

namespace py = pybind11;
using namespace gfm;

namespace {

py::array_t<double> to_numpy(const GridFunction& u) {
    const Grid& g = u.grid();
    py::array_t<double> out({g.npy(), g.npx()});
    auto r = out.mutable_unchecked<2>();
    for (int j = 0; j <= g.nj() + 1; ++j)
        for (int i = 0; i <= g.ni() + 1; ++i)
            r(j, i) = u.at(i, j);
    return out;
}

ProblemCase resolve(const std::string& ref) {
    if (auto c = find_builtin_case(ref)) return *c;
    return load_case_file(ref);
}

SolvePath parse_path(const std::string& s) {
    if (s == "weak") return SolvePath::Weak;
    if (s == "stencil") return SolvePath::Stencil;
    throw std::invalid_argument("path must be 'weak' or 'stencil'");
}

py::dict report_dict(const SolveReport& r) {
    py::dict d;
    d["iterations"] = r.iterations;
    d["residual_norm"] = r.residual_norm;
    d["converged"] = r.converged;
    d["tolerance"] = r.tolerance;
    return d;
}

}  // namespace

PYBIND11_MODULE(_gfm2d, m) {
    m.doc() = "2D variable-coefficient Poisson solver with interface jumps";

    py::class_<Grid>(m, "Grid")
        .def(py::init<double, double, double, double, int, int>(),
             py::arg("x_w"), py::arg("x_e"), py::arg("y_s"), py::arg("y_n"),
             py::arg("ni"), py::arg("nj"))
        .def_property_readonly("ni", &Grid::ni)
        .def_property_readonly("nj", &Grid::nj)
        .def_property_readonly("dx", &Grid::dx)
        .def_property_readonly("dy", &Grid::dy)
        .def_property_readonly("h", &Grid::h)
        .def("x", &Grid::x)
        .def("y", &Grid::y);

    m.def("builtin_case_names", &builtin_case_names);

    m.def(
        "solve_case",
        [](const std::string& case_ref, int nx, int ny, const std::string& path,
           double tol, bool jacobi) {
            const ProblemCase c = resolve(case_ref);
            CgOptions opts;
            opts.tol = tol;
            opts.jacobi = jacobi;
            auto [u, rep] = solve_case(c, c.make_grid(nx, ny), parse_path(path), opts);
            return py::make_tuple(to_numpy(u), report_dict(rep));
        },
        py::arg("case"), py::arg("nx") = 32, py::arg("ny") = 32,
        py::arg("path") = "stencil", py::arg("tol") = 1e-10, py::arg("jacobi") = false,
        "Solve a case; returns (nodal values as a (J+2, I+2) array, report dict)");

    m.def(
        "max_error_vs_exact",
        [](const std::string& case_ref, int nx, int ny, const std::string& path) {
            const ProblemCase c = resolve(case_ref);
            if (!c.has_exact()) throw std::invalid_argument("case has no exact solution");
            const Grid g = c.make_grid(nx, ny);
            auto [u, rep] = solve_case(c, g, parse_path(path));
            if (!rep.converged) throw std::runtime_error("solver did not converge");
            double e = 0.0;
            for (int j = 1; j <= g.nj(); ++j)
                for (int i = 1; i <= g.ni(); ++i)
                    e = std::max(e, std::abs(u.at(i, j) - c.u_exact(g.x(i), g.y(j))));
            return e;
        },
        py::arg("case"), py::arg("nx") = 32, py::arg("ny") = 32, py::arg("path") = "stencil");

    m.def(
        "convergence_study",
        [](const std::string& case_ref, int levels, const std::string& path, int nx, int ny) {
            const ProblemCase c = resolve(case_ref);
            py::list out;
            for (const ConvergenceRow& r : convergence_study(c, levels, parse_path(path), nx, ny)) {
                py::dict d;
                d["I"] = r.ni;
                d["J"] = r.nj;
                d["h"] = r.h;
                d["err_l2"] = r.err_l2;
                d["err_h1"] = r.err_h1;
                d["cg_iters"] = r.cg_iters;
                d["wall_ms"] = r.wall_ms;
                d["richardson"] = r.richardson;
                out.append(d);
            }
            return out;
        },
        py::arg("case"), py::arg("levels") = 4, py::arg("path") = "stencil",
        py::arg("nx") = 15, py::arg("ny") = 15);

    m.def(
        "run_structural_battery",
        [](const std::string& case_ref, int levels) {
            const BatteryReport rep = run_structural_battery(resolve(case_ref), levels);
            py::dict d;
            py::list conds;
            for (const auto& c : rep.conditions) {
                py::dict cd;
                cd["name"] = c.name;
                cd["passed"] = c.passed;
                cd["detail"] = c.detail;
                conds.append(cd);
            }
            d["conditions"] = conds;
            d["all_passed"] = rep.all_passed();
            return d;
        },
        py::arg("case"), py::arg("levels") = 3);
}
