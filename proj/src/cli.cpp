#include "gfm/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gfm/case_io.hpp"
#include "gfm/cases.hpp"

namespace gfm::cli {

namespace {

ProblemCase resolve_case(const std::string& ref) {
    if (auto c = find_builtin_case(ref)) return *c;
    std::ifstream probe(ref);
    if (!probe) {
        std::string names;
        for (const auto& n : builtin_case_names()) names += " " + n;
        throw UsageError("unknown case '" + ref + "' (builtin:" + names +
                         ") and no such file");
    }
    probe.close();
    return load_case_file(ref);
}

SolvePath to_path(PathOpt p) {
    return p == PathOpt::Weak ? SolvePath::Weak : SolvePath::Stencil;
}

std::ostream& open_output(std::ofstream& file, const std::string& out) {
    if (out.empty()) return std::cout;
    file.open(out);
    if (!file) throw std::runtime_error("cannot open output file: " + out);
    return file;
}

int run_solve(const RunConfig& cfg) {
    const ProblemCase c = resolve_case(cfg.case_ref);
    const Grid grid = c.make_grid(cfg.nx, cfg.ny);
    CgOptions opts;
    opts.tol = cfg.tol;
    opts.jacobi = cfg.jacobi;

    GridFunction u(grid);
    SolveReport rep;
    double path_gap = -1.0;
    if (cfg.path == PathOpt::Both) {
        auto [uw, rw] = solve_case(c, grid, SolvePath::Weak, opts);
        auto [us, rs] = solve_case(c, grid, SolvePath::Stencil, opts);
        double gap = 0.0, scale = 0.0;
        for (std::size_t k = 0; k < uw.values().size(); ++k) {
            gap = std::max(gap, std::abs(uw.values()[k] - us.values()[k]));
            scale = std::max(scale, std::abs(us.values()[k]));
        }
        path_gap = gap / (scale > 0.0 ? scale : 1.0);
        u = us;
        rep = rs;
        rep.converged = rw.converged && rs.converged;
        rep.iterations = std::max(rw.iterations, rs.iterations);
        rep.residual_norm = std::max(rw.residual_norm, rs.residual_norm);
    } else {
        std::tie(u, rep) = solve_case(c, grid, to_path(cfg.path), opts);
    }

    std::ofstream file;
    std::ostream& os = open_output(file, cfg.out);
    write_solution_matrix(os, u);

    std::ostream& ros = cfg.out.empty() ? std::cerr : std::cout;
    ros << "case: " << c.name << "  grid: " << cfg.nx << "x" << cfg.ny
        << "  path: " << (cfg.path == PathOpt::Both ? "both" : (cfg.path == PathOpt::Weak ? "weak" : "stencil"))
        << "\n";
    ros << "cg iterations: " << rep.iterations << "  relative residual: " << rep.residual_norm
        << "  tol: " << rep.tolerance << (rep.converged ? "  converged" : "  NOT CONVERGED") << "\n";
    if (path_gap >= 0.0) ros << "weak/stencil max relative difference: " << path_gap << "\n";
    if (c.has_exact()) {
        double emax = 0.0;
        for (int j = 1; j <= grid.nj(); ++j)
            for (int i = 1; i <= grid.ni(); ++i)
                emax = std::max(emax, std::abs(u.at(i, j) - c.u_exact(grid.x(i), grid.y(j))));
        ros << "max-norm error vs exact: " << emax << "\n";
    }
    return rep.converged ? kExitOk : kExitNumerical;
}

int run_converge(const RunConfig& cfg) {
    if (cfg.path == PathOpt::Both)
        throw UsageError("converge needs --path weak or --path stencil");
    const ProblemCase c = resolve_case(cfg.case_ref);
    CgOptions opts;
    opts.tol = cfg.tol;
    opts.jacobi = cfg.jacobi;
    const auto rows = convergence_study(c, cfg.levels, to_path(cfg.path), cfg.nx, cfg.ny, opts);

    std::ofstream file;
    std::ostream& os = open_output(file, cfg.out);
    if (cfg.format == Format::Csv) {
        write_convergence_csv(os, rows);
    } else {
        os << "case " << c.name << ", " << rows.size() << " levels"
           << (rows.front().richardson ? " (errors vs fine-grid reference)" : "") << "\n";
        for (const auto& r : rows) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "%4dx%-4d h=%-10.4g err_l2=%-12.5g err_h1=%-12.5g cg=%-6d %.1f ms\n",
                          r.ni, r.nj, r.h, r.err_l2, r.err_h1, r.cg_iters, r.wall_ms);
            os << buf;
        }
    }
    return kExitOk;
}

int run_verify(const RunConfig& cfg) {
    const ProblemCase c = resolve_case(cfg.case_ref);
    const BatteryReport rep = run_structural_battery(c, cfg.levels);
    std::ofstream file;
    std::ostream& os = open_output(file, cfg.out);
    os << "structural conditions, case " << c.name << ":\n";
    for (const auto& cond : rep.conditions) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "  %-28s", cond.name.c_str());
        os << buf << (cond.passed ? "PASS  " : "FAIL  ") << cond.detail << "\n";
    }
    os << (rep.all_passed() ? "all conditions passed\n" : "SOME CONDITIONS FAILED\n");
    return rep.all_passed() ? kExitOk : kExitNumerical;
}

}  // namespace

RunConfig parse_args(const std::vector<std::string>& args) {
    CLI::App app{"2D variable-coefficient Poisson solver with interface jumps"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string path_str, format_str = "csv";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--case", cfg.case_ref, "builtin case name or case file path")->required();
        sub->add_option("--tol", cfg.tol, "CG relative residual tolerance")
            ->check(CLI::PositiveNumber);
        sub->add_flag("--jacobi", cfg.jacobi, "enable the diagonal preconditioner");
        sub->add_option("--out", cfg.out, "output file (default stdout)");
        sub->add_option("--path", path_str, "weak | stencil | both")
            ->check(CLI::IsMember({"weak", "stencil", "both"}));
    };

    CLI::App* solve = app.add_subcommand("solve", "solve one case on one grid");
    add_common(solve);
    solve->add_option("--nx", cfg.nx, "interior nodes along x")->check(CLI::Range(1, 1 << 14));
    solve->add_option("--ny", cfg.ny, "interior nodes along y")->check(CLI::Range(1, 1 << 14));

    CLI::App* converge = app.add_subcommand("converge", "refinement study");
    add_common(converge);
    converge->add_option("--nx", cfg.nx, "coarsest interior nodes along x")->check(CLI::Range(1, 1 << 12));
    converge->add_option("--ny", cfg.ny, "coarsest interior nodes along y")->check(CLI::Range(1, 1 << 12));
    converge->add_option("--levels", cfg.levels, "number of refinement levels")
        ->check(CLI::Range(1, 12));
    converge->add_option("--format", format_str, "csv | plain")
        ->check(CLI::IsMember({"csv", "plain"}));

    CLI::App* verify = app.add_subcommand("verify", "run the structural-condition battery");
    add_common(verify);
    verify->add_option("--levels", cfg.levels, "refinement levels for the battery")
        ->check(CLI::Range(1, 8));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    if (solve->parsed()) cfg.command = Command::Solve;
    else if (converge->parsed()) cfg.command = Command::Converge;
    else cfg.command = Command::Verify;

    if (path_str.empty()) path_str = converge->parsed() ? "stencil" : "both";
    cfg.path = path_str == "weak" ? PathOpt::Weak
             : path_str == "stencil" ? PathOpt::Stencil : PathOpt::Both;
    cfg.format = format_str == "plain" ? Format::Plain : Format::Csv;

    if (const char* env = std::getenv("GFM_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1)
            throw UsageError("GFM_THREADS must be a positive integer");
        cfg.threads = static_cast<int>(v);
    }
    return cfg;
}

int run(const RunConfig& cfg) {
    switch (cfg.command) {
        case Command::Solve: return run_solve(cfg);
        case Command::Converge: return run_converge(cfg);
        case Command::Verify: return run_verify(cfg);
    }
    return kExitUsage;
}

int main(int argc, char** argv) {
    try {
        const RunConfig cfg = parse_args(std::vector<std::string>(argv + 1, argv + argc));
        return run(cfg);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const CaseConsistencyError& e) {
        std::cerr << "case consistency error: " << e.what() << "\n";
        return kExitCaseConsistency;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

}  // namespace gfm::cli
