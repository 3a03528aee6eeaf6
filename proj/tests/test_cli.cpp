#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gfm/case_io.hpp"
#include "gfm/cli.hpp"

using namespace gfm;
using namespace gfm::cli;

namespace {

std::string tmp_path(const std::string& name) {
    return std::string("/tmp/gfm2d_test_") + name;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// CSV rows with the wall-clock column stripped; everything else must be
// bit-stable across identical runs.
std::string strip_wall_ms(const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line)) {
        const auto pos = line.rfind(',');
        out += line.substr(0, pos) + "\n";
    }
    return out;
}

}  // namespace

TEST_CASE("parse_args: solve") {
    const RunConfig cfg =
        parse_args({"solve", "--case", "circle", "--nx", "64", "--ny", "64"});
    CHECK(cfg.command == Command::Solve);
    CHECK(cfg.case_ref == "circle");
    CHECK(cfg.nx == 64);
    CHECK(cfg.ny == 64);
    CHECK(cfg.path == PathOpt::Both);
    CHECK(cfg.tol == 1e-10);
}

TEST_CASE("parse_args: converge") {
    const RunConfig cfg =
        parse_args({"converge", "--case", "planar", "--levels", "5", "--out", "rows.csv"});
    CHECK(cfg.command == Command::Converge);
    CHECK(cfg.case_ref == "planar");
    CHECK(cfg.levels == 5);
    CHECK(cfg.out == "rows.csv");
    CHECK(cfg.path == PathOpt::Stencil);  // converge default
    CHECK(cfg.format == Format::Csv);
}

TEST_CASE("parse_args: verify and validation errors") {
    const RunConfig cfg = parse_args({"verify", "--case", "smooth", "--levels", "3"});
    CHECK(cfg.command == Command::Verify);

    CHECK_THROWS_AS(parse_args({"solve", "--case", "smooth", "--nx", "0"}), UsageError);
    CHECK_THROWS_AS(parse_args({"solve", "--nx", "4"}), UsageError);  // --case required
    CHECK_THROWS_AS(parse_args({"frobnicate", "--case", "smooth"}), UsageError);
    CHECK_THROWS_AS(parse_args({"solve", "--case", "smooth", "--tol", "-1"}), UsageError);
    CHECK_THROWS_AS(parse_args({"converge", "--case", "smooth", "--path", "sideways"}),
                    UsageError);
    CHECK_THROWS_AS(parse_args({}), UsageError);
}

TEST_CASE("GFM_THREADS is validated") {
    setenv("GFM_THREADS", "3", 1);
    CHECK(parse_args({"verify", "--case", "smooth"}).threads == 3);
    setenv("GFM_THREADS", "zero", 1);
    CHECK_THROWS_AS(parse_args({"verify", "--case", "smooth"}), UsageError);
    unsetenv("GFM_THREADS");
}

TEST_CASE("unknown case reports usage") {
    RunConfig cfg = parse_args({"solve", "--case", "no_such_case", "--nx", "4", "--ny", "4"});
    CHECK_THROWS_AS(run(cfg), UsageError);
}

TEST_CASE("converge writes a stable CSV") {
    const std::string out1 = tmp_path("rows1.csv"), out2 = tmp_path("rows2.csv");
    RunConfig cfg = parse_args({"converge", "--case", "smooth", "--levels", "3",
                                "--nx", "7", "--ny", "7", "--out", out1});
    CHECK(run(cfg) == kExitOk);
    cfg.out = out2;
    CHECK(run(cfg) == kExitOk);

    const std::string csv1 = read_file(out1);
    std::istringstream in(csv1);
    std::string header;
    std::getline(in, header);
    CHECK(header == "I,J,h,err_l2,err_h1,cg_iters,wall_ms");
    int rows = 0;
    double prev_h = 1.0;
    std::string line;
    while (std::getline(in, line)) {
        ++rows;
        int i, j;
        double h;
        CHECK(std::sscanf(line.c_str(), "%d,%d,%lf", &i, &j, &h) == 3);
        CHECK(h == doctest::Approx(prev_h / 2.0).epsilon(0.26));
        prev_h = h;
    }
    CHECK(rows == 3);

    CHECK(strip_wall_ms(csv1) == strip_wall_ms(read_file(out2)));
}

TEST_CASE("plain format table") {
    const std::string out = tmp_path("rows.txt");
    RunConfig cfg = parse_args({"converge", "--case", "smooth", "--levels", "2", "--nx", "7",
                                "--ny", "7", "--format", "plain", "--out", out});
    CHECK(run(cfg) == kExitOk);
    const std::string text = read_file(out);
    CHECK(text.find("err_l2") != std::string::npos);
    CHECK(text.find("case smooth") != std::string::npos);
}

TEST_CASE("converge rejects path=both") {
    RunConfig cfg = parse_args({"converge", "--case", "smooth", "--path", "both"});
    CHECK_THROWS_AS(run(cfg), UsageError);
}

TEST_CASE("solve writes the full node lattice") {
    const std::string out = tmp_path("solution.txt");
    RunConfig cfg = parse_args({"solve", "--case", "smooth", "--nx", "5", "--ny", "3",
                                "--out", out});
    CHECK(run(cfg) == kExitOk);
    std::ifstream in(out);
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        double v;
        int cols = 0;
        while (ls >> v) ++cols;
        CHECK(cols == 7);  // I + 2
        ++rows;
    }
    CHECK(rows == 5);  // J + 2
}

TEST_CASE("unreachable tolerance exits with a numerical failure") {
    const std::string out = tmp_path("failed.txt");
    RunConfig cfg = parse_args({"solve", "--case", "circle", "--nx", "12", "--ny", "12",
                                "--tol", "1e-30", "--out", out});
    CHECK(run(cfg) == kExitNumerical);
}

TEST_CASE("verify exits 0 on a passing case") {
    const std::string out = tmp_path("battery.txt");
    RunConfig cfg = parse_args({"verify", "--case", "smooth", "--levels", "3", "--out", out});
    CHECK(run(cfg) == kExitOk);
    const std::string text = read_file(out);
    CHECK(text.find("PASS") != std::string::npos);
    CHECK(text.find("FAIL") == std::string::npos);
}

TEST_CASE("case files: planar family round trip") {
    const std::string path = tmp_path("case_planar.txt");
    write_file(path,
               "# custom planar case\n"
               "name = mycase\n"
               "x_w = 0\nx_e = 1\ny_s = 0\ny_n = 1\n"
               "phi = planar s=0.391\n"
               "beta_minus = 4.0\nbeta_plus = 1.0\n"
               "f_minus = -2\nf_plus = -2\n"
               "b = 1.25\ng = 0.5\n");
    const ProblemCase c = load_case_file(path);
    CHECK(c.name == "mycase");
    CHECK(c.m == 1.0);
    CHECK(c.M == 4.0);
    CHECK(c.phi_fn(0.391, 0.77) == doctest::Approx(0.0));
    CHECK(c.b_fn(0.391, 0.5) == doctest::Approx(1.25));
    CHECK(c.a_fn(0.391, 0.5) == 0.0);
    CHECK(c.b_fn(0.0, 0.5) == 0.0);  // cutoff kills the jump away from Gamma
    CHECK_FALSE(c.has_exact());

    RunConfig cfg = parse_args({"solve", "--case", path, "--nx", "10", "--ny", "10",
                                "--out", tmp_path("custom_u.txt")});
    CHECK(run(cfg) == kExitOk);
}

TEST_CASE("exit codes through the full entry point") {
    const std::string bad = tmp_path("exit3.txt");
    write_file(bad, "beta_minus = -2\n");
    const std::string out = tmp_path("exit3_u.txt");
    std::vector<std::string> args = {"gfm2d", "solve", "--case", bad,
                                     "--nx", "4", "--ny", "4", "--out", out};
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    CHECK(gfm::cli::main(static_cast<int>(argv.size()), argv.data()) == kExitCaseConsistency);

    args[3] = "definitely_not_a_case";
    argv.clear();
    for (auto& a : args) argv.push_back(a.data());
    CHECK(gfm::cli::main(static_cast<int>(argv.size()), argv.data()) == kExitUsage);
}

TEST_CASE("case files: errors") {
    const std::string bad1 = tmp_path("bad1.txt");
    write_file(bad1, "phi = dodecahedron r=1\n");
    CHECK_THROWS_AS(load_case_file(bad1), std::invalid_argument);

    const std::string bad2 = tmp_path("bad2.txt");
    write_file(bad2, "beta_minus = -2\n");
    CHECK_THROWS_AS(load_case_file(bad2), CaseConsistencyError);

    const std::string bad3 = tmp_path("bad3.txt");
    write_file(bad3, "unknown_key = 1\n");
    CHECK_THROWS_AS(load_case_file(bad3), std::invalid_argument);

    const std::string bad4 = tmp_path("bad4.txt");
    write_file(bad4, "phi = none\nb = 1\n");  // jumps without an interface
    CHECK_THROWS_AS(load_case_file(bad4), CaseConsistencyError);

    CHECK_THROWS_AS(load_case_file(tmp_path("does_not_exist.txt")), std::invalid_argument);
}

TEST_CASE("level-set files: read and interpolate") {
    const std::string phi_path = tmp_path("phi.txt");
    {
        std::ostringstream os;
        os.precision(17);
        const int ni = 6, nj = 6;
        os << ni << " " << nj << "\n";
        const Grid g(0.0, 1.0, 0.0, 1.0, ni, nj);
        for (int j = 0; j <= nj + 1; ++j) {
            for (int i = 0; i <= ni + 1; ++i) os << (g.x(i) - 0.45) << " ";
            os << "\n";
        }
        write_file(phi_path, os.str());
    }
    const GridFunction phi = read_phi_file(phi_path, 0.0, 1.0, 0.0, 1.0);
    CHECK(phi.grid().ni() == 6);
    CHECK(phi.at(0, 0) == doctest::Approx(-0.45));
    // bilinear interpolation reproduces the planar field everywhere
    CHECK(interpolate_bilinear(phi, 0.45, 0.3) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(interpolate_bilinear(phi, 0.85, 0.9) == doctest::Approx(0.4).epsilon(1e-13));

    const std::string case_path = tmp_path("case_file_phi.txt");
    write_file(case_path,
               "phi = file " + phi_path + "\n" +
               "beta_minus = 2\nbeta_plus = 1\nf_minus = 1\nf_plus = 1\n");
    const ProblemCase c = load_case_file(case_path);
    CHECK(c.phi_fn(0.45, 0.6) == doctest::Approx(0.0).epsilon(1e-14));
    RunConfig cfg = parse_args({"solve", "--case", case_path, "--nx", "6", "--ny", "6",
                                "--out", tmp_path("file_phi_u.txt")});
    CHECK(run(cfg) == kExitOk);

    const std::string bad = tmp_path("phi_bad.txt");
    write_file(bad, "4 4\n1 2 3\n");
    CHECK_THROWS_AS(read_phi_file(bad, 0.0, 1.0, 0.0, 1.0), std::invalid_argument);
}
