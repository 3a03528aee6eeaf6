#include "gfm/case_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

namespace gfm {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("case file: bad number for '" + key + "': " + value);
    }
    if (pos != value.size())
        throw std::invalid_argument("case file: trailing junk for '" + key + "': " + value);
    return v;
}

// "planar s=0.5" -> {"planar", {s: 0.5}}
std::pair<std::string, std::map<std::string, std::string>> parse_family(const std::string& value) {
    std::istringstream is(value);
    std::string family;
    is >> family;
    std::map<std::string, std::string> params;
    std::string tok;
    while (is >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) {
            params[""] = tok;  // positional (file path)
        } else {
            params[tok.substr(0, eq)] = tok.substr(eq + 1);
        }
    }
    return {family, params};
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

GridFunction read_phi_file(const std::string& path, double x_w, double x_e,
                           double y_s, double y_n) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open level-set file: " + path);
    int ni = 0, nj = 0;
    if (!(in >> ni >> nj) || ni < 1 || nj < 1)
        throw std::invalid_argument("level-set file: bad header (expected 'I J'): " + path);
    GridFunction phi(Grid(x_w, x_e, y_s, y_n, ni, nj));
    for (int j = 0; j <= nj + 1; ++j)
        for (int i = 0; i <= ni + 1; ++i)
            if (!(in >> phi.at(i, j)))
                throw std::invalid_argument("level-set file: expected " +
                                            std::to_string((ni + 2) * (nj + 2)) + " values: " + path);
    return phi;
}

double interpolate_bilinear(const GridFunction& w, double x, double y) {
    const Grid& g = w.grid();
    double s = (x - g.x_west()) / g.dx();
    double t = (y - g.y_south()) / g.dy();
    s = std::clamp(s, 0.0, double(g.ni() + 1));
    t = std::clamp(t, 0.0, double(g.nj() + 1));
    const int i = std::min(static_cast<int>(s), g.ni());
    const int j = std::min(static_cast<int>(t), g.nj());
    const double fx = s - i, fy = t - j;
    return (1 - fx) * (1 - fy) * w.at(i, j) + fx * (1 - fy) * w.at(i + 1, j) +
           (1 - fx) * fy * w.at(i, j + 1) + fx * fy * w.at(i + 1, j + 1);
}

ProblemCase load_case_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open case file: " + path);

    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("case file: line " + std::to_string(lineno) +
                                        " is not key = value");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }

    static const char* known[] = {"name", "x_w", "x_e", "y_s", "y_n", "phi",
                                  "beta_minus", "beta_plus", "f_minus", "f_plus",
                                  "a", "b", "g"};
    for (const auto& [key, value] : kv) {
        (void)value;
        if (std::find_if(std::begin(known), std::end(known),
                         [&](const char* k) { return key == k; }) == std::end(known))
            throw std::invalid_argument("case file: unknown key '" + key + "'");
    }
    auto get = [&](const char* key, const std::string& dflt) {
        const auto it = kv.find(key);
        return it == kv.end() ? dflt : it->second;
    };

    ProblemCase c;
    c.name = get("name", "custom");
    c.x_w = parse_double("x_w", get("x_w", "0"));
    c.x_e = parse_double("x_e", get("x_e", "1"));
    c.y_s = parse_double("y_s", get("y_s", "0"));
    c.y_n = parse_double("y_n", get("y_n", "1"));

    const double beta_m = parse_double("beta_minus", get("beta_minus", "1"));
    const double beta_p = parse_double("beta_plus", get("beta_plus", "1"));
    if (beta_m <= 0.0 || beta_p <= 0.0)
        throw CaseConsistencyError(c.name + ": beta must be positive");
    c.beta_minus_fn = [=](double, double) { return beta_m; };
    c.beta_plus_fn = [=](double, double) { return beta_p; };
    c.m = std::min(beta_m, beta_p);
    c.M = std::max(beta_m, beta_p);

    const double f_m = parse_double("f_minus", get("f_minus", "0"));
    const double f_p = parse_double("f_plus", get("f_plus", "0"));
    c.f_minus_fn = [=](double, double) { return f_m; };
    c.f_plus_fn = [=](double, double) { return f_p; };

    const double a0 = parse_double("a", get("a", "0"));
    const double b0 = parse_double("b", get("b", "0"));
    const double g0 = parse_double("g", get("g", "0"));
    c.g_fn = [=](double, double) { return g0; };

    const auto [family, params] = parse_family(get("phi", "none"));
    auto param = [&, &params = params](const char* key) {
        const auto it = params.find(key);
        if (it == params.end())
            throw std::invalid_argument("case file: phi family '" + family +
                                        "' needs parameter '" + key + "'");
        return parse_double(key, it->second);
    };

    if (family == "none") {
        c.phi_fn = [](double, double) { return 1.0; };
        c.has_interface = false;
        if (a0 != 0.0 || b0 != 0.0)
            throw CaseConsistencyError(c.name + ": jumps prescribed without an interface");
    } else if (family == "planar") {
        const double s = param("s");
        c.phi_fn = [=](double x, double) { return x - s; };
        c.normal_fn = [](double, double) { return std::array<double, 2>{1.0, 0.0}; };
        c.div_normal_fn = [](double, double) { return 0.0; };
    } else if (family == "circle") {
        const double ccx = param("cx"), ccy = param("cy"), r0 = param("r");
        if (r0 <= 0.0) throw CaseConsistencyError(c.name + ": circle radius must be positive");
        c.phi_fn = [=](double x, double y) { return std::hypot(x - ccx, y - ccy) - r0; };
        c.normal_fn = [=](double x, double y) {
            const double r = std::hypot(x - ccx, y - ccy);
            if (r < 1e-12) return std::array<double, 2>{0.0, 0.0};
            return std::array<double, 2>{(x - ccx) / r, (y - ccy) / r};
        };
        c.div_normal_fn = [=](double x, double y) {
            return 1.0 / std::max(std::hypot(x - ccx, y - ccy), 1e-12);
        };
        c.interface_closed = true;
    } else if (family == "file") {
        const auto it = params.find("");
        if (it == params.end())
            throw std::invalid_argument("case file: phi = file needs a path");
        auto phi_grid = std::make_shared<GridFunction>(
            read_phi_file(it->second, c.x_w, c.x_e, c.y_s, c.y_n));
        c.phi_fn = [phi_grid](double x, double y) {
            return interpolate_bilinear(*phi_grid, x, y);
        };
    } else {
        throw std::invalid_argument("case file: unknown phi family '" + family + "'");
    }

    // Constant jumps along Gamma, extended with a smooth cutoff in |phi| so
    // they vanish well away from the interface (phi is distance-like there).
    const double width = 0.125 * std::min(c.x_e - c.x_w, c.y_n - c.y_s);
    const ScalarFn phi = c.phi_fn;
    auto cutoff = [=](double x, double y) {
        return smooth_cutoff01((std::abs(phi(x, y)) - width) / width);
    };
    c.a_fn = [=](double x, double y) { return a0 == 0.0 ? 0.0 : a0 * cutoff(x, y); };
    c.b_fn = [=](double x, double y) { return b0 == 0.0 ? 0.0 : b0 * cutoff(x, y); };
    if (family == "circle" && b0 != 0.0) {
        // Keep b away from the centre, where the radial normal is singular.
        const double ccx = param("cx"), ccy = param("cy"), r0 = param("r");
        const ScalarFn outer = c.b_fn;
        c.b_fn = [=](double x, double y) {
            const double r = std::hypot(x - ccx, y - ccy);
            return outer(x, y) * (1.0 - smooth_cutoff01((r - r0 / 3.0) / (r0 / 6.0)));
        };
    }

    validate_case(c, std::min(c.x_e - c.x_w, c.y_n - c.y_s) / 16.0);
    return c;
}

void write_solution_matrix(std::ostream& os, const GridFunction& u) {
    const Grid& g = u.grid();
    for (int j = 0; j <= g.nj() + 1; ++j) {
        for (int i = 0; i <= g.ni() + 1; ++i) {
            if (i) os << ' ';
            os << format_g17(u.at(i, j));
        }
        os << '\n';
    }
}

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
    os << "I,J,h,err_l2,err_h1,cg_iters,wall_ms\n";
    for (const ConvergenceRow& r : rows) {
        char buf[192];
        std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g,%d,%.3f\n",
                      r.ni, r.nj, r.h, r.err_l2, r.err_h1, r.cg_iters, r.wall_ms);
        os << buf;
    }
}

}  // namespace gfm
