#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gfm::cli {

enum class Command { Solve, Converge, Verify };
enum class PathOpt { Weak, Stencil, Both };
enum class Format { Csv, Plain };

struct RunConfig {
    Command command = Command::Solve;
    std::string case_ref;  // builtin name, else path to a case file
    int nx = 15, ny = 15;  // interior sizes (coarsest level for converge)
    int levels = 4;
    PathOpt path = PathOpt::Both;
    double tol = 1e-10;
    bool jacobi = false;
    std::string out;  // empty: stdout
    Format format = Format::Csv;
    int threads = 1;  // GFM_THREADS cap; the solver core is serial
};

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Exit codes: 0 success, 1 usage, 2 numerical failure, 3 case-consistency
/// failure.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitCaseConsistency = 3;

/// Parse argv (without the program name). Throws UsageError on bad input.
RunConfig parse_args(const std::vector<std::string>& args);

int run(const RunConfig& config);

/// Full entry point: parse, run, map exceptions to exit codes.
int main(int argc, char** argv);

}  // namespace gfm::cli
