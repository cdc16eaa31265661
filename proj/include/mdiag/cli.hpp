#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mdiag::cli {

struct CheckLine {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SuiteOptions {
    int max_arity = 4;
    int jobs = 1;
    std::string which = "all";  // chainmap: K, J, comp or all
    unsigned seed = 1;
};

// Suites: trees, geometry, diagonal, chainmap, defects, nogo, apply, all.
std::vector<CheckLine> run_suite(const std::string& name, const SuiteOptions& opt);
void print_lines(const std::vector<CheckLine>& lines, std::ostream& out);

// Entry point; returns the process exit status (0 ok, 1 check failure,
// 2 usage error).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mdiag::cli
