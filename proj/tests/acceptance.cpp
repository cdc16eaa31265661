// Acceptance report: one PASS/FAIL line per criterion.
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "mdiag/cli.hpp"

using mdiag::cli::CheckLine;

namespace {

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

}  // namespace

int main()
{
    mdiag::cli::SuiteOptions opt;
    opt.max_arity = 6;
    opt.jobs = 1;

    std::vector<CheckLine> lines;
    for (const char* s : {"geometry", "diagonal", "chainmap", "defects", "nogo", "apply"}) {
        auto l = mdiag::cli::run_suite(s, opt);
        lines.insert(lines.end(), l.begin(), l.end());
    }

    const std::vector<std::pair<std::string, std::vector<std::string>>> criteria = {
        {"counts table", {"diagonal.counts."}},
        {"printed diagonals", {"diagonal.delta_K(", "diagonal.delta_J(", "diagonal.pairs_J4"}},
        {"four-pair discrepancy", {"diagonal.image_examples", "diagonal.tp_bm"}},
        {"geometry", {"geometry."}},
        {"symbolic suite", {"chainmap.", "defects.", "nogo."}},
        {"instantiation suite", {"apply."}},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& [name, prefixes] = criteria[i];
        int n = 0;
        std::vector<const CheckLine*> bad;
        for (const auto& l : lines)
            for (const auto& p : prefixes)
                if (starts_with(l.name, p)) {
                    ++n;
                    if (!l.pass)
                        bad.push_back(&l);
                    break;
                }
        bool pass = n > 0 && bad.empty();
        failed += !pass;
        std::cout << (pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << name << "): " << n - bad.size()
                  << "/" << n << " checks pass\n";
        for (const CheckLine* l : bad)
            std::cout << "    FAIL " << l->name << ": " << l->detail << "\n";
    }
    return failed ? 1 : 0;
}
