// Prints one PASS/FAIL line per acceptance criterion.
//
// Exit status: 0 when every criterion either passes or is listed in
// --known-deviations; 1 otherwise (a regression).
#include <CLI11.hpp>
#include <iostream>
#include <set>

#include "plateforge/verify.hpp"

int main(int argc, char** argv) {
    CLI::App app{"acceptance suite"};
    std::vector<int> known;
    int threads = 1;
    app.add_option("--known-deviations", known, "criteria recorded as not reproduced")->delimiter(',');
    app.add_option("--threads", threads, "assembly threads");
    CLI11_PARSE(app, argc, argv);
    const std::set<int> allowed(known.begin(), known.end());

    int regressions = 0, failed = 0;
    plateforge::run_acceptance(threads, [&](const plateforge::CriterionResult& r) {
        std::cout << plateforge::format_criterion(r) << std::endl;
        if (!r.pass) {
            ++failed;
            if (!allowed.count(r.id)) ++regressions;
        }
    });
    std::cout << (14 - failed) << "/14 criteria pass";
    if (failed) std::cout << "; " << failed << " fail (" << regressions << " not in the known-deviation list)";
    std::cout << "\n";
    return regressions ? 1 : 0;
}
