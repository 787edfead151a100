// Runs criteria 1-8 and prints one PASS/FAIL line per criterion. Exit status is non-zero if any fails.

#include <cstdlib>
#include <iostream>

#include "arith_mm/acceptance.hpp"

int main(int argc, char** argv)
{
    arith_mm::acceptance::Options opts;
    for (int i = 1; i < argc; ++i) opts.only.push_back(std::atoi(argv[i]));
    bool all = true;
    arith_mm::acceptance::run(opts, [&](const arith_mm::acceptance::CriterionResult& r) {
        std::cout << arith_mm::acceptance::format_line(r) << "  [" << r.seconds << " s]" << std::endl;
        all = all && r.pass;
    });
    std::cout << (all ? "acceptance: all criteria passed" : "acceptance: FAILURES") << std::endl;
    return all ? 0 : 1;
}
