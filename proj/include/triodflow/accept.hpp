#ifndef TRIODFLOW_ACCEPT_HPP
#define TRIODFLOW_ACCEPT_HPP

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace triodflow::accept {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct Criterion {
    int id;
    std::string name;
    bool fast; // part of the fast suite
    std::function<CriterionResult()> runner;
};

const std::vector<Criterion>& criteria();

// Runs a suite ("fast" or "full"); results are ordered by criterion id.
// Parallelism is capped by TRIODFLOW_THREADS (default: hardware).
std::vector<CriterionResult> run_suite(const std::string& suite);

// Prints one pass/fail line per criterion; returns true when all passed.
bool print_results(const std::vector<CriterionResult>& results, std::ostream& out);

} // namespace triodflow::accept

#endif
