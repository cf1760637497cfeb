#pragma once

#include <string>
#include <vector>

#include <logtensor/report.hpp>

namespace logtensor {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    double seconds = 0.0;
    double budget = 0.0; // seconds, 0 when unbounded
    std::string detail;
    std::vector<VerificationReport> reports;
};

struct AcceptanceOptions {
    std::vector<int> only; // empty: all criteria
    double tolerance = 1e-9;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions &opt = {});
std::string criterion_line(const CriterionResult &c);

} // namespace logtensor
