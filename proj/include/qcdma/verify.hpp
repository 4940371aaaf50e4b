// The machine-checkable invariant suite: every release criterion as a
// named check with its measured deviation, threshold, and runtime.
#ifndef QCDMA_VERIFY_HPP
#define QCDMA_VERIFY_HPP

#include <string>
#include <vector>

namespace qcdma {

struct CheckResult {
    std::string name;
    std::string description;
    bool pass = false;
    double measured = 0.0;   // worst observed deviation (or value being thresholded)
    double threshold = 0.0;
    std::string comparison;  // "<=" or ">="
    double seconds = 0.0;
    double time_limit = 0.0;  // 0 = none
    std::string detail;
};

enum class VerifyScale { quick, full };

struct VerifyOptions {
    VerifyScale scale = VerifyScale::full;
    bool inject_fault = false;  // adds a deliberately broken filter to prove the suite can fail
};

// The numbered release criteria, one result each.
std::vector<CheckResult> run_acceptance_criteria(VerifyScale scale);

// Acceptance criteria plus the standing design checks (and the optional
// injected fault).
std::vector<CheckResult> run_invariant_suite(const VerifyOptions& options);

std::string format_check_line(const CheckResult& r);
std::string checks_to_json(const std::vector<CheckResult>& results);
bool all_passed(const std::vector<CheckResult>& results);

}  // namespace qcdma

#endif
