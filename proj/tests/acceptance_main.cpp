// Release gate: runs every acceptance criterion at full scale and prints one
// pass/fail line per criterion.  Nonzero exit if anything fails.
#include <cstdio>

#include "qcdma/verify.hpp"

int main() {
    const auto results = qcdma::run_acceptance_criteria(qcdma::VerifyScale::full);
    int failures = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        std::printf("%zu. %s\n", i + 1, qcdma::format_check_line(r).c_str());
        failures += r.pass ? 0 : 1;
    }
    std::printf("%s: %zu/%zu criteria passed\n", failures == 0 ? "OK" : "FAILED", results.size() - failures,
                results.size());
    return failures == 0 ? 0 : 1;
}
