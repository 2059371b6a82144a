// Acceptance gate: runs every property suite at full size and prints one
// pass/fail line per criterion. Exit code 0 iff all pass.

#include <cstdio>
#include <thread>

#include "ampsamp/verify.hpp"

int main() {
    ampsamp::VerifyOptions opts;
    opts.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    const auto& names = ampsamp::suite_names();
    bool all = true;
    for (std::size_t i = 0; i < names.size(); ++i) {
        ampsamp::SuiteResult r;
        try {
            r = ampsamp::run_suite(names[i], opts);
        } catch (const std::exception& e) {
            r = {names[i], false, std::string("exception: ") + e.what()};
        }
        all = all && r.pass;
        std::printf("criterion %2zu (%s): %s — %s\n", i + 1, r.name.c_str(),
                    r.pass ? "PASS" : "FAIL", r.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("acceptance: %s\n", all ? "ALL CRITERIA PASS" : "FAILURES PRESENT");
    return all ? 0 : 1;
}
