// Runs the acceptance suite against the shipped data and prints one line per item.

#include "derham/acceptance.hpp"

#include <cstdio>

int main(int argc, char** argv) {
    derham::AcceptanceOptions options;
    options.data_dir = argc > 1 ? argv[1] : DERHAM_DATA_DIR;
    bool all = true;
    for (const auto& r : derham::run_acceptance(options)) {
        all = all && r.passed;
        std::printf("%s [%d] %s (%.2f s): %s\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds,
                    r.detail.c_str());
    }
    std::printf("%s\n", all ? "all acceptance items passed" : "acceptance items failed");
    return all ? 0 : 1;
}
