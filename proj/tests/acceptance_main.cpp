// Acceptance suite runner: one PASS/FAIL line per criterion, nonzero exit
// on any failure.
#include <cstdlib>
#include <iostream>
#include <string>

#include "gdlab/acceptance.hpp"

int main(int argc, char** argv) {
    gdlab::AcceptanceOptions opts;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--out" && i + 1 < argc) opts.out_dir = argv[++i];
        else if (arg == "--workers" && i + 1 < argc) opts.workers = std::atoi(argv[++i]);
        else if (arg == "--seed" && i + 1 < argc) opts.master_seed = std::strtoull(argv[++i], nullptr, 10);
    }
    int failures = gdlab::run_acceptance(opts, std::cout);
    return failures == 0 ? 0 : 1;
}
