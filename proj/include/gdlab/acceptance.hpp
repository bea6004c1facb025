#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace gdlab {

struct AcceptanceOptions {
    std::string out_dir = "acceptance_out";
    int workers = 2;
    uint64_t master_seed = 20260811;
};

/// Runs the full verification suite, printing one PASS/FAIL line per
/// criterion. Returns the number of failed criteria.
int run_acceptance(const AcceptanceOptions& opts, std::ostream& log);

}  // namespace gdlab
