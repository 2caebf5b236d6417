#pragma once

#include <map>
#include <string>

#include "driver.hpp"

namespace ciw {

// Flat sectioned key=value run configuration. Unknown sections or keys are
// rejected; parse errors carry line and column.
struct RunConfig {
    // [grid]
    int d = 2;
    int n = 128;
    int nt = 65;
    double T = 1.0;

    // [ledger]
    ParameterLedger ledger;

    // [scenario]
    std::string scenario = "verify-identities";
    int steps = 1;
    FlowMode mode = FlowMode::compressible;
    long lambda_override = 0;  // scenario-specific ladders use the ledger value

    // [pressure]
    std::string pressure_law = "polytropic";

    // [output]
    std::string out_dir = "out";
    std::uint64_t seed = 42;
    bool dump_fields = false;
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin);

}  // namespace ciw
