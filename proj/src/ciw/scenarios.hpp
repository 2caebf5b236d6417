#pragma once

#include "config.hpp"
#include "report.hpp"
#include "scaling.hpp"

namespace ciw {

// Executes the configured scenario, writing diagnostics.csv, run.json and any
// per-step JSON files into cfg.out_dir. Returns true when every hard
// assertion passed; soft (informational) rows never affect the outcome.
bool run_scenario(const RunConfig& cfg);

// JSON description of a direction set (used by `geometry --dim d`).
ordered_json geometry_json(int d);

// Synthetic mollified state for the identity-verification scenario: smooth
// density within bounds, a time-windowed smooth stress, and a small momentum.
std::shared_ptr<MollifiedState> make_synthetic_mollified(const GridPtr& g, std::uint64_t seed);

}  // namespace ciw
