#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "rmtlab/experiments.hpp"
#include "rmtlab/keyvalue.hpp"

namespace rmtlab {

/// bulk, edge, sticking, rigidity, swap, dbm-oracle, semicircle.
std::span<const std::string_view> experiment_names();
bool is_experiment(std::string_view name);

/// Builds the named experiment from `kv` and runs it. Ensemble blocks use the
/// prefixes `a.` and `b.`; the master seed and worker count come from the
/// caller, which resolves flags, environment and config.
///
/// Keys per experiment (defaults in brackets):
///   semicircle  a.*, samples
///   bulk        a.*, b.*, samples, window.E [0], window.b [0.5]
///   edge        a.*, b.*, samples, edge = upper|lower [upper]
///   sticking    sizes (comma list), f [1.5], delta [0.05], samples
///   rigidity    a.*, samples
///   swap        a.*, b.*, samples, z.E, z.eta
///   dbm-oracle  a.* (law of A0), a0_scale [1], t, dt [1e-4], delta [1/(2N)], runs
/// Throws ConfigError for unknown names and missing or malformed fields.
StatSummary run_named_experiment(std::string_view name, const KeyValueFile& kv, std::uint64_t master_seed,
                                 std::size_t workers);

}  // namespace rmtlab
