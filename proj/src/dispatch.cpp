#include "rmtlab/dispatch.hpp"

#include <algorithm>
#include <array>
#include <string>

namespace rmtlab {

namespace {

constexpr std::array<std::string_view, 7> kNames = {"bulk",  "edge", "sticking",  "rigidity",
                                                    "swap", "dbm-oracle", "semicircle"};

ExperimentConfig two_spec_config(const KeyValueFile& kv, std::uint64_t seed, std::size_t workers) {
  ExperimentConfig cfg;
  cfg.spec_a = read_ensemble_spec(kv, "a.", false);
  cfg.spec_b = read_ensemble_spec(kv, "b.", false);
  cfg.n_samples = kv.get_size("samples");
  cfg.master_seed = seed;
  cfg.workers = workers;
  return cfg;
}

}  // namespace

std::span<const std::string_view> experiment_names() { return kNames; }

bool is_experiment(std::string_view name) {
  return std::find(kNames.begin(), kNames.end(), name) != kNames.end();
}

StatSummary run_named_experiment(std::string_view name, const KeyValueFile& kv, std::uint64_t master_seed,
                                 std::size_t workers) {
  if (name == "semicircle") {
    ExperimentConfig cfg;
    cfg.spec_a = read_ensemble_spec(kv, "a.", false);
    cfg.n_samples = kv.get_size("samples");
    cfg.master_seed = master_seed;
    cfg.workers = workers;
    return semicircle_experiment(cfg);
  }
  if (name == "bulk") {
    ExperimentConfig cfg = two_spec_config(kv, master_seed, workers);
    cfg.window = {kv.get_double_or("window.E", 0.0), kv.get_double_or("window.b", 0.5)};
    return bulk_universality_experiment(cfg);
  }
  if (name == "edge") {
    const std::string side = kv.get_string_or("edge", "upper");
    if (side != "upper" && side != "lower") {
      throw ConfigError(kv.source() + ": field 'edge': expected 'upper' or 'lower'");
    }
    return edge_universality_experiment(two_spec_config(kv, master_seed, workers), side == "lower");
  }
  if (name == "sticking") {
    StickingConfig cfg;
    cfg.sizes = kv.get_size_list("sizes");
    cfg.f = kv.get_double_or("f", 1.5);
    cfg.delta = kv.get_double_or("delta", 0.05);
    cfg.n_samples = kv.get_size("samples");
    cfg.master_seed = master_seed;
    cfg.workers = workers;
    return sticking_experiment(cfg);
  }
  if (name == "rigidity") {
    return rigidity_experiment(read_ensemble_spec(kv, "a.", false), kv.get_size("samples"), master_seed, workers);
  }
  if (name == "swap") {
    SwapConfig cfg;
    cfg.spec_a = read_ensemble_spec(kv, "a.", false);
    cfg.spec_b = read_ensemble_spec(kv, "b.", false);
    cfg.z = {kv.get_double("z.E"), kv.get_double("z.eta")};
    cfg.n_samples = kv.get_size("samples");
    cfg.master_seed = master_seed;
    cfg.workers = workers;
    return lindeberg_swap_experiment(cfg);
  }
  if (name == "dbm-oracle") {
    DbmOracleConfig cfg;
    cfg.initial = read_ensemble_spec(kv, "a.", false);
    cfg.a0_scale = kv.get_double_or("a0_scale", 1.0);
    cfg.t = kv.get_double("t");
    cfg.dt = kv.get_double_or("dt", 1e-4);
    cfg.delta = kv.get_double_or("delta", 0.0);
    cfg.runs = kv.get_size("runs");
    cfg.master_seed = master_seed;
    cfg.workers = workers;
    return dbm_oracle_experiment(cfg);
  }
  throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

}  // namespace rmtlab
