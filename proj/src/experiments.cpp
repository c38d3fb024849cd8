#include "rmtlab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "rmtlab/dbm.hpp"
#include "rmtlab/rankone.hpp"
#include "rmtlab/spectral.hpp"

namespace rmtlab {

namespace {

constexpr std::uint64_t kTagBootstrap = 0xb0075742ULL;

// Runs `per_sample` for every index and concatenates the outputs in index order.
std::vector<double> pooled(std::size_t count, std::size_t workers,
                           const std::function<std::vector<double>(std::size_t)>& per_sample) {
  std::vector<std::vector<double>> parts(count);
  parallel_for(count, workers, [&](std::size_t i) { parts[i] = per_sample(i); });
  std::vector<double> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

std::vector<double> eigenvalues_of(const EnsembleSpec& spec) { return sample_spectrum(spec).eigenvalues; }

EdgeMode upper_mode(const EnsembleSpec& spec) {
  return has_outlier(spec) ? EdgeMode::SecondLargestShifted : EdgeMode::LargestShifted;
}

void finish_two_sample(StatSummary& s, std::uint64_t seed) {
  s.ks_to_reference = ks_two_sample(s.values, s.reference_values);
  s.ci_halfwidth = bootstrap_ks_null(s.values, s.reference_values, child_key(seed, kTagBootstrap));
}

}  // namespace

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& body) {
  if (workers == 0) throw std::invalid_argument("parallel_for: workers must be positive");
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_index = count;
  std::exception_ptr failure;

  auto run = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };
  const std::size_t k = std::min(workers, count);
  if (k <= 1) {
    run();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(k);
    for (std::size_t w = 0; w < k; ++w) pool.emplace_back(run);
  }
  if (failure) std::rethrow_exception(failure);
}

void ExperimentConfig::validate() const {
  if (n_samples == 0) throw std::invalid_argument("ExperimentConfig: samples must be positive");
  if (workers == 0) throw std::invalid_argument("ExperimentConfig: workers must be positive");
  spec_a.validate();
  spec_b.validate();
}

double StatSummary::extra(std::string_view key) const {
  for (const auto& [k, v] : extras) {
    if (k == key) return v;
  }
  throw std::out_of_range("StatSummary: no extra named " + std::string(key));
}

double bootstrap_ks_null(std::span<const double> a, std::span<const double> b, std::uint64_t seed,
                         std::size_t replicates) {
  if (a.empty() || b.empty()) throw std::invalid_argument("bootstrap_ks_null: empty sample");
  std::vector<double> all(a.begin(), a.end());
  all.insert(all.end(), b.begin(), b.end());
  RandomStream rng(seed);
  auto draw = [&](std::size_t k) {
    std::vector<double> out(k);
    for (double& v : out) v = all[static_cast<std::size_t>(rng.uniform() * static_cast<double>(all.size()))];
    return out;
  };
  std::vector<double> stats;
  stats.reserve(replicates);
  for (std::size_t r = 0; r < replicates; ++r) {
    const std::vector<double> x = draw(a.size());
    const std::vector<double> y = draw(b.size());
    stats.push_back(ks_two_sample(x, y));
  }
  return quantile(std::move(stats), 0.95);
}

StatSummary semicircle_experiment(const ExperimentConfig& cfg) {
  cfg.spec_a.validate();
  if (cfg.n_samples == 0) throw std::invalid_argument("semicircle_experiment: samples must be positive");
  const bool drop_top = has_outlier(cfg.spec_a);
  StatSummary s;
  s.experiment = "semicircle";
  s.n_samples = cfg.n_samples;
  s.seed = cfg.master_seed;
  s.values = pooled(cfg.n_samples, cfg.workers, [&](std::size_t i) {
    std::vector<double> ev = eigenvalues_of(cfg.spec_a.with_seed(cfg.seed_a(i)));
    if (drop_top) ev.pop_back();
    return ev;
  });
  s.ks_to_reference = ks_one_sample(s.values, [](double x) { return n_sc(x); });
  s.ci_halfwidth = 1.358 / std::sqrt(static_cast<double>(s.values.size()));
  s.extras.emplace_back("dropped_top", drop_top ? 1.0 : 0.0);
  return s;
}

StatSummary bulk_universality_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const double e = cfg.window.energy, b = cfg.window.half_width;
  StatSummary s;
  s.experiment = "bulk";
  s.n_samples = cfg.n_samples;
  s.seed = cfg.master_seed;
  s.values = pooled(cfg.n_samples, cfg.workers,
                    [&](std::size_t i) { return spacing_sample(sample_spectrum(cfg.spec_a.with_seed(cfg.seed_a(i))), e, b); });
  s.reference_values = pooled(cfg.n_samples, cfg.workers, [&](std::size_t i) {
    return spacing_sample(sample_spectrum(cfg.spec_b.with_seed(cfg.seed_b(i))), e, b);
  });
  if (s.values.empty() || s.reference_values.empty()) {
    throw std::invalid_argument("bulk_universality_experiment: window holds fewer than two eigenvalues");
  }
  finish_two_sample(s, cfg.master_seed);
  s.extras.emplace_back("mean_gap_a", mean(s.values));
  s.extras.emplace_back("mean_gap_b", mean(s.reference_values));
  return s;
}

StatSummary edge_universality_experiment(const ExperimentConfig& cfg, bool lower_edge) {
  cfg.validate();
  const EdgeMode mode_a = lower_edge ? EdgeMode::SmallestShifted : upper_mode(cfg.spec_a);
  const EdgeMode mode_b = lower_edge ? EdgeMode::SmallestShifted : upper_mode(cfg.spec_b);
  // A shift of at least 1.5 must push the outlier above 2.2; count failures.
  const bool check_gap = effective_shift(cfg.spec_a) >= 1.5;
  std::vector<double> gap_failures(cfg.n_samples, 0.0);

  StatSummary s;
  s.experiment = lower_edge ? "edge-lower" : "edge";
  s.n_samples = cfg.n_samples;
  s.seed = cfg.master_seed;
  s.values.resize(cfg.n_samples);
  s.reference_values.resize(cfg.n_samples);
  parallel_for(cfg.n_samples, cfg.workers, [&](std::size_t i) {
    const SpectralSample a = sample_spectrum(cfg.spec_a.with_seed(cfg.seed_a(i)));
    s.values[i] = edge_statistic(a, mode_a);
    if (check_gap && !(a.eigenvalues.back() > 2.2)) gap_failures[i] = 1.0;
    s.reference_values[i] = edge_statistic(sample_spectrum(cfg.spec_b.with_seed(cfg.seed_b(i))), mode_b);
  });
  finish_two_sample(s, cfg.master_seed);
  s.extras.emplace_back("mean_a", mean(s.values));
  s.extras.emplace_back("mean_b", mean(s.reference_values));
  double failures = 0.0;
  for (double g : gap_failures) failures += g;
  s.extras.emplace_back("outlier_below_2.2", failures);
  return s;
}

StatSummary sticking_experiment(const StickingConfig& cfg) {
  if (cfg.sizes.empty()) throw std::invalid_argument("sticking_experiment: no sizes");
  if (cfg.n_samples == 0) throw std::invalid_argument("sticking_experiment: samples must be positive");
  if (!(cfg.f > 1.0)) throw std::invalid_argument("sticking_experiment: f must exceed 1");
  StatSummary s;
  s.experiment = "sticking";
  s.n_samples = cfg.n_samples;
  s.seed = cfg.master_seed;
  std::vector<double> medians;
  std::vector<std::vector<double>> gaps_by_size;
  for (std::size_t n : cfg.sizes) {
    const std::uint64_t size_seed = child_key(cfg.master_seed, n);
    std::vector<double> gaps = pooled(cfg.n_samples, cfg.workers, [&](std::size_t i) {
      const SymmetricMatrix h = sample_goe(n, sample_seed(size_seed, i));
      const SpectralSample sp = eigen_decompose(h, true);
      const std::vector<double> mus = secular_eigenvalues({sp.eigenvalues, *sp.overlaps, cfg.f});
      return sticking_gaps(sp.eigenvalues, mus, cfg.delta);
    });
    if (gaps.empty()) throw std::invalid_argument("sticking_experiment: delta selects no indices");
    medians.push_back(median(gaps));
    s.extras.emplace_back("median_N" + std::to_string(n), medians.back());
    gaps_by_size.push_back(std::move(gaps));
  }
  s.reference_values = gaps_by_size.front();
  s.values = std::move(gaps_by_size.back());
  s.extras.emplace_back("median_ratio", medians.back() / medians.front());
  finish_two_sample(s, cfg.master_seed);
  return s;
}

StatSummary lindeberg_swap_experiment(const SwapConfig& cfg) {
  cfg.spec_a.validate();
  cfg.spec_b.validate();
  if (cfg.spec_a.n != cfg.spec_b.n) throw std::invalid_argument("lindeberg_swap_experiment: dimension mismatch");
  if (!(cfg.z.eta > 0.0)) throw std::invalid_argument("lindeberg_swap_experiment: eta must be positive");
  if (cfg.n_samples < 2) throw std::invalid_argument("lindeberg_swap_experiment: need at least two samples");
  const double n = static_cast<double>(cfg.spec_a.n);
  auto observable = [&](const EnsembleSpec& spec) {
    const double x = n * cfg.z.eta * empirical_stieltjes(sample_spectrum(spec), cfg.z).imag();
    return 1.0 / (1.0 + x * x);
  };
  StatSummary s;
  s.experiment = "swap";
  s.n_samples = cfg.n_samples;
  s.seed = cfg.master_seed;
  s.values.resize(cfg.n_samples);
  s.reference_values.resize(cfg.n_samples);
  parallel_for(cfg.n_samples, cfg.workers, [&](std::size_t i) {
    s.values[i] = observable(cfg.spec_a.with_seed(sample_seed(cfg.master_seed, 2 * i)));
    s.reference_values[i] = observable(cfg.spec_b.with_seed(sample_seed(cfg.master_seed, 2 * i + 1)));
  });
  const double ma = mean(s.values), mb = mean(s.reference_values);
  const double m = static_cast<double>(cfg.n_samples);
  const double sigma = std::sqrt(variance(s.values) / m + variance(s.reference_values) / m);
  s.ks_to_reference = std::abs(ma - mb);
  s.ci_halfwidth = 1.96 * sigma;
  s.extras.emplace_back("sigma", sigma);
  s.extras.emplace_back("mean_a", ma);
  s.extras.emplace_back("mean_b", mb);
  return s;
}

StatSummary rigidity_experiment(const EnsembleSpec& spec, std::size_t n_samples, std::uint64_t master_seed,
                                std::size_t workers) {
  spec.validate();
  if (n_samples == 0) throw std::invalid_argument("rigidity_experiment: samples must be positive");
  const std::size_t n = spec.n;
  if (n < 4) throw std::invalid_argument("rigidity_experiment: need N >= 4");
  const ClassicalLocations gammas = classical_locations(n);
  const double n23 = std::pow(static_cast<double>(n), 2.0 / 3.0);

  std::vector<double> qs(n_samples);
  std::vector<std::vector<double>> scaled(n_samples);  // alpha = 1 .. N-1
  parallel_for(n_samples, workers, [&](std::size_t i) {
    const SpectralSample sp = sample_spectrum(spec.with_seed(sample_seed(master_seed, i)));
    qs[i] = rigidity_Q(sp, gammas);
    std::vector<double>& row = scaled[i];
    row.resize(n - 1);
    for (std::size_t a = 1; a < n; ++a) {
      const double w = std::cbrt(static_cast<double>(std::min(a, n - a)));
      row[a - 1] = n23 * w * std::abs(sp.eigenvalues[a - 1] - gammas(a));
    }
  });

  std::vector<double> p95(n - 1);
  std::vector<double> column(n_samples);
  for (std::size_t a = 0; a + 1 < n; ++a) {
    for (std::size_t i = 0; i < n_samples; ++i) column[i] = scaled[i][a];
    p95[a] = quantile(column, 0.95);
  }
  StatSummary s;
  s.experiment = "rigidity";
  s.n_samples = n_samples;
  s.seed = master_seed;
  s.values = qs;
  // mirror halves: alpha <= N/2 against N - alpha
  const std::size_t half = (n - 1) / 2;
  for (const auto& row : scaled) {
    for (std::size_t a = 0; a < half; ++a) {
      s.reference_values.push_back(row[a]);
    }
  }
  std::vector<double> upper;
  for (const auto& row : scaled) {
    for (std::size_t a = 0; a < half; ++a) upper.push_back(row[n - 2 - a]);
  }
  s.ks_to_reference = ks_two_sample(upper, s.reference_values);
  s.ci_halfwidth = bootstrap_ks_null(upper, s.reference_values, child_key(master_seed, kTagBootstrap));
  s.extras.emplace_back("median_Q", median(qs));
  s.extras.emplace_back("profile_p95_max", *std::max_element(p95.begin(), p95.end()));
  s.extras.emplace_back("profile_p95_median", median(p95));
  return s;
}

StatSummary dbm_oracle_experiment(const DbmOracleConfig& cfg) {
  cfg.initial.validate();
  if (cfg.runs == 0) throw std::invalid_argument("dbm_oracle_experiment: runs must be positive");
  if (!(cfg.t >= 0.0)) throw std::invalid_argument("dbm_oracle_experiment: t must be nonnegative");
  const DbmConfig dbm_base{cfg.dt, cfg.t, cfg.delta, 0, DbmScheme::EulerMaruyama};
  dbm_base.validate(cfg.initial.n);

  std::vector<std::vector<double>> sde(cfg.runs), oracle(cfg.runs);
  std::vector<double> swaps(cfg.runs), swap_steps(cfg.runs), steps(cfg.runs);
  parallel_for(cfg.runs, cfg.workers, [&](std::size_t i) {
    const std::uint64_t run_seed = sample_seed(cfg.master_seed, i);
    SymmetricMatrix a0 = sample_matrix(cfg.initial.with_seed(child_key(run_seed, 1)));
    if (cfg.a0_scale != 1.0) a0 = SymmetricMatrix::from_dense(cfg.a0_scale * a0.dense());
    const SpectralSample start = eigen_decompose(a0, false);
    DbmConfig dc = dbm_base;
    dc.seed = child_key(run_seed, 2);
    const DbmResult r = dbm_evolve(start.eigenvalues, dc);
    sde[i] = r.state.x;
    swaps[i] = static_cast<double>(r.swaps);
    swap_steps[i] = static_cast<double>(r.steps_with_swaps);
    steps[i] = static_cast<double>(r.steps);
    oracle[i] = matrix_flow_oracle(a0, flow_time_for_dbm(cfg.t), child_key(run_seed, 3)).eigenvalues;
  });

  StatSummary s;
  s.experiment = "dbm-oracle";
  s.n_samples = cfg.runs;
  s.seed = cfg.master_seed;
  for (std::size_t i = 0; i < cfg.runs; ++i) {
    s.values.insert(s.values.end(), sde[i].begin(), sde[i].end());
    s.reference_values.insert(s.reference_values.end(), oracle[i].begin(), oracle[i].end());
  }
  finish_two_sample(s, cfg.master_seed);
  double total_swaps = 0.0, total_swap_steps = 0.0, total_steps = 0.0;
  for (std::size_t i = 0; i < cfg.runs; ++i) {
    total_swaps += swaps[i];
    total_swap_steps += swap_steps[i];
    total_steps += steps[i];
  }
  s.extras.emplace_back("flow_time", flow_time_for_dbm(cfg.t));
  s.extras.emplace_back("swaps", total_swaps);
  s.extras.emplace_back("swap_step_fraction", total_steps > 0.0 ? total_swap_steps / total_steps : 0.0);
  return s;
}

StatSummary top_eigenvalue_experiment(std::size_t n, double f, std::size_t n_samples, std::uint64_t master_seed,
                                      std::size_t workers) {
  if (n_samples < 2) throw std::invalid_argument("top_eigenvalue_experiment: need at least two samples");
  const EnsembleSpec spec{EnsembleKind::GOE, n, 0.0, f, 0, 0.0};
  spec.validate();
  StatSummary s;
  s.experiment = "outlier";
  s.n_samples = n_samples;
  s.seed = master_seed;
  s.values.resize(n_samples);
  parallel_for(n_samples, workers, [&](std::size_t i) {
    s.values[i] = eigenvalues_of(spec.with_seed(sample_seed(master_seed, i))).back();
  });
  const FluctuationSummary fl = top_eigenvalue_fluctuation(s.values, f, n);
  s.ks_to_reference = fl.ks_normal;
  s.ci_halfwidth = 1.358 / std::sqrt(static_cast<double>(n_samples));
  s.extras.emplace_back("mean_top", mean(s.values));
  s.extras.emplace_back("predicted_top", predict_top_eigenvalue(f));
  s.extras.emplace_back("standardized_variance", fl.variance);
  s.extras.emplace_back("n_times_variance", static_cast<double>(n) * variance(s.values));
  s.extras.emplace_back("predicted_n_times_variance", 2.0 * (1.0 - 1.0 / (f * f)));
  return s;
}

}  // namespace rmtlab
