#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rmtlab/ensembles.hpp"
#include "rmtlab/semicircle.hpp"
#include "rmtlab/stats.hpp"

namespace rmtlab {

/// Runs body(0), ..., body(count - 1) on up to `workers` threads. Indices are
/// handed out dynamically; callers write results by index, so the outcome does
/// not depend on scheduling. The exception of the lowest failing index is
/// rethrown after all threads have joined.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& body);

struct Window {
  double energy = 0.0;
  double half_width = 0.5;
};

struct ExperimentConfig {
  EnsembleSpec spec_a;
  EnsembleSpec spec_b;
  std::size_t n_samples = 0;
  Window window;
  std::uint64_t master_seed = 0;
  std::size_t workers = 1;

  /// Sample i of spec_a uses seed sample_seed(master, 2i), of spec_b
  /// sample_seed(master, 2i + 1). The seeds stored in the specs are ignored.
  std::uint64_t seed_a(std::size_t i) const { return sample_seed(master_seed, 2 * i); }
  std::uint64_t seed_b(std::size_t i) const { return sample_seed(master_seed, 2 * i + 1); }

  void validate() const;
};

struct StatSummary {
  std::string experiment;
  std::vector<double> values;            // sample of spec_a (or the single sample)
  std::vector<double> reference_values;  // sample of spec_b, when there is one
  double ks_to_reference = 0.0;
  double ci_halfwidth = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, double>> extras;  // in insertion order

  /// Throws std::out_of_range for an unknown key.
  double extra(std::string_view key) const;
};

/// 95% quantile of the KS distance between two samples of sizes |a| and |b|
/// redrawn with replacement from the pooled values (B replicates).
double bootstrap_ks_null(std::span<const double> a, std::span<const double> b, std::uint64_t seed,
                         std::size_t replicates = 200);

/// Pooled eigenvalues of spec_a (top eigenvalue dropped when it is an
/// outlier) against n_sc. ci is the asymptotic 95% one-sample KS quantile for
/// the pooled count, which overstates the spread of rigid eigenvalues.
StatSummary semicircle_experiment(const ExperimentConfig& cfg);

/// Pooled bulk gaps of spec_a against those of spec_b.
StatSummary bulk_universality_experiment(const ExperimentConfig& cfg);

/// Upper edge: second-largest statistic for specs with an outlier, largest
/// otherwise. Lower edge: smallest statistic for both.
StatSummary edge_universality_experiment(const ExperimentConfig& cfg, bool lower_edge = false);

struct StickingConfig {
  std::vector<std::size_t> sizes;
  double f = 1.5;
  double delta = 0.05;
  std::size_t n_samples = 0;
  std::uint64_t master_seed = 0;
  std::size_t workers = 1;
};

/// GOE samples perturbed by f|e><e| via the secular equation. values holds
/// the gaps of the largest size, reference_values those of the smallest;
/// ks compares the two. Extras: median_N<size> per size and median_ratio
/// (largest over smallest size).
StatSummary sticking_experiment(const StickingConfig& cfg);

struct SwapConfig {
  EnsembleSpec spec_a;
  EnsembleSpec spec_b;
  SpectralParam z;
  std::size_t n_samples = 0;
  std::uint64_t master_seed = 0;
  std::size_t workers = 1;
};

/// F(N eta Im m(z)) with F(x) = 1/(1 + x^2) per sample of each spec.
/// ks_to_reference holds Delta = |mean_a - mean_b|, ci the 95% normal
/// half-width 1.96 sigma; extras carry sigma, mean_a and mean_b.
StatSummary lindeberg_swap_experiment(const SwapConfig& cfg);

/// Q per sample in values; extras: median_Q and the maximum and median over
/// alpha of the 95th percentile of N^{2/3} min(a, N - a)^{1/3} |mu_a - gamma_a|.
/// ks compares the scaled deviations of the lower and upper halves of the
/// spectrum (mirror symmetry).
StatSummary rigidity_experiment(const EnsembleSpec& spec, std::size_t n_samples, std::uint64_t master_seed,
                                std::size_t workers = 1);

struct DbmOracleConfig {
  EnsembleSpec initial;  // law of A0
  double a0_scale = 1.0;
  double t = 0.5;        // DBM time; the oracle runs at flow time t/2
  double dt = 1e-4;
  double delta = 0.0;    // 0 selects 1/(2N)
  std::size_t runs = 0;
  std::uint64_t master_seed = 0;
  std::size_t workers = 1;
};

/// For each run a fresh A0 is drawn; its eigenvalues are evolved by DBM and,
/// independently, A0 is pushed through the matrix flow. values pools the
/// particle endpoints, reference_values the oracle eigenvalues. Extras
/// report swap diagnostics.
StatSummary dbm_oracle_experiment(const DbmOracleConfig& cfg);

/// Largest eigenvalue of GOE + f|e><e| over M samples (values), with the
/// mean, variance and KS-to-fitted-normal of the N^{1/4}-standardised
/// fluctuations in extras. ks_to_reference is that KS distance.
StatSummary top_eigenvalue_experiment(std::size_t n, double f, std::size_t n_samples, std::uint64_t master_seed,
                                      std::size_t workers = 1);

}  // namespace rmtlab
