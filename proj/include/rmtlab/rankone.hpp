#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rmtlab {

/// Spectral data of H and the perturbation strength of H + f|e><e|.
struct SecularInput {
  std::vector<double> lambdas;   // eigenvalues of H, nondecreasing
  std::vector<double> overlaps;  // |<u_a, e>|^2, nonnegative, summing to 1
  double f = 0.0;

  void validate() const;
};

/// All N eigenvalues of H + f|e><e|, ascending, from the secular equation
///   sum_a overlaps[a] / (mu - lambda_a) = 1/f.
/// Poles with overlap below 1e-14 are inert: their eigenvalue stays put.
/// Poles closer than 1e-12 are merged; the extra copies also stay put.
/// Every other root is bracketed between consecutive active poles (or above
/// the last one) and bisected until the bracket is narrower than `tol`.
std::vector<double> secular_eigenvalues(const SecularInput& in, double tol = 1e-14);

struct InterlacingCheck {
  bool ok = true;
  double worst_violation = 0.0;  // largest amount by which an inequality fails (0 if none)
};

/// lambda_a - tol <= mu_a <= lambda_{a+1} + tol for a < N, and mu_N >= lambda_N - tol.
InterlacingCheck verify_interlacing(std::span<const double> lambdas, std::span<const double> mus,
                                    double tol = 1e-10);

/// N (lambda_{a+1} - mu_a) for N(1 - delta) <= a <= N - 1 (1-based a).
std::vector<double> sticking_gaps(std::span<const double> lambdas, std::span<const double> mus, double delta);

/// Lower-edge analogue: N (mu_a - lambda_a) for 1 <= a <= N delta.
std::vector<double> lower_sticking_gaps(std::span<const double> lambdas, std::span<const double> mus,
                                        double delta);

/// Location of the outlier: f + 1/f.
double predict_top_eigenvalue(double f);

struct FluctuationSummary {
  std::vector<double> standardized;  // (mu_N - f - 1/f) N^{1/4}
  double mean = 0.0;
  double variance = 0.0;             // unbiased sample variance
  double ks_normal = 0.0;            // KS distance of (x - mean)/sd to N(0, 1)
};

FluctuationSummary top_eigenvalue_fluctuation(std::span<const double> top_eigenvalues, double f, std::size_t n);

}  // namespace rmtlab
