#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rmtlab/ks.hpp"
#include "rmtlab/spectral.hpp"

namespace rmtlab {

/// Gaps scale * (x_{i+1} - x_i) between consecutive entries of the ascending
/// `x` that both lie in [lo, hi].
std::vector<double> normalized_gaps(std::span<const double> x, double lo, double hi, double scale);

/// Bulk gaps N rho_sc(E) (lambda_{i+1} - lambda_i) inside [E - b, E + b].
/// The top eigenvalue is always excluded. Requires |E| + b < 2.
std::vector<double> spacing_sample(const SpectralSample& s, double energy, double half_width);

enum class EdgeMode {
  SecondLargestShifted,  // N^{2/3} (mu_{N-1} - 2)
  LargestShifted,        // N^{2/3} (lambda_N - 2)
  SmallestShifted,       // N^{2/3} (lambda_1 + 2)
};

double edge_statistic(const SpectralSample& s, EdgeMode mode);

/// Median with the mean of the two central values for even sizes.
double median(std::vector<double> v);

/// Linear-interpolation quantile, u in [0, 1].
double quantile(std::vector<double> v, double u);

double mean(std::span<const double> v);
/// Unbiased sample variance; zero for fewer than two values.
double variance(std::span<const double> v);

}  // namespace rmtlab
