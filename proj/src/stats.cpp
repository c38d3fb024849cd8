#include "rmtlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rmtlab {

std::vector<double> normalized_gaps(std::span<const double> x, double lo, double hi, double scale) {
  std::vector<double> gaps;
  const auto first = std::lower_bound(x.begin(), x.end(), lo);
  const auto last = std::upper_bound(x.begin(), x.end(), hi);
  for (auto it = first; it < last && it + 1 < last; ++it) gaps.push_back(scale * (*(it + 1) - *it));
  return gaps;
}

std::vector<double> spacing_sample(const SpectralSample& s, double energy, double half_width) {
  if (!(half_width > 0.0) || !(std::abs(energy) + half_width < 2.0)) {
    throw std::invalid_argument("spacing_sample: window must satisfy |E| + b < 2 with b > 0");
  }
  if (s.n() < 2) return {};
  const std::span<const double> kept(s.eigenvalues.data(), s.n() - 1);
  const double scale = static_cast<double>(s.n()) * rho_sc(energy);
  return normalized_gaps(kept, energy - half_width, energy + half_width, scale);
}

double edge_statistic(const SpectralSample& s, EdgeMode mode) {
  const std::size_t n = s.n();
  if (n < 2) throw std::invalid_argument("edge_statistic: need N >= 2");
  const double scale = std::pow(static_cast<double>(n), 2.0 / 3.0);
  switch (mode) {
    case EdgeMode::SecondLargestShifted: return scale * (s.eigenvalues[n - 2] - 2.0);
    case EdgeMode::LargestShifted: return scale * (s.eigenvalues[n - 1] - 2.0);
    case EdgeMode::SmallestShifted: return scale * (s.eigenvalues[0] + 2.0);
  }
  throw std::invalid_argument("edge_statistic: unknown mode");
}

double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

double quantile(std::vector<double> v, double u) {
  if (v.empty()) throw std::invalid_argument("quantile: empty sample");
  if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("quantile: u must lie in [0, 1]");
  std::sort(v.begin(), v.end());
  const double pos = u * static_cast<double>(v.size() - 1);
  const auto k = static_cast<std::size_t>(std::floor(pos));
  if (k + 1 >= v.size()) return v.back();
  const double w = pos - static_cast<double>(k);
  return (1.0 - w) * v[k] + w * v[k + 1];
}

double mean(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("mean: empty sample");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double variance(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / static_cast<double>(v.size() - 1);
}

}  // namespace rmtlab
