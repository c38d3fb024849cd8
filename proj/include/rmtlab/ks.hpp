#pragma once

#include <functional>
#include <span>

namespace rmtlab {

/// sup_x |F_a(x) - F_b(x)| for the empirical CDFs of a and b. Ties are
/// handled by stepping both CDFs past a shared value before comparing.
/// Throws std::invalid_argument if either sample is empty.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// sup_x |F_n(x) - F(x)| against a continuous reference CDF.
double ks_one_sample(std::span<const double> sample, const std::function<double(double)>& cdf);

}  // namespace rmtlab
