#pragma once

#include <functional>

namespace rmtlab {

/// Distribution of an absolutely continuous real random variable, given by
/// its CDF. `sf` is the survival function 1 - cdf; supplying it keeps upper
/// tail integrals accurate.
struct CdfAccessor {
  std::function<double(double)> cdf;
  std::function<double(double)> sf;

  static CdfAccessor standard_gaussian();
  /// Uniform on [-sqrt(3), sqrt(3)] (mean 0, variance 1).
  static CdfAccessor unit_uniform();
  /// Symmetrised Lomax law with tail index `shape` (> 2), scaled to unit
  /// variance; E|X|^m is finite exactly for m < shape.
  static CdfAccessor two_sided_pareto(double shape);

  double survival(double x) const { return sf ? sf(x) : 1.0 - cdf(x); }
  /// Numeric inverse of the CDF by bisection.
  double quantile(double u) const;
};

/// Output of the truncation construction: Y equals X off the removed set
/// I = (-inf, -lambda) u [-a_t, a_t] u (lambda, inf), and +-lambda on it.
struct TruncatedLaw {
  double lambda = 0.0;
  double t0 = 0.0;       // P(|X| <= a_t)
  double a_t = 0.0;
  double p_atom = 0.0;   // P(Y = +lambda)
  double q_atom = 0.0;   // P(Y = -lambda)

  // Tail quantities P(|X| > lambda), E[X; |X| > lambda], E[X^2; |X| > lambda].
  double tail_mass = 0.0;
  double tail_mean = 0.0;
  double tail_second = 0.0;
  // E[X; |X| <= a_t], E[X^2; |X| <= a_t].
  double core_mean = 0.0;
  double core_second = 0.0;

  double m = 0.0;
  double abs_moment_m = 0.0;  // E|X|^m, the constant C_m

  CdfAccessor source;

  /// E Y and E Y^2 of the constructed law, from the quadrature values.
  double mean() const;
  double second_moment() const;
  /// P(X != Y) = p + q.
  double change_probability() const { return p_atom + q_atom; }
  /// 2 C_m lambda^{-m}.
  double change_bound() const;

  /// Y as a function of X. The removed set is split canonically: the +lambda
  /// atom takes the upper tail first, then [-a_t, a_t] in ascending order,
  /// then the lower tail; whatever remains maps to -lambda.
  double transform(double x) const;
};

/// Builds the bounded variable Y of the truncation lemma: |Y| <= lambda,
/// E Y = 0, E Y^2 = 1, P(X != Y) <= 2 E|X|^m lambda^{-m}. `tol` bounds the
/// residual of the scalar equation solved for t0. Throws NumericalError when
/// the bisection fails or an atom weight comes out negative.
TruncatedLaw truncate_law(const CdfAccessor& x, double lambda, double m, double tol = 1e-14);

}  // namespace rmtlab
