#include "rmtlab/truncation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rmtlab/errors.hpp"

namespace rmtlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class F>
double integrate_tail(const F& f, double a, double b) {
  thread_local boost::math::quadrature::exp_sinh<double> half_line;
  // Far out, polynomial weights overflow while the tail factor underflows to
  // zero; the product there is zero.
  const auto g = [&f](double x) {
    const double v = f(x);
    return std::isfinite(v) ? v : 0.0;
  };
  return half_line.integrate(g, a, b, 1e-14, nullptr, nullptr, nullptr);
}

// Bounded pieces use adaptive Gauss-Kronrod. A half-line is split 16 units
// past its finite end, so kinks of compactly supported laws stay in the
// Kronrod part (which bisects down to them) and only a smooth tail is left to
// exp-sinh. `depth` caps the Kronrod bisection.
template <class F>
double integrate(const F& f, double a, double b, unsigned depth = 20) {
  if (!(a < b)) return 0.0;
  if (std::isinf(a) && std::isinf(b)) throw std::invalid_argument("integrate: at most one infinite limit");
  if (std::isinf(b)) return integrate(f, a, a + 16.0, depth) + integrate_tail(f, a + 16.0, b);
  if (std::isinf(a)) return integrate_tail(f, a, b - 16.0) + integrate(f, b - 16.0, b, depth);
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, depth, 1e-13);
}

// Core integrands are CDF differences over [-a, a] with a possibly tiny; their
// roundoff is large relative to the integral, so a deep bisection would only
// chase noise. Cores never contain a kink other than at 0, where they are split.
constexpr unsigned kCoreDepth = 6;

// Partial moments of X written through the CDF only (integration by parts).
// Every integrand is nonnegative, so no term suffers cancellation.
struct PartialMoments {
  const CdfAccessor& law;

  // E[X ; X > c], E[X^2 ; X > c] for c >= 0
  double upper_first(double c) const {
    return c * law.survival(c) + integrate([&](double x) { return law.survival(x); }, c, kInf);
  }
  double upper_second(double c) const {
    return c * c * law.survival(c) + integrate([&](double x) { return 2.0 * x * law.survival(x); }, c, kInf);
  }
  // E[X ; X < -c], E[X^2 ; X < -c] for c >= 0
  double lower_first(double c) const {
    return -c * law.cdf(-c) - integrate([&](double x) { return law.cdf(x); }, -kInf, -c);
  }
  double lower_second(double c) const {
    return c * c * law.cdf(-c) + integrate([&](double x) { return -2.0 * x * law.cdf(x); }, -kInf, -c);
  }
  // E[X ; |X| <= a], E[X^2 ; |X| <= a]
  double core_first(double a) const {
    if (a <= 0.0) return 0.0;
    const double fa = law.cdf(a), fma = law.cdf(-a);
    return integrate([&](double x) { return fa - law.cdf(x); }, 0.0, a, kCoreDepth) -
           integrate([&](double x) { return law.cdf(x) - fma; }, -a, 0.0, kCoreDepth);
  }
  double core_second(double a) const {
    if (a <= 0.0) return 0.0;
    const double fa = law.cdf(a), fma = law.cdf(-a);
    return integrate([&](double x) { return 2.0 * x * (fa - law.cdf(x)); }, 0.0, a, kCoreDepth) +
           integrate([&](double x) { return -2.0 * x * (law.cdf(x) - fma); }, -a, 0.0, kCoreDepth);
  }
  double core_mass(double a) const { return a <= 0.0 ? 0.0 : law.cdf(a) - law.cdf(-a); }
  double abs_moment(double m) const {
    return integrate([&](double x) { return m * std::pow(x, m - 1.0) * (law.survival(x) + law.cdf(-x)); }, 0.0,
                     kInf);
  }
};

// a_t with P(|X| <= a_t) = t.
double solve_core_radius(const PartialMoments& pm, double t) {
  if (t <= 0.0) return 0.0;
  double lo = 0.0, hi = 1.0;
  for (int i = 0; pm.core_mass(hi) < t; ++i) {
    if (i > 200) throw NumericalError("truncate_law: could not bracket a_t");
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (pm.core_mass(mid) < t ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

CdfAccessor CdfAccessor::standard_gaussian() {
  return {[](double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); },
          [](double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }};
}

CdfAccessor CdfAccessor::unit_uniform() {
  const double w = std::sqrt(3.0);
  return {[w](double x) { return std::clamp((x + w) / (2.0 * w), 0.0, 1.0); },
          [w](double x) { return std::clamp((w - x) / (2.0 * w), 0.0, 1.0); }};
}

CdfAccessor CdfAccessor::two_sided_pareto(double shape) {
  if (!(shape > 2.0)) throw std::invalid_argument("two_sided_pareto: shape must exceed 2");
  const double s = std::sqrt((shape - 1.0) * (shape - 2.0) / 2.0);
  auto half_tail = [s, shape](double x) { return 0.5 * std::pow(1.0 + std::abs(x) / s, -shape); };
  return {[half_tail](double x) { return x < 0.0 ? half_tail(x) : 1.0 - half_tail(x); },
          [half_tail](double x) { return x > 0.0 ? half_tail(x) : 1.0 - half_tail(x); }};
}

double CdfAccessor::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("quantile: u must lie in (0, 1)");
  double lo = -1.0, hi = 1.0;
  while (cdf(lo) > u) lo *= 2.0;
  while (cdf(hi) < u) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (cdf(mid) < u ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double TruncatedLaw::mean() const { return -(tail_mean + core_mean) + lambda * (p_atom - q_atom); }

double TruncatedLaw::second_moment() const {
  return 1.0 - (tail_second + core_second) + lambda * lambda * (p_atom + q_atom);
}

double TruncatedLaw::change_bound() const { return 2.0 * abs_moment_m * std::pow(lambda, -m); }

double TruncatedLaw::transform(double x) const {
  const double upper = source.survival(lambda);
  double u;
  if (x > lambda) {
    u = upper - source.survival(x);
  } else if (t0 > 0.0 && std::abs(x) <= a_t) {
    u = upper + source.cdf(x) - source.cdf(-a_t);
  } else if (x < -lambda) {
    u = upper + t0 + source.cdf(x);
  } else {
    return x;
  }
  return u < p_atom ? lambda : -lambda;
}

TruncatedLaw truncate_law(const CdfAccessor& x, double lambda, double m, double tol) {
  if (!x.cdf) throw std::invalid_argument("truncate_law: missing CDF");
  if (!(lambda > 0.0)) throw std::invalid_argument("truncate_law: lambda must be positive");
  if (!(m > 2.0)) throw std::invalid_argument("truncate_law: m must exceed 2");
  const PartialMoments pm{x};

  const double mean = pm.upper_first(0.0) + pm.lower_first(0.0);
  const double var = pm.upper_second(0.0) + pm.lower_second(0.0);
  if (std::abs(mean) > 1e-8 || std::abs(var - 1.0) > 1e-8) {
    char msg[128];
    std::snprintf(msg, sizeof msg, "truncate_law: X must have mean 0 and variance 1 (got %.3e, %.12g)", mean, var);
    throw std::invalid_argument(msg);
  }

  TruncatedLaw out;
  out.source = x;
  out.lambda = lambda;
  out.m = m;
  out.abs_moment_m = pm.abs_moment(m);
  out.tail_mass = x.survival(lambda) + x.cdf(-lambda);
  out.tail_mean = pm.upper_first(lambda) + pm.lower_first(lambda);
  out.tail_second = pm.upper_second(lambda) + pm.lower_second(lambda);

  const double l2 = lambda * lambda;
  // alpha(t) - gamma(t): removed mass minus the mass the +-lambda atoms need
  // to restore the second moment.
  auto excess = [&](double t) {
    const double a = solve_core_radius(pm, t);
    return out.tail_mass + t - (out.tail_second + pm.core_second(a)) / l2;
  };

  double t0 = 0.0;
  const double h0 = excess(0.0);
  if (h0 < -tol) {
    double lo = 0.0, hi = 0.5;
    if (excess(hi) < 0.0) throw NumericalError("truncate_law: no sign change of alpha - gamma on [0, 1/2]");
    bool converged = false;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      const double h = excess(mid);
      t0 = mid;
      if (std::abs(h) <= tol) {
        converged = true;
        break;
      }
      if (mid <= lo || mid >= hi) break;
      (h < 0.0 ? lo : hi) = mid;
    }
    if (!converged) throw NumericalError("truncate_law: bisection for t0 did not reach tolerance");
  }

  out.t0 = t0;
  out.a_t = solve_core_radius(pm, t0);
  out.core_mean = pm.core_first(out.a_t);
  out.core_second = pm.core_second(out.a_t);

  const double alpha = out.tail_mass + t0;
  const double beta = (out.tail_mean + out.core_mean) / lambda;
  double p = 0.5 * (alpha + beta);
  double q = 0.5 * (alpha - beta);
  if (p < -1e-12 || q < -1e-12) {
    throw NumericalError("truncate_law: negative atom weight; the CDF violates the preconditions");
  }
  out.p_atom = std::max(p, 0.0);
  out.q_atom = std::max(q, 0.0);
  return out;
}

}  // namespace rmtlab
