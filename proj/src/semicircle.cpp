#include "rmtlab/semicircle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "rmtlab/errors.hpp"

namespace rmtlab {

using std::numbers::pi;

double rho_sc(double e) noexcept {
  return std::sqrt(std::max(4.0 - e * e, 0.0)) / (2.0 * pi);
}

double n_sc(double e) noexcept {
  if (e <= -2.0) return 0.0;
  if (e >= 2.0) return 1.0;
  const double v = 0.5 + e * std::sqrt(4.0 - e * e) / (4.0 * pi) + std::asin(e / 2.0) / pi;
  return std::clamp(v, 0.0, 1.0);
}

std::complex<double> m_sc(std::complex<double> z) {
  if (!(z.imag() > 0.0)) throw std::invalid_argument("m_sc: Im z must be positive");
  // The two roots of m^2 + z m + 1 = 0 multiply to 1; the semicircle branch is
  // the one inside the unit disk. Taking the reciprocal of the larger root
  // avoids cancellation for large |z|.
  const std::complex<double> s = std::sqrt(z - 2.0) * std::sqrt(z + 2.0);
  const std::complex<double> r1 = 0.5 * (-z + s);
  const std::complex<double> r2 = 0.5 * (-z - s);
  std::complex<double> m = 1.0 / (std::abs(r1) > std::abs(r2) ? r1 : r2);
  if (!(m.imag() > 0.0)) m = -z - m;
  return m;
}

std::complex<double> m_sc(const SpectralParam& z) {
  if (!(z.eta > 0.0)) throw std::invalid_argument("m_sc: eta must be positive");
  return m_sc(z.z());
}

std::complex<double> m_sc_wrong_branch(std::complex<double> z) { return -z - m_sc(z); }

double theta_eta(double x, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("theta_eta: eta must be positive");
  return eta / (pi * (x * x + eta * eta));
}

double kappa(double x) noexcept { return std::abs(std::abs(x) - 2.0); }

ClassicalLocations classical_locations(std::size_t n, double tol) {
  if (n == 0) throw std::invalid_argument("classical_locations: n must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("classical_locations: tol must be positive");
  ClassicalLocations out;
  out.gamma.resize(n);
  const double dn = static_cast<double>(n);
  for (std::size_t alpha = 1; alpha < n; ++alpha) {
    const double target = static_cast<double>(alpha) / dn;
    double lo = -2.0, hi = 2.0, mid = 0.0;
    bool done = false;
    for (int iter = 0; iter < 200; ++iter) {
      mid = 0.5 * (lo + hi);
      const double r = n_sc(mid) - target;
      if (std::abs(r) <= tol) {
        done = true;
        break;
      }
      if (mid <= lo || mid >= hi) break;
      (r < 0.0 ? lo : hi) = mid;
    }
    if (!done) {
      throw NumericalError("classical_locations: bisection stalled at alpha=" + std::to_string(alpha) +
                           "; tolerance too tight for double precision");
    }
    out.gamma[alpha - 1] = mid;
  }
  out.gamma[n - 1] = 2.0;
  return out;
}

void GridSpec::validate() const {
  if (!(eta_min > 0.0)) throw std::invalid_argument("GridSpec: eta_min must be positive");
  if (!(eta_max >= eta_min)) throw std::invalid_argument("GridSpec: eta_max < eta_min");
  if (!(e_min < e_max)) throw std::invalid_argument("GridSpec: e_min must be below e_max");
}

std::vector<SpectralParam> GridSpec::points() const {
  validate();
  std::vector<SpectralParam> pts;
  pts.reserve(n_energy * n_eta);
  const double log_lo = std::log(eta_min), log_hi = std::log(eta_max);
  for (std::size_t a = 0; a < n_energy; ++a) {
    const double e = n_energy == 1 ? 0.5 * (e_min + e_max)
                                   : e_min + (e_max - e_min) * static_cast<double>(a) / static_cast<double>(n_energy - 1);
    for (std::size_t b = 0; b < n_eta; ++b) {
      const double eta = n_eta == 1 ? eta_min
                                    : std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(b) / static_cast<double>(n_eta - 1));
      pts.push_back({e, eta});
    }
  }
  return pts;
}

}  // namespace rmtlab
