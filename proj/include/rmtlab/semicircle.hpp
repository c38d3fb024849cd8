#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace rmtlab {

/// Spectral parameter z = E + i*eta with eta > 0.
struct SpectralParam {
  double energy = 0.0;
  double eta = 1.0;

  std::complex<double> z() const noexcept { return {energy, eta}; }
};

/// Semicircle density (1/2pi) sqrt(4 - E^2), zero off [-2, 2].
double rho_sc(double e) noexcept;

/// Integrated semicircle density, in [0, 1].
double n_sc(double e) noexcept;

/// Stieltjes transform of the semicircle law: the root of
/// m + 1/(z + m) = 0 with Im m > 0 for Im z > 0.
std::complex<double> m_sc(std::complex<double> z);
std::complex<double> m_sc(const SpectralParam& z);

/// Same quadratic, other root. Exists so that `verify` can exercise a
/// deliberately wrong branch; never use it for physics.
std::complex<double> m_sc_wrong_branch(std::complex<double> z);

/// Poisson kernel eta / (pi (x^2 + eta^2)).
double theta_eta(double x, double eta);

/// Distance to the nearest spectral edge, | |x| - 2 |.
double kappa(double x) noexcept;

/// Semicircle quantiles gamma_1 < ... < gamma_N with n_sc(gamma_a) = a/N.
struct ClassicalLocations {
  std::vector<double> gamma;

  std::size_t n() const noexcept { return gamma.size(); }
  /// 1-based access, matching the usual eigenvalue labels.
  double operator()(std::size_t alpha) const { return gamma.at(alpha - 1); }
};

/// Bisection on [-2, 2] to |n_sc(gamma) - a/N| <= tol. gamma_N is exactly 2.
/// Throws NumericalError if bisection stalls before reaching tol.
ClassicalLocations classical_locations(std::size_t n, double tol = 1e-12);

/// Rectangular grid of spectral parameters; eta is spaced logarithmically.
struct GridSpec {
  double e_min = -3.0;
  double e_max = 3.0;
  double eta_min = 0.01;
  double eta_max = 3.0;
  std::size_t n_energy = 0;
  std::size_t n_eta = 0;

  void validate() const;
  std::vector<SpectralParam> points() const;
};

}  // namespace rmtlab
