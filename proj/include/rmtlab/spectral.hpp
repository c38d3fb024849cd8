#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rmtlab/ensembles.hpp"
#include "rmtlab/matrix.hpp"
#include "rmtlab/semicircle.hpp"

namespace rmtlab {

/// Ascending eigenvalues, optionally with squared overlaps |<u_a, e>|^2
/// against the flat unit vector e.
struct SpectralSample {
  std::vector<double> eigenvalues;
  std::optional<std::vector<double>> overlaps;
  std::optional<EnsembleSpec> spec;
  double residual = 0.0;  // max ||M v - lambda v||, zero when no vectors were computed

  std::size_t n() const noexcept { return eigenvalues.size(); }
};

/// Symmetric eigensolver (Householder tridiagonalisation + implicit QR,
/// delegated to Eigen). Throws NumericalError if the iteration fails.
SpectralSample eigen_decompose(const SymmetricMatrix& m, bool want_vectors);

/// Spectrum of a freshly sampled matrix of `spec`, tagged with the spec.
SpectralSample sample_spectrum(const EnsembleSpec& spec, bool want_vectors = false);

/// m(z) = (1/N) sum_i 1/(lambda_i - z).
std::complex<double> empirical_stieltjes(const SpectralSample& s, const SpectralParam& z);

/// G_ij(z) = ((M - z)^{-1})_ij via an LU solve against column j.
std::complex<double> green_entry(const SymmetricMatrix& m, const SpectralParam& z, std::size_t i, std::size_t j);

/// Selected resolvent entries at one spectral parameter.
struct ResolventProbe {
  SpectralParam z;
  std::map<std::pair<std::size_t, std::size_t>, std::complex<double>> entries;
};

ResolventProbe probe_resolvent(const SymmetricMatrix& m, const SpectralParam& z,
                               std::span<const std::pair<std::size_t, std::size_t>> indices);

struct LocalLawRow {
  SpectralParam z;
  std::complex<double> m;
  std::complex<double> msc;
  double deviation = 0.0;  // |m - m_sc|
  double bound = 0.0;      // min{1/(q^2 sqrt(kappa_E + eta)), 1/q} + 1/(N eta)
  double ratio = 0.0;      // deviation / bound
};

/// Local semicircle law residuals on a grid, with the polylog prefactors of
/// the high-probability bound dropped.
std::vector<LocalLawRow> local_law_residual(const SpectralSample& s, const GridSpec& grid, double q);

/// Q = sum_{a < N} (mu_a - gamma_a)^2. The top eigenvalue is excluded.
double rigidity_Q(const SpectralSample& s, const ClassicalLocations& gammas);

/// Number of eigenvalues in the closed interval [e1, e2].
std::size_t count_eigenvalues(const SpectralSample& s, double e1, double e2);

/// tr (1_[E, E_star] * theta_eta)(H) in closed form:
/// sum_a (1/pi)[atan((lambda_a - E)/eta) - atan((lambda_a - E_star)/eta)].
double smoothed_count(const SpectralSample& s, double e, double e_star, double eta);

struct ResolventIdentityReport {
  double max_expansion_violation = 0.0;  // S_ij = -S_ii sum_k a_ik S^(i)_kj and its mirror
  double max_minor_violation = 0.0;      // S_ij = S^(k)_ij + S_ik S_kj / S_kk
  std::size_t checks = 0;
  std::size_t degenerate = 0;  // triples skipped because |S_kk| < 1e-13
  double tolerance = 0.0;

  double max_violation() const { return std::max(max_expansion_violation, max_minor_violation); }
  bool passed() const { return max_violation() <= tolerance; }
};

/// Checks the row-expansion and minor resolvent identities for every
/// admissible index pair/triple. Minors S^(k) delete row and column k and keep
/// the original labels.
ResolventIdentityReport verify_resolvent_identities(const SymmetricMatrix& m, const SpectralParam& z, double tol = 1e-9);

}  // namespace rmtlab
