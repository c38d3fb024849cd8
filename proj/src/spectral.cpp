#include "rmtlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rmtlab/errors.hpp"

namespace rmtlab {

namespace {

using Complex = std::complex<double>;

Eigen::MatrixXcd shifted(const SymmetricMatrix& m, Complex z) {
  Eigen::MatrixXcd a = m.dense().cast<Complex>();
  a.diagonal().array() -= z;
  return a;
}

Eigen::MatrixXcd delete_row_col(const Eigen::MatrixXcd& a, Eigen::Index k) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXcd out(n - 1, n - 1);
  for (Eigen::Index i = 0, r = 0; i < n; ++i) {
    if (i == k) continue;
    for (Eigen::Index j = 0, c = 0; j < n; ++j) {
      if (j == k) continue;
      out(r, c++) = a(i, j);
    }
    ++r;
  }
  return out;
}

}  // namespace

SpectralSample eigen_decompose(const SymmetricMatrix& m, bool want_vectors) {
  if (m.n() == 0) throw std::invalid_argument("eigen_decompose: empty matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.dense(),
                                                    want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("eigen_decompose: eigensolver did not converge");

  SpectralSample out;
  const Eigen::VectorXd& ev = es.eigenvalues();
  out.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  if (want_vectors) {
    const Eigen::MatrixXd& u = es.eigenvectors();
    const double n = static_cast<double>(m.n());
    std::vector<double> overlaps(m.n());
    double residual = 0.0;
    for (Eigen::Index a = 0; a < u.cols(); ++a) {
      const double s = u.col(a).sum();
      overlaps[static_cast<std::size_t>(a)] = s * s / n;
      residual = std::max(residual, (m.dense() * u.col(a) - ev(a) * u.col(a)).norm());
    }
    out.overlaps = std::move(overlaps);
    out.residual = residual;
  }
  return out;
}

SpectralSample sample_spectrum(const EnsembleSpec& spec, bool want_vectors) {
  SpectralSample s = eigen_decompose(sample_matrix(spec), want_vectors);
  s.spec = spec;
  return s;
}

std::complex<double> empirical_stieltjes(const SpectralSample& s, const SpectralParam& z) {
  if (!(z.eta > 0.0)) throw std::invalid_argument("empirical_stieltjes: eta must be positive");
  if (s.n() == 0) throw std::invalid_argument("empirical_stieltjes: empty spectrum");
  Complex sum = 0.0;
  const Complex zz = z.z();
  for (double l : s.eigenvalues) sum += 1.0 / (l - zz);
  return sum / static_cast<double>(s.n());
}

std::complex<double> green_entry(const SymmetricMatrix& m, const SpectralParam& z, std::size_t i, std::size_t j) {
  if (!(z.eta > 0.0)) throw std::invalid_argument("green_entry: eta must be positive");
  if (i >= m.n() || j >= m.n()) throw std::out_of_range("green_entry: index out of range");
  const Eigen::MatrixXcd a = shifted(m, z.z());
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(a.rows());
  rhs(static_cast<Eigen::Index>(j)) = 1.0;
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  const Eigen::VectorXcd x = lu.solve(rhs);
  if (!x.allFinite() || (a * x - rhs).norm() > 1e-8 * (1.0 + x.norm())) {
    throw NumericalError("green_entry: linear solve failed; eta too small for the conditioning of M - z");
  }
  return x(static_cast<Eigen::Index>(i));
}

ResolventProbe probe_resolvent(const SymmetricMatrix& m, const SpectralParam& z,
                               std::span<const std::pair<std::size_t, std::size_t>> indices) {
  ResolventProbe probe{z, {}};
  for (const auto& ij : indices) probe.entries[ij] = green_entry(m, z, ij.first, ij.second);
  return probe;
}

std::vector<LocalLawRow> local_law_residual(const SpectralSample& s, const GridSpec& grid, double q) {
  std::vector<LocalLawRow> rows;
  if (grid.n_energy == 0 || grid.n_eta == 0) return rows;
  const double n = static_cast<double>(s.n());
  if (grid.eta_min < 1.0 / n) throw std::invalid_argument("local_law_residual: eta_min below 1/N");
  if (!(q > 0.0)) throw std::invalid_argument("local_law_residual: q must be positive");
  for (const SpectralParam& z : grid.points()) {
    LocalLawRow row;
    row.z = z;
    row.m = empirical_stieltjes(s, z);
    row.msc = m_sc(z);
    row.deviation = std::abs(row.m - row.msc);
    row.bound = std::min(1.0 / (q * q * std::sqrt(kappa(z.energy) + z.eta)), 1.0 / q) + 1.0 / (n * z.eta);
    row.ratio = row.deviation / row.bound;
    rows.push_back(row);
  }
  return rows;
}

double rigidity_Q(const SpectralSample& s, const ClassicalLocations& gammas) {
  if (s.n() < 2) throw std::invalid_argument("rigidity_Q: need at least two eigenvalues");
  if (gammas.n() != s.n()) throw std::invalid_argument("rigidity_Q: dimension mismatch");
  double q = 0.0;
  for (std::size_t a = 0; a + 1 < s.n(); ++a) {
    const double d = s.eigenvalues[a] - gammas.gamma[a];
    q += d * d;
  }
  return q;
}

std::size_t count_eigenvalues(const SpectralSample& s, double e1, double e2) {
  if (e1 > e2) throw std::invalid_argument("count_eigenvalues: E1 must not exceed E2");
  const auto lo = std::lower_bound(s.eigenvalues.begin(), s.eigenvalues.end(), e1);
  const auto hi = std::upper_bound(s.eigenvalues.begin(), s.eigenvalues.end(), e2);
  return hi > lo ? static_cast<std::size_t>(hi - lo) : 0;
}

double smoothed_count(const SpectralSample& s, double e, double e_star, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("smoothed_count: eta must be positive");
  if (e > e_star) throw std::invalid_argument("smoothed_count: E must not exceed E_star");
  double total = 0.0;
  for (double l : s.eigenvalues) total += std::atan((l - e) / eta) - std::atan((l - e_star) / eta);
  return total / std::numbers::pi;
}

ResolventIdentityReport verify_resolvent_identities(const SymmetricMatrix& m, const SpectralParam& z, double tol) {
  if (!(z.eta > 0.0)) throw std::invalid_argument("verify_resolvent_identities: eta must be positive");
  if (m.n() < 3) throw std::invalid_argument("verify_resolvent_identities: need N >= 3");
  const Eigen::Index n = static_cast<Eigen::Index>(m.n());
  const Eigen::MatrixXcd shift = shifted(m, z.z());
  const Eigen::MatrixXcd s = shift.partialPivLu().inverse();

  // minors[k](i', j') with the original labels recovered by skipping k
  std::vector<Eigen::MatrixXcd> minors;
  minors.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) minors.push_back(delete_row_col(shift, k).partialPivLu().inverse());
  auto minor = [&](Eigen::Index k, Eigen::Index i, Eigen::Index j) {
    return minors[static_cast<std::size_t>(k)](i < k ? i : i - 1, j < k ? j : j - 1);
  };

  ResolventIdentityReport rep;
  rep.tolerance = tol;
  const Eigen::MatrixXd& a = m.dense();
  for (Eigen::Index k = 0; k < n; ++k) {
    if (std::abs(s(k, k)) < 1e-13) {
      rep.degenerate += static_cast<std::size_t>((n - 1) * (n - 1));
      continue;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == k) continue;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == k) continue;
        const Complex rhs = minor(k, i, j) + s(i, k) * s(k, j) / s(k, k);
        rep.max_minor_violation = std::max(rep.max_minor_violation, std::abs(s(i, j) - rhs));
        ++rep.checks;
      }
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      Complex row = 0.0, col = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) {
        if (k != i) row += a(i, k) * minor(i, k, j);
        if (k != j) col += minor(j, i, k) * a(k, j);
      }
      rep.max_expansion_violation = std::max(rep.max_expansion_violation, std::abs(s(i, j) + s(i, i) * row));
      rep.max_expansion_violation = std::max(rep.max_expansion_violation, std::abs(s(i, j) + s(j, j) * col));
      rep.checks += 2;
    }
  }
  return rep;
}

}  // namespace rmtlab
