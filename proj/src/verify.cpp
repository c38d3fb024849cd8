#include "rmtlab/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <limits>

#include "rmtlab/dbm.hpp"
#include "rmtlab/ensembles.hpp"
#include "rmtlab/rankone.hpp"
#include "rmtlab/semicircle.hpp"
#include "rmtlab/spectral.hpp"
#include "rmtlab/stats.hpp"
#include "rmtlab/truncation.hpp"

namespace rmtlab {

namespace {

using Complex = std::complex<double>;

double uniform_in(RandomStream& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

std::size_t uniform_size(RandomStream& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.uniform() * static_cast<double>(hi - lo + 1));
}

struct ZeroNoise {
  double normal() { return 0.0; }
};

SuiteOutcome msc_identity(const VerifyOptions& opts) {
  GridSpec grid{-3.0, 3.0, 1e-3, 3.0, 100, 100};
  SuiteOutcome out;
  for (const SpectralParam& p : grid.points()) {
    const Complex z = p.z();
    const Complex m = opts.wrong_msc_branch ? m_sc_wrong_branch(z) : m_sc(z);
    double r = std::abs(m + 1.0 / (z + m));
    if (!(m.imag() > 0.0)) r = std::max(r, 1.0 - m.imag());
    out.max_residual = std::max(out.max_residual, r);
    ++out.checks;
  }
  return out;
}

SuiteOutcome nsc_derivative(const VerifyOptions&) {
  SuiteOutcome out;
  const double h = 1e-6;
  for (int k = 0; k <= 1000; ++k) {
    const double e = -1.9 + 3.8 * k / 1000.0;
    const double fd = (n_sc(e + h) - n_sc(e - h)) / (2.0 * h);
    out.max_residual = std::max(out.max_residual, std::abs(fd - rho_sc(e)));
    ++out.checks;
  }
  RandomStream rng(0x5eed0001);
  for (int k = 0; k < 10000; ++k) {
    double e1 = uniform_in(rng, -2.5, 2.5), e2 = uniform_in(rng, -2.5, 2.5);
    if (e1 > e2) std::swap(e1, e2);
    out.max_residual = std::max(out.max_residual, n_sc(e1) - n_sc(e2));
    ++out.checks;
  }
  return out;
}

SuiteOutcome classical_quantiles(const VerifyOptions&) {
  SuiteOutcome out;
  for (std::size_t n : {2u, 10u, 100u, 1000u, 10000u}) {
    const ClassicalLocations g = classical_locations(n);
    for (std::size_t a = 1; a <= n; ++a) {
      const double target = static_cast<double>(a) / static_cast<double>(n);
      out.max_residual = std::max(out.max_residual, std::abs(n_sc(g(a)) - target));
      if (a > 1 && !(g(a) > g(a - 1))) out.max_residual = std::max(out.max_residual, 1.0);
      ++out.checks;
    }
  }
  return out;
}

SuiteOutcome quantile_symmetry(const VerifyOptions&) {
  SuiteOutcome out;
  for (std::size_t n : {10u, 101u, 1000u}) {
    const ClassicalLocations g = classical_locations(n);
    for (std::size_t a = 1; a < n; ++a) {
      out.max_residual = std::max(out.max_residual, std::abs(g(a) + g(n - a)));
      ++out.checks;
    }
  }
  for (int k = 0; k <= 1000; ++k) {
    const double e = -2.5 + 5.0 * k / 1000.0;
    out.max_residual = std::max(out.max_residual, std::abs(rho_sc(e) - rho_sc(-e)));
    ++out.checks;
  }
  return out;
}

SuiteOutcome three_point_fit(const VerifyOptions&) {
  SuiteOutcome out;
  RandomStream rng(0x5eed0002);
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = uniform_size(rng, 4, 2000);
    const double dn = static_cast<double>(n);
    // draw atoms with a b >= 1/N, then fit from the moments they imply
    const double a = uniform_in(rng, 1.0 / std::sqrt(dn), 2.0);
    const double b = uniform_in(rng, 1.0 / (dn * a), 2.0 + 1.0 / (dn * a));
    const double m3 = (a - b) / dn;
    const double m4 = dn * m3 * m3 + a * b / dn;
    const ThreePointLaw law = fit_three_point(m3, m4, n);
    const double targets[4] = {0.0, 1.0 / dn, m3, m4};
    for (int j = 1; j <= 4; ++j) {
      const double scale = law.p * std::pow(law.a, j) + law.q_w * std::pow(law.b, j);
      out.max_residual = std::max(out.max_residual, std::abs(law.moment(j) - targets[j - 1]) / scale);
      ++out.checks;
    }
  }
  return out;
}

SuiteOutcome truncation_lemma(const VerifyOptions&) {
  struct Case {
    CdfAccessor law;
    double lambda;
    double m;
  };
  const Case cases[] = {
      {CdfAccessor::standard_gaussian(), 3.0, 4.0},
      {CdfAccessor::standard_gaussian(), 2.0, 4.0},
      {CdfAccessor::unit_uniform(), 1.5, 4.0},
      {CdfAccessor::two_sided_pareto(6.0), 3.0, 4.5},
  };
  SuiteOutcome out;
  for (const Case& c : cases) {
    const TruncatedLaw y = truncate_law(c.law, c.lambda, c.m);
    out.max_residual = std::max({out.max_residual, std::abs(y.mean()), std::abs(y.second_moment() - 1.0),
                                 y.change_probability() - y.change_bound(), -y.p_atom, -y.q_atom});
    // Y takes values in [-lambda, lambda] by construction; probe the map.
    for (double x : {-10.0, -c.lambda, -0.5, 0.0, 0.3, c.lambda * 0.99, 7.0}) {
      out.max_residual = std::max(out.max_residual, std::abs(y.transform(x)) - c.lambda);
    }
    out.checks += 4;
  }
  return out;
}

SuiteOutcome er_decomposition(const VerifyOptions&) {
  SuiteOutcome out;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const EnsembleSpec spec{EnsembleKind::ErdosRenyiAdjacency, 60, 3.0, 0.0, seed, 0.0};
    const SymmetricMatrix a = sample_er_adjacency(spec);
    const CenteredMatrix c = center_er(a, spec.q);
    const SymmetricMatrix back = c.h.plus_rank_one(c.f);
    out.max_residual = std::max(out.max_residual, (back.dense() - a.dense()).cwiseAbs().maxCoeff());
    ++out.checks;
  }
  return out;
}

SuiteOutcome sampler_determinism(const VerifyOptions&) {
  const EnsembleSpec specs[] = {
      {EnsembleKind::ErdosRenyiAdjacency, 40, 3.0, 0.0, 11, 0.0},
      {EnsembleKind::CenteredSparse, 40, 3.0, 1.5, 12, 0.0},
      {EnsembleKind::GOE, 40, 0.0, 2.0, 13, 0.0},
      {EnsembleKind::ThreePointShifted, 40, 3.0, 0.5, 14, 0.0},
      {EnsembleKind::Interpolated, 40, 3.0, 0.0, 15, 0.3},
  };
  SuiteOutcome out;
  for (const EnsembleSpec& s : specs) {
    const SymmetricMatrix x = sample_matrix(s), y = sample_matrix(s);
    if (!(x == y)) out.max_residual = std::max(out.max_residual, 1.0);
    if (!x.is_exactly_symmetric()) out.max_residual = std::max(out.max_residual, 1.0);
    out.checks += 2;
  }
  return out;
}

SuiteOutcome overlap_completeness(const VerifyOptions&) {
  SuiteOutcome out;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const SpectralSample s = eigen_decompose(sample_goe(5 + 3 * seed, seed), true);
    double total = 0.0;
    for (double z : *s.overlaps) total += z;
    out.max_residual = std::max(out.max_residual, std::abs(total - 1.0));
    ++out.checks;
  }
  return out;
}

SuiteOutcome stieltjes_vs_green(const VerifyOptions&) {
  SuiteOutcome out;
  RandomStream rng(0x5eed0003);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const SymmetricMatrix h = sample_goe(8, seed);
    const SpectralParam z{uniform_in(rng, -2.5, 2.5), uniform_in(rng, 0.05, 2.0)};
    const SpectralSample s = eigen_decompose(h, false);
    Complex trace = 0.0;
    for (std::size_t i = 0; i < 8; ++i) trace += green_entry(h, z, i, i);
    out.max_residual = std::max(out.max_residual, std::abs(empirical_stieltjes(s, z) - trace / 8.0));
    ++out.checks;
  }
  return out;
}

SuiteOutcome counting(const VerifyOptions&) {
  SuiteOutcome out;
  const SpectralSample s = eigen_decompose(sample_goe(60, 7), false);
  const double n = static_cast<double>(s.n());
  double prev = 0.0;
  for (int k = 0; k <= 200; ++k) {
    const double e_star = -2.0 + 4.5 * k / 200.0;
    const double c = smoothed_count(s, -2.0, e_star, 0.05);
    out.max_residual = std::max({out.max_residual, prev - c, c - n, -c});
    prev = c;
    ++out.checks;
  }
  const double inf = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 200; ++k) {
    const double x = -3.0 + 6.0 * k / 200.0;
    const double ecdf = static_cast<double>(std::upper_bound(s.eigenvalues.begin(), s.eigenvalues.end(), x) -
                                            s.eigenvalues.begin()) / n;
    out.max_residual = std::max(out.max_residual, std::abs(static_cast<double>(count_eigenvalues(s, -inf, x)) - n * ecdf));
    ++out.checks;
  }
  return out;
}

SuiteOutcome resolvent_identities(const VerifyOptions&) {
  SuiteOutcome out;
  RandomStream rng(0x5eed0004);
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const std::size_t n = uniform_size(rng, 3, 12);
    const SpectralParam z{uniform_in(rng, -2.5, 2.5), uniform_in(rng, 0.1, 1.0)};
    const ResolventIdentityReport rep = verify_resolvent_identities(sample_goe(n, sample_seed(0x4e50, k)), z);
    out.max_residual = std::max(out.max_residual, rep.max_violation());
    out.checks += rep.checks;
  }
  return out;
}

// Random rank-one instance: GOE spectrum and overlaps with f in [0.5, 4].
struct RankOneCase {
  SymmetricMatrix h;
  SpectralSample spec;
  double f;
};

RankOneCase rank_one_case(RandomStream& rng, std::uint64_t k) {
  const std::size_t n = uniform_size(rng, 1, 64);
  RankOneCase c{sample_goe(n, sample_seed(0x5ec, k)), {}, uniform_in(rng, 0.5, 4.0)};
  c.spec = eigen_decompose(c.h, true);
  return c;
}

SuiteOutcome secular_dense(const VerifyOptions&) {
  SuiteOutcome out;
  RandomStream rng(0x5eed0005);
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const RankOneCase c = rank_one_case(rng, k);
    const std::vector<double> mus = secular_eigenvalues({c.spec.eigenvalues, *c.spec.overlaps, c.f});
    const SpectralSample dense = eigen_decompose(c.h.plus_rank_one(c.f), false);
    double shift = 0.0;
    for (std::size_t a = 0; a < mus.size(); ++a) {
      out.max_residual = std::max(out.max_residual, std::abs(mus[a] - dense.eigenvalues[a]));
      shift += mus[a] - c.spec.eigenvalues[a];
    }
    out.max_residual = std::max(out.max_residual, std::abs(shift - c.f));
    out.checks += mus.size() + 1;
  }
  return out;
}

SuiteOutcome secular_interlacing(const VerifyOptions&) {
  SuiteOutcome out;
  RandomStream rng(0x5eed0006);
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const RankOneCase c = rank_one_case(rng, k);
    const std::vector<double> mus = secular_eigenvalues({c.spec.eigenvalues, *c.spec.overlaps, c.f});
    out.max_residual = std::max(out.max_residual, verify_interlacing(c.spec.eigenvalues, mus).worst_violation);
    ++out.checks;
  }
  return out;
}

SuiteOutcome secular_monotone(const VerifyOptions&) {
  SuiteOutcome out;
  RandomStream rng(0x5eed0007);
  for (std::uint64_t k = 0; k < 200; ++k) {
    const RankOneCase c = rank_one_case(rng, k);
    std::vector<double> prev;
    for (double f : {0.5, 1.0, 2.0, 4.0}) {
      std::vector<double> mus = secular_eigenvalues({c.spec.eigenvalues, *c.spec.overlaps, f});
      for (std::size_t a = 0; a < prev.size(); ++a) out.max_residual = std::max(out.max_residual, prev[a] - mus[a]);
      prev = std::move(mus);
      ++out.checks;
    }
  }
  return out;
}

SuiteOutcome log_delta_regularity(const VerifyOptions&) {
  SuiteOutcome out;
  for (double delta : {1e-1, 1e-3, 1e-6}) {
    const LogDelta at = log_delta(delta, delta);
    const LogDelta below = log_delta(std::nextafter(delta, 0.0), delta);
    out.max_residual = std::max({out.max_residual, std::abs(at.value - below.value),
                                 delta * std::abs(at.derivative - below.derivative)});
    // concavity and the lower bound -1/delta^2 on the second derivative
    const double h = delta / 16.0;
    for (int k = -200; k <= 200; ++k) {
      const double x = delta + k * h;
      const double d2 = log_delta(x + h, delta).value - 2.0 * log_delta(x, delta).value + log_delta(x - h, delta).value;
      out.max_residual = std::max({out.max_residual, d2 - 1e-10, -d2 / (h * h) * delta * delta - 1.0 - 1e-6});
      ++out.checks;
    }
  }
  return out;
}

SuiteOutcome dbm_center_of_mass(const VerifyOptions&) {
  SuiteOutcome out;
  RandomStream rng(0x5eed0008);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = uniform_size(rng, 2, 40);
    DbmState s;
    for (std::size_t i = 0; i < n; ++i) s.x.push_back(uniform_in(rng, -2.0, 2.0));
    std::sort(s.x.begin(), s.x.end());
    ZeroNoise zero;
    const double dt = 1e-4;
    const DbmState next = dbm_step(s, dt, 0.5 / static_cast<double>(n), zero);
    const double before = mean(s.x), after = mean(next.x);
    out.max_residual = std::max(out.max_residual, std::abs(after - before * (1.0 - dt / 4.0)));
    ++out.checks;
  }
  return out;
}

SuiteOutcome ks_properties(const VerifyOptions&) {
  SuiteOutcome out;
  RandomStream rng(0x5eed0009);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(uniform_size(rng, 1, 60)), b(uniform_size(rng, 1, 60));
    for (double& v : a) v = rng.normal();
    for (double& v : b) v = 0.3 + rng.normal();
    const double d = ks_two_sample(a, b);
    std::vector<double> ta(a), tb(b);
    for (double& v : ta) v = std::atan(v);
    for (double& v : tb) v = std::atan(v);
    out.max_residual = std::max({out.max_residual, std::abs(d - ks_two_sample(b, a)), std::abs(d - ks_two_sample(ta, tb))});
    out.checks += 2;
  }
  return out;
}

SuiteOutcome spacing_scaling(const VerifyOptions&) {
  SuiteOutcome out;
  const SpectralSample s = eigen_decompose(sample_goe(100, 3), false);
  const double scale = 100.0 * rho_sc(0.0);
  const std::vector<double> base = normalized_gaps(s.eigenvalues, -0.5, 0.5, scale);
  for (double c : {0.25, 3.0, 17.5}) {
    std::vector<double> x(s.eigenvalues);
    for (double& v : x) v *= c;
    const std::vector<double> g = normalized_gaps(x, -0.5 * c, 0.5 * c, scale / c);
    if (g.size() != base.size()) {
      out.max_residual = std::max(out.max_residual, 1.0);
      continue;
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
      out.max_residual = std::max(out.max_residual, std::abs(g[i] - base[i]) / base[i]);
    }
    out.checks += g.size();
  }
  return out;
}

}  // namespace

const std::vector<VerifySuite>& verify_registry() {
  static const std::vector<VerifySuite> suites = {
      {"msc-identity", "m_sc + 1/(z + m_sc) = 0 with Im m_sc > 0 on 10^4 grid points", 1e-12, msc_identity},
      {"nsc-derivative", "n_sc' = rho_sc by central differences; n_sc monotone", 1e-6, nsc_derivative},
      {"classical-locations", "n_sc(gamma_a) = a/N and gamma strictly increasing, N <= 10^4", 1e-10,
       classical_quantiles},
      {"quantile-symmetry", "gamma_a = -gamma_{N-a} and rho_sc even", 1e-7, quantile_symmetry},
      {"three-point-fit", "fitted three-point law reproduces its four target moments", 1e-12, three_point_fit},
      {"truncation", "E Y = 0, E Y^2 = 1, |Y| <= lambda, P(X != Y) within the moment bound", 1e-8,
       truncation_lemma},
      {"er-decomposition", "centred ER part plus f|e><e| rebuilds A", 1e-15, er_decomposition},
      {"sampler-determinism", "samplers are bit-reproducible and exactly symmetric", 0.0, sampler_determinism},
      {"overlap-completeness", "overlaps with e sum to 1", 1e-10, overlap_completeness},
      {"stieltjes-vs-green", "m(z) equals the normalised trace of G(z)", 1e-10, stieltjes_vs_green},
      {"counting", "smoothed counts monotone and bounded by N; exact count matches N * ECDF", 1e-12, counting},
      {"resolvent-identities", "row expansion and minor identities on 10^3 instances", 1e-9,
       resolvent_identities},
      {"secular-vs-dense", "secular roots match the dense eigensolver; trace shifts by f", 1e-8, secular_dense},
      {"interlacing", "lambda_a <= mu_a <= lambda_{a+1} on every secular solution", 1e-10, secular_interlacing},
      {"secular-monotone-f", "each mu_a nondecreasing in f", 1e-12, secular_monotone},
      {"log-delta", "log_delta continuous at delta, concave, curvature >= -1/delta^2", 1e-13,
       log_delta_regularity},
      {"dbm-center-of-mass", "zero-noise step moves the mean by -mean/4 dt", 1e-12, dbm_center_of_mass},
      {"ks-properties", "KS symmetric and invariant under a common monotone map", 1e-15, ks_properties},
      {"spacing-scaling", "normalised gaps invariant under joint rescaling", 1e-12, spacing_scaling},
  };
  return suites;
}

std::vector<SuiteResult> run_verify(const VerifyOptions& opts) {
  std::vector<SuiteResult> results;
  for (const VerifySuite& suite : verify_registry()) {
    SuiteResult r;
    r.name = suite.name;
    r.threshold = suite.threshold;
    const auto start = std::chrono::steady_clock::now();
    try {
      const SuiteOutcome o = suite.run(opts);
      r.max_residual = o.max_residual;
      r.checks = o.checks;
    } catch (const std::exception& ex) {
      r.error = ex.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace rmtlab
