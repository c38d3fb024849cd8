#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "doctest.h"
#include "rmtlab/ensembles.hpp"
#include "rmtlab/errors.hpp"
#include "rmtlab/rng.hpp"
#include "rmtlab/spectral.hpp"
#include "rmtlab/stats.hpp"

using namespace rmtlab;
using Complex = std::complex<double>;

namespace {

SymmetricMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd d(n, n);
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) d(i, j++) = v;
    ++i;
  }
  return SymmetricMatrix::from_dense(d);
}

SpectralSample spectrum_of(std::vector<double> eigenvalues) {
  SpectralSample s;
  s.eigenvalues = std::move(eigenvalues);
  return s;
}

SymmetricMatrix random_symmetric(std::size_t n, std::uint64_t seed) {
  return sample_goe(n, seed);
}

}  // namespace

TEST_CASE("eigen_decompose") {
  const SpectralSample d = eigen_decompose(from_rows({{3, 0, 0}, {0, 1, 0}, {0, 0, 2}}), false);
  CHECK(d.eigenvalues == std::vector<double>{1.0, 2.0, 3.0});
  CHECK_FALSE(d.overlaps.has_value());

  const SpectralSample x = eigen_decompose(from_rows({{0, 1}, {1, 0}}), true);
  CHECK(x.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(x.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-15));
  REQUIRE(x.overlaps.has_value());
  CHECK(std::abs((*x.overlaps)[0]) < 1e-15);
  CHECK((*x.overlaps)[1] == doctest::Approx(1.0).epsilon(1e-15));

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SymmetricMatrix m = random_symmetric(8, seed);
    const SpectralSample s = eigen_decompose(m, true);
    double sum = 0.0, overlap_sum = 0.0;
    for (double l : s.eigenvalues) sum += l;
    for (double z : *s.overlaps) {
      CHECK(z >= 0.0);
      CHECK(z <= 1.0 + 1e-12);
      overlap_sum += z;
    }
    CHECK(std::abs(sum - m.dense().trace()) <= 1e-10);
    CHECK(std::abs(overlap_sum - 1.0) <= 1e-10);
    CHECK(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()));
    CHECK(s.residual <= 1e-10 * std::max(1.0, std::abs(s.eigenvalues.back())));
  }
  CHECK_THROWS_AS(eigen_decompose(SymmetricMatrix(), false), std::invalid_argument);
}

TEST_CASE("empirical Stieltjes transform") {
  CHECK(std::abs(empirical_stieltjes(spectrum_of({0.0}), {0.0, 1.0}) - Complex(0, 1)) < 1e-15);
  CHECK(std::abs(empirical_stieltjes(spectrum_of({-1.0, 1.0}), {0.0, 1.0}) - Complex(0, 0.5)) < 1e-15);
  const SpectralSample s = eigen_decompose(random_symmetric(30, 4), false);
  for (double e : {-3.0, -1.0, 0.0, 0.7, 2.5}) {
    for (double eta : {1e-3, 0.1, 2.0}) CHECK(empirical_stieltjes(s, {e, eta}).imag() > 0.0);
  }
  CHECK_THROWS_AS(empirical_stieltjes(s, {0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("green entries") {
  CHECK(std::abs(green_entry(SymmetricMatrix(1), {0.0, 1.0}, 0, 0) - Complex(0, 1)) < 1e-15);
  const SymmetricMatrix diag = from_rows({{1, 0, 0}, {0, -2, 0}, {0, 0, 0.5}});
  CHECK(std::abs(green_entry(diag, {0.3, 0.2}, 0, 2)) == 0.0);
  CHECK(std::abs(green_entry(diag, {0.3, 0.2}, 1, 1) - 1.0 / (Complex(-2.0) - Complex(0.3, 0.2))) < 1e-15);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SymmetricMatrix m = random_symmetric(6, 100 + seed);
    const SpectralParam z{0.2, 0.3};
    Complex trace = 0.0;
    for (std::size_t i = 0; i < 6; ++i) trace += green_entry(m, z, i, i);
    CHECK(std::abs(trace / 6.0 - empirical_stieltjes(eigen_decompose(m, false), z)) <= 1e-10);
    CHECK(std::abs(green_entry(m, z, 1, 4) - green_entry(m, z, 4, 1)) <= 1e-10);
  }

  const std::vector<std::pair<std::size_t, std::size_t>> idx{{0, 1}, {2, 2}};
  const ResolventProbe p = probe_resolvent(diag, {0.0, 1.0}, idx);
  CHECK(p.entries.size() == 2);
  CHECK_THROWS_AS(green_entry(diag, {0.0, 1.0}, 3, 0), std::out_of_range);
}

TEST_CASE("local law residual") {
  const SpectralSample s = sample_spectrum({EnsembleKind::GOE, 200, 0.0, 0.0, 8, 0.0});
  GridSpec far{10.0, 11.0, 1.0, 1.0, 1, 1};
  const auto rows = local_law_residual(s, far, 1.0);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].deviation <= 0.05);

  CHECK(local_law_residual(s, GridSpec{}, 1.0).empty());
  CHECK_THROWS_AS(local_law_residual(s, GridSpec{-1, 1, 1e-3, 1, 3, 3}, 1.0), std::invalid_argument);

  const double q = std::sqrt(400.0);
  const GridSpec grid{-3.0, 3.0, 0.01, 3.0, 25, 8};
  std::vector<double> ratios;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    for (const LocalLawRow& r : local_law_residual(sample_spectrum({EnsembleKind::GOE, 400, 0.0, 0.0, seed, 0.0}), grid, q)) {
      CHECK(std::isfinite(r.ratio));
      ratios.push_back(r.ratio);
    }
  }
  CHECK(quantile(ratios, 0.95) < 50.0);
}

TEST_CASE("rigidity statistic") {
  const ClassicalLocations g = classical_locations(6);
  CHECK(rigidity_Q(spectrum_of(g.gamma), g) == 0.0);
  const ClassicalLocations g2 = classical_locations(2);
  CHECK(rigidity_Q(spectrum_of({g2.gamma[0] + 0.1, g2.gamma[1] + 5.0}), g2) == doctest::Approx(0.01).epsilon(1e-12));
  CHECK_THROWS_AS(rigidity_Q(spectrum_of({0.0, 1.0, 2.0}), g2), std::invalid_argument);
  CHECK_THROWS_AS(rigidity_Q(spectrum_of({0.0}), classical_locations(1)), std::invalid_argument);

  auto median_q = [](std::size_t n) {
    const ClassicalLocations gam = classical_locations(n);
    std::vector<double> qs;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      qs.push_back(rigidity_Q(sample_spectrum({EnsembleKind::GOE, n, 0.0, 0.0, seed, 0.0}), gam));
    }
    return median(qs);
  };
  CHECK(median_q(500) < median_q(125));
}

TEST_CASE("eigenvalue counting") {
  const SpectralSample s = spectrum_of({-1.5, -0.2, 0.1, 0.9, 1.7});
  CHECK(count_eigenvalues(s, -10.0, 10.0) == 5);
  CHECK(count_eigenvalues(s, 0.2, 0.8) == 0);
  CHECK(count_eigenvalues(s, 0.1, 0.9) == 2);  // closed interval
  CHECK_THROWS_AS(count_eigenvalues(s, 1.0, 0.0), std::invalid_argument);

  RandomStream rng(77);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> ev(1 + trial % 17);
    for (double& v : ev) v = std::round(8.0 * (2.0 * rng.uniform() - 1.0)) / 4.0;  // ties on purpose
    std::sort(ev.begin(), ev.end());
    double e1 = std::round(8.0 * (2.0 * rng.uniform() - 1.0)) / 4.0;
    double e2 = std::round(8.0 * (2.0 * rng.uniform() - 1.0)) / 4.0;
    if (e1 > e2) std::swap(e1, e2);
    std::size_t brute = 0;
    for (double v : ev) brute += (v >= e1 && v <= e2) ? 1 : 0;
    CHECK(count_eigenvalues(spectrum_of(ev), e1, e2) == brute);
  }

  // N times the empirical CDF
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(count_eigenvalues(s, -inf, 0.0) == 2);
  CHECK(count_eigenvalues(s, -inf, 1.7) == 5);
}

TEST_CASE("smoothed counting") {
  CHECK(smoothed_count(spectrum_of({}), 0.0, 1.0, 0.1) == 0.0);
  const double eta = 1e-3;
  CHECK(std::abs(smoothed_count(spectrum_of({5.0}), 5.0 - 5e3 * eta, 5.0 + 5e3 * eta, eta) - 1.0) <= 1e-3);

  const SpectralSample s = spectrum_of({-1.0, 0.0, 1.0, 2.0});
  const double narrow = 0.005;  // gaps are 1 >= 100 * 0.005
  for (double e : {-1.5, -0.5, 0.25}) {
    for (double es : {0.5, 1.5, 2.5}) {
      if (e > es) continue;
      const double smooth = smoothed_count(s, e, es, narrow);
      CHECK(std::abs(smooth - static_cast<double>(count_eigenvalues(s, e, es))) <= 0.25);
    }
  }
  double prev = -1.0;
  for (double es = -2.0; es <= 3.0; es += 0.1) {
    const double v = smoothed_count(s, -2.0, es, 0.3);
    CHECK(v >= prev - 1e-15);
    CHECK(v <= 4.0);
    prev = v;
  }
  CHECK_THROWS_AS(smoothed_count(s, 1.0, 0.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(smoothed_count(s, 0.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("resolvent identities") {
  const ResolventIdentityReport diag = verify_resolvent_identities(from_rows({{1, 0, 0}, {0, 2, 0}, {0, 0, -1}}), {0.0, 0.5});
  CHECK(diag.max_expansion_violation == 0.0);
  CHECK(diag.max_minor_violation <= 1e-14);

  const ResolventIdentityReport small = verify_resolvent_identities(random_symmetric(4, 12), {0.3, 0.5}, 1e-10);
  CHECK(small.passed());
  CHECK(small.checks > 0);

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    CHECK(verify_resolvent_identities(random_symmetric(8, 500 + seed), {0.1, 0.2}, 1e-9).passed());
  }
  CHECK_THROWS_AS(verify_resolvent_identities(random_symmetric(2, 1), {0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(verify_resolvent_identities(random_symmetric(4, 1), {0.0, 0.0}), std::invalid_argument);
}
