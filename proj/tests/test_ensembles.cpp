#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "rmtlab/ensembles.hpp"
#include "rmtlab/errors.hpp"
#include "rmtlab/rng.hpp"
#include "rmtlab/truncation.hpp"

using namespace rmtlab;

namespace {

double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }
double upper_gauss(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

// Running mean with a 3-sigma acceptance band.
struct Moment {
  double sum = 0.0, sum_sq = 0.0;
  std::size_t n = 0;
  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++n;
  }
  double mean() const { return sum / static_cast<double>(n); }
  double sigma_of_mean() const {
    const double m = mean();
    return std::sqrt((sum_sq / static_cast<double>(n) - m * m) / static_cast<double>(n));
  }
  bool within_3_sigma(double target) const { return std::abs(mean() - target) <= 3.0 * sigma_of_mean(); }
};

}  // namespace

TEST_CASE("spec validation") {
  EnsembleSpec s{EnsembleKind::ErdosRenyiAdjacency, 100, 10.0, 0.0, 1, 0.0};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);  // q^2 = N
  s.q = 9.9;
  CHECK_NOTHROW(s.validate());
  s.n = 0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  EnsembleSpec g{EnsembleKind::GOE, 10, 0.0, -1.0, 1, 0.0};
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  EnsembleSpec t{EnsembleKind::ThreePointShifted, 100, 10.0, 0.0, 1, 0.0};
  CHECK_NOTHROW(t.validate());
  CHECK(parse_ensemble_kind("goe") == EnsembleKind::GOE);
  CHECK(to_string(EnsembleKind::CenteredSparse) == "centered-sparse");
  CHECK_THROWS_AS(parse_ensemble_kind("wishart"), std::invalid_argument);

  EnsembleSpec big{EnsembleKind::GOE, 16, 0.0, 5.0, 1, 0.0};
  CHECK(spec_warnings(big).size() == 1);
  big.f = 3.0;
  CHECK(spec_warnings(big).empty());
}

TEST_CASE("samplers are deterministic and exactly symmetric") {
  const EnsembleSpec specs[] = {
      {EnsembleKind::ErdosRenyiAdjacency, 30, 3.0, 0.0, 5, 0.0},
      {EnsembleKind::CenteredSparse, 30, 3.0, 2.0, 5, 0.0},
      {EnsembleKind::GOE, 30, 0.0, 0.0, 5, 0.0},
      {EnsembleKind::ThreePointShifted, 30, 2.0, 1.0, 5, 0.0},
      {EnsembleKind::Interpolated, 30, 3.0, 0.0, 5, 0.7},
  };
  for (const EnsembleSpec& s : specs) {
    const SymmetricMatrix a = sample_matrix(s);
    CHECK(a == sample_matrix(s));
    CHECK(a.is_exactly_symmetric());
    CHECK_FALSE(a == sample_matrix(s.with_seed(6)));
  }
}

TEST_CASE("ER nonzero fraction is q^2/N") {
  const EnsembleSpec base{EnsembleKind::ErdosRenyiAdjacency, 200, 5.0, 0.0, 0, 0.0};
  double nonzero = 0.0, total = 0.0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const SymmetricMatrix a = sample_er_adjacency(base.with_seed(s));
    for (std::size_t i = 0; i < 200; ++i) {
      for (std::size_t j = i; j < 200; ++j) {
        nonzero += a(i, j) != 0.0 ? 1.0 : 0.0;
        total += 1.0;
      }
    }
  }
  const double p = 0.125;
  CHECK(std::abs(nonzero / total - p) <= 3.0 * std::sqrt(p * (1 - p) / total));
}

TEST_CASE("center_er") {
  const double gamma = 1.0 / std::sqrt(1.0 - 1.0 / 4.0);
  const CenteredMatrix c = center_er(SymmetricMatrix(4), 1.0);
  CHECK(c.f == doctest::Approx(gamma).epsilon(1e-15));
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) CHECK(c.h(i, j) == doctest::Approx(-gamma / 4.0).epsilon(1e-15));
  }

  const EnsembleSpec spec{EnsembleKind::ErdosRenyiAdjacency, 40, 3.0, 0.0, 0, 0.0};
  Moment m1, m2;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const SymmetricMatrix a = sample_er_adjacency(spec.with_seed(s));
    const CenteredMatrix h = center_er(a, spec.q);
    CHECK((h.h.plus_rank_one(h.f).dense() - a.dense()).cwiseAbs().maxCoeff() <= 1e-15);
    for (std::size_t i = 0; i < 40; ++i) {
      for (std::size_t j = i; j < 40; ++j) {
        m1.add(h.h(i, j));
        m2.add(h.h(i, j) * h.h(i, j));
      }
    }
  }
  CHECK(m1.within_3_sigma(0.0));
  CHECK(m2.within_3_sigma(1.0 / 40.0));
}

TEST_CASE("GOE second moment: E tr A^2 = N + 1") {
  Moment tr;
  for (std::uint64_t s = 0; s < 500; ++s) {
    const SymmetricMatrix a = sample_goe(50, s);
    tr.add(a.dense().squaredNorm());
  }
  CHECK(tr.within_3_sigma(51.0));
}

TEST_CASE("three-point fit") {
  const ThreePointLaw sym = fit_three_point(0.0, 1e-4, 100);
  CHECK(sym.a == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(sym.b == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(sym.p == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(sym.q_w == doctest::Approx(0.5).epsilon(1e-14));

  const ThreePointLaw asym = fit_three_point(1e-3, 3e-4, 100);
  CHECK(asym.a == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(asym.b == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(asym.p == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(asym.q_w == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  // hand summation: p a^k + (-1)^k q b^k
  const double moments[] = {0.0, 0.01, 1e-3, 3e-4};
  for (int k = 1; k <= 4; ++k) {
    const double direct = asym.p * std::pow(0.2, k) + asym.q_w * std::pow(-0.1, k);
    CHECK(std::abs(direct - moments[k - 1]) < 1e-15);
  }

  CHECK_THROWS_AS(fit_three_point(0.0, 0.99e-4, 100), std::invalid_argument);

  // sampling reproduces the law's weights
  RandomStream rng(9);
  double plus = 0.0, minus = 0.0;
  const int draws = 200000;
  for (int k = 0; k < draws; ++k) {
    const double v = asym.sample(rng);
    plus += v == asym.a ? 1.0 : 0.0;
    minus += v == -asym.b ? 1.0 : 0.0;
  }
  CHECK(std::abs(plus / draws - 1.0 / 6.0) <= 3.0 * std::sqrt((1.0 / 6.0) * (5.0 / 6.0) / draws));
  CHECK(std::abs(minus / draws - 1.0 / 3.0) <= 3.0 * std::sqrt((1.0 / 3.0) * (2.0 / 3.0) / draws));
}

TEST_CASE("flow initial moments") {
  auto [a0, b0] = flow_initial_moments(1e-3, 3e-4, 0.0, 100);
  CHECK(a0 == doctest::Approx(1e-3).epsilon(1e-14));
  CHECK(b0 == doctest::Approx(3e-4).epsilon(1e-14));
  auto [c0, d0] = flow_initial_moments(0.0, 5e-4, 0.3, 100);
  CHECK(c0 == 0.0);
  CHECK(d0 == doctest::Approx(5e-4).epsilon(1e-14));
  CHECK_THROWS_AS(flow_initial_moments(0.0, 5e-4, 1.0, 100), std::invalid_argument);

  // xi' = sqrt(1 - g) xi0 + sqrt(g) G reproduces m3 exactly and m4 up to O(g).
  const std::size_t n = 100;
  const double g = 0.5, m3 = 1e-3, m4 = 3e-4;
  auto [m30, m40] = flow_initial_moments(m3, m4, g, n);
  CHECK(m30 == doctest::Approx(std::pow(2.0, 1.5) * 1e-3).epsilon(1e-14));
  CHECK(m40 == doctest::Approx(100.0 * m30 * m30 + m4 - 100.0 * m3 * m3).epsilon(1e-14));
  const ThreePointLaw xi0 = fit_three_point(m30, m40, n);
  const double dn = static_cast<double>(n);
  const double exact_m4 = (1 - g) * (1 - g) * m40 + 6 * g * (1 - g) / (dn * dn) + 3 * g * g / (dn * dn);
  RandomStream rng(21);
  Moment s3, s4;
  for (int k = 0; k < 2000000; ++k) {
    const double v = std::sqrt(1 - g) * xi0.sample(rng) + std::sqrt(g / dn) * rng.normal();
    s3.add(v * v * v);
    s4.add(v * v * v * v);
  }
  CHECK(s3.within_3_sigma(m3));
  CHECK(s4.within_3_sigma(exact_m4));
}

TEST_CASE("truncation of a Gaussian against closed forms") {
  const double lambda = 3.0;
  const TruncatedLaw y = truncate_law(CdfAccessor::standard_gaussian(), lambda, 4.0);
  CHECK(std::abs(y.tail_mass - 2.0 * upper_gauss(lambda)) < 1e-13);
  CHECK(std::abs(y.tail_mean) < 1e-13);
  CHECK(std::abs(y.tail_second - 2.0 * (lambda * phi(lambda) + upper_gauss(lambda))) < 1e-13);
  CHECK(y.abs_moment_m == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(y.t0 >= 0.0);
  CHECK(y.t0 <= 0.5);
  CHECK(std::abs(0.5 * std::erf(y.a_t / std::numbers::sqrt2) * 2.0 - y.t0) < 1e-12);
  // alpha(t0) = gamma(t0) with v_t = 2(Phi(a) - 1/2 - a phi(a))
  const double v_t = 2.0 * (0.5 * std::erf(y.a_t / std::numbers::sqrt2) - y.a_t * phi(y.a_t));
  CHECK(std::abs(y.tail_mass + y.t0 - (y.tail_second + v_t) / (lambda * lambda)) < 1e-10);
  CHECK(std::abs(y.mean()) <= 1e-8);
  CHECK(std::abs(y.second_moment() - 1.0) <= 1e-8);
  CHECK(y.change_probability() <= 2.0 * 3.0 * std::pow(3.0, -4.0));
  CHECK(y.p_atom == doctest::Approx(y.q_atom).epsilon(1e-10));

  RandomStream rng(5);
  Moment m1, m2, changed;
  double max_abs = 0.0;
  for (int k = 0; k < 400000; ++k) {
    const double x = rng.normal();
    const double v = y.transform(x);
    max_abs = std::max(max_abs, std::abs(v));
    m1.add(v);
    m2.add(v * v);
    changed.add(v != x ? 1.0 : 0.0);
  }
  CHECK(max_abs <= lambda);
  CHECK(m1.within_3_sigma(0.0));
  CHECK(m2.within_3_sigma(1.0));
  CHECK(changed.within_3_sigma(y.change_probability()));
}

TEST_CASE("truncation of other laws") {
  const TruncatedLaw u = truncate_law(CdfAccessor::unit_uniform(), 1.5, 4.0);
  CHECK(std::abs(u.mean()) <= 1e-8);
  CHECK(std::abs(u.second_moment() - 1.0) <= 1e-8);
  CHECK(u.change_probability() <= u.change_bound());

  const TruncatedLaw p = truncate_law(CdfAccessor::two_sided_pareto(6.0), 3.0, 4.5);
  CHECK(std::abs(p.mean()) <= 1e-8);
  CHECK(std::abs(p.second_moment() - 1.0) <= 1e-8);
  CHECK(p.change_probability() <= p.change_bound());

  // No truncation needed: lambda beyond the support.
  const TruncatedLaw none = truncate_law(CdfAccessor::unit_uniform(), 2.0, 4.0);
  CHECK(none.change_probability() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(none.transform(1.2) == 1.2);

  CdfAccessor shifted{[](double x) { return std::clamp(x, 0.0, 1.0); }, {}};
  CHECK_THROWS_AS(truncate_law(shifted, 1.0, 4.0), std::invalid_argument);
  CHECK_THROWS_AS(truncate_law(CdfAccessor::standard_gaussian(), 0.0, 4.0), std::invalid_argument);
}

TEST_CASE("interpolating flow") {
  const SymmetricMatrix a0 = sample_goe(10, 1);
  CHECK(interpolate_flow(a0, 0.0, 2) == a0);
  const SymmetricMatrix a1 = interpolate_flow(a0, 1.0, 2);
  CHECK(a1.is_exactly_symmetric());
  CHECK(a1 == interpolate_flow(a0, 1.0, 2));
  const SymmetricMatrix v = sample_goe(10, 2);
  const double c = std::exp(-0.5), s = std::sqrt(1.0 - std::exp(-1.0));
  CHECK(((c * a0.dense() + s * v.dense()) - a1.dense()).cwiseAbs().maxCoeff() < 1e-14);
}
