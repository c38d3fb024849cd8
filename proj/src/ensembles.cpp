#include "rmtlab/ensembles.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rmtlab {

namespace {

constexpr std::uint64_t kTagErBase = 1;
constexpr std::uint64_t kTagGoePart = 2;

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

std::string_view to_string(EnsembleKind kind) noexcept {
  switch (kind) {
    case EnsembleKind::ErdosRenyiAdjacency: return "er";
    case EnsembleKind::CenteredSparse: return "centered-sparse";
    case EnsembleKind::GOE: return "goe";
    case EnsembleKind::ThreePointShifted: return "three-point";
    case EnsembleKind::Interpolated: return "interpolated";
  }
  return "unknown";
}

EnsembleKind parse_ensemble_kind(std::string_view name) {
  for (auto k : {EnsembleKind::ErdosRenyiAdjacency, EnsembleKind::CenteredSparse, EnsembleKind::GOE,
                 EnsembleKind::ThreePointShifted, EnsembleKind::Interpolated}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown ensemble kind '" + std::string(name) +
                              "' (expected er, centered-sparse, goe, three-point, interpolated)");
}

void EnsembleSpec::validate() const {
  require(n >= 1, "ensemble: n must be positive");
  const double dn = static_cast<double>(n);
  switch (kind) {
    case EnsembleKind::ErdosRenyiAdjacency:
    case EnsembleKind::CenteredSparse:
    case EnsembleKind::Interpolated:
      require(q > 0.0, "ensemble: q must be positive");
      require(q * q < dn, "ensemble: q^2 must be below N (scaling gamma undefined)");
      break;
    case EnsembleKind::ThreePointShifted:
      require(q > 0.0, "ensemble: q must be positive");
      require(q * q <= dn, "ensemble: q^2 must not exceed N");
      break;
    case EnsembleKind::GOE:
      break;
  }
  require(f >= 0.0 && std::isfinite(f), "ensemble: f must be a nonnegative finite number");
  require(t >= 0.0 && std::isfinite(t), "ensemble: flow time t must be nonnegative");
}

std::vector<std::string> spec_warnings(const EnsembleSpec& spec) {
  std::vector<std::string> out;
  const double f = effective_shift(spec);
  if (f > std::sqrt(static_cast<double>(spec.n))) {
    out.push_back("shift f=" + std::to_string(f) + " exceeds sqrt(N); entrywise resolvent bounds assume f <= C sqrt(N)");
  }
  return out;
}

double effective_shift(const EnsembleSpec& spec) {
  switch (spec.kind) {
    case EnsembleKind::ErdosRenyiAdjacency:
      return er_scaling(spec.q, spec.n) * spec.q;
    case EnsembleKind::Interpolated:
      return std::exp(-0.5 * spec.t) * er_scaling(spec.q, spec.n) * spec.q;
    default:
      return spec.f;
  }
}

bool has_outlier(const EnsembleSpec& spec) { return effective_shift(spec) > 1.0; }

double er_scaling(double q, std::size_t n) {
  const double ratio = q * q / static_cast<double>(n);
  require(ratio < 1.0, "er_scaling: q^2 must be below N");
  return 1.0 / std::sqrt(1.0 - ratio);
}

SymmetricMatrix sample_er_adjacency(const EnsembleSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n;
  const double gamma = er_scaling(spec.q, n);
  const double p = spec.q * spec.q / static_cast<double>(n);
  const double value = gamma / spec.q;
  SymmetricMatrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      RandomStream rng(entry_key(spec.seed, i, j));
      if (rng.uniform() < p) a.set(i, j, value);
    }
  }
  return a;
}

CenteredMatrix center_er(const SymmetricMatrix& a, double q) {
  const std::size_t n = a.n();
  const double f = er_scaling(q, n) * q;
  const double shift = f / static_cast<double>(n);
  Eigen::MatrixXd h = a.dense().array() - shift;
  return {SymmetricMatrix::from_dense(std::move(h)), f};
}

SymmetricMatrix sample_goe(std::size_t n, std::uint64_t seed) {
  require(n >= 1, "sample_goe: n must be positive");
  const double off = 1.0 / std::sqrt(static_cast<double>(n));
  const double diag = std::sqrt(2.0 / static_cast<double>(n));
  SymmetricMatrix v(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      RandomStream rng(entry_key(seed, i, j));
      v.set(i, j, rng.normal() * (i == j ? diag : off));
    }
  }
  return v;
}

double ThreePointLaw::moment(int k) const {
  if (k == 0) return 1.0;
  return p * std::pow(a, k) + q_w * std::pow(-b, k);
}

double ThreePointLaw::sample(RandomStream& rng) const {
  const double u = rng.uniform();
  if (u < p) return a;
  if (u < p + q_w) return -b;
  return 0.0;
}

ThreePointLaw fit_three_point(double m3_target, double m4_target, std::size_t n) {
  require(n >= 1, "fit_three_point: n must be positive");
  const double dn = static_cast<double>(n);
  const double diff = dn * m3_target;                      // a - b
  const double prod = dn * (m4_target - dn * m3_target * m3_target);  // ab
  // ab >= 1/N is both the moment feasibility condition and p + q_w <= 1.
  require(prod * dn >= 1.0 - 1e-12,
          "fit_three_point: infeasible moments, need m4 - N m3^2 >= 1/N^2 (equivalently ab >= 1/N)");
  const double root = std::sqrt(diff * diff + 4.0 * prod);
  ThreePointLaw law;
  law.n = n;
  if (diff >= 0.0) {
    law.a = 0.5 * (diff + root);
    law.b = prod / law.a;
  } else {
    law.b = 0.5 * (-diff + root);
    law.a = prod / law.b;
  }
  law.p = 1.0 / (law.a * dn * (law.a + law.b));
  law.q_w = 1.0 / (law.b * dn * (law.a + law.b));
  require(law.p + law.q_w <= 1.0 + 1e-12, "fit_three_point: p + q exceeds 1");
  return law;
}

std::pair<double, double> flow_initial_moments(double m3_xi, double m4_xi, double gamma_flow, std::size_t n) {
  require(gamma_flow >= 0.0 && gamma_flow < 1.0, "flow_initial_moments: gamma_flow must lie in [0, 1)");
  const double dn = static_cast<double>(n);
  const double m3_0 = m3_xi / std::pow(1.0 - gamma_flow, 1.5);
  const double m4_0 = dn * m3_0 * m3_0 + m4_xi - dn * m3_xi * m3_xi;
  return {m3_0, m4_0};
}

ThreePointLaw sparse_three_point_law(double q, std::size_t n) {
  require(q > 0.0, "sparse_three_point_law: q must be positive");
  return fit_three_point(0.0, 1.0 / (static_cast<double>(n) * q * q), n);
}

SymmetricMatrix interpolate_flow(const SymmetricMatrix& a0, double t, std::uint64_t seed) {
  require(t >= 0.0, "interpolate_flow: t must be nonnegative");
  const double keep = std::exp(-0.5 * t);
  const double mix = std::sqrt(-std::expm1(-t));
  const SymmetricMatrix v = sample_goe(a0.n(), seed);
  SymmetricMatrix out(a0.n());
  for (std::size_t i = 0; i < a0.n(); ++i)
    for (std::size_t j = i; j < a0.n(); ++j) out.set(i, j, keep * a0(i, j) + mix * v(i, j));
  return out;
}

SymmetricMatrix sample_matrix(const EnsembleSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case EnsembleKind::ErdosRenyiAdjacency:
      return sample_er_adjacency(spec);
    case EnsembleKind::CenteredSparse:
      return center_er(sample_er_adjacency(spec), spec.q).h.plus_rank_one(spec.f);
    case EnsembleKind::GOE:
      return sample_goe(spec.n, spec.seed).plus_rank_one(spec.f);
    case EnsembleKind::ThreePointShifted: {
      const ThreePointLaw law = sparse_three_point_law(spec.q, spec.n);
      SymmetricMatrix h(spec.n);
      for (std::size_t i = 0; i < spec.n; ++i) {
        for (std::size_t j = i; j < spec.n; ++j) {
          RandomStream rng(entry_key(spec.seed, i, j));
          h.set(i, j, law.sample(rng));
        }
      }
      return h.plus_rank_one(spec.f);
    }
    case EnsembleKind::Interpolated: {
      const SymmetricMatrix a0 = sample_er_adjacency(spec.with_seed(child_key(spec.seed, kTagErBase)));
      return interpolate_flow(a0, spec.t, child_key(spec.seed, kTagGoePart));
    }
  }
  throw std::logic_error("sample_matrix: unhandled ensemble kind");
}

}  // namespace rmtlab
