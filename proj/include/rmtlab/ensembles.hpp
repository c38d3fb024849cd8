#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rmtlab/matrix.hpp"
#include "rmtlab/rng.hpp"

namespace rmtlab {

enum class EnsembleKind {
  ErdosRenyiAdjacency,  // rescaled ER adjacency matrix A = H + gamma*q |e><e|
  CenteredSparse,       // centred ER entries H, plus f |e><e|
  GOE,                  // GOE V, plus f |e><e|
  ThreePointShifted,    // symmetric three-point entries at +-1/q, plus f |e><e|
  Interpolated,         // e^{-t/2} A_ER + (1 - e^{-t})^{1/2} V
};

std::string_view to_string(EnsembleKind kind) noexcept;
/// Accepts the names produced by to_string; throws std::invalid_argument otherwise.
EnsembleKind parse_ensemble_kind(std::string_view name);

/// Declarative description of a random matrix law.
struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::GOE;
  std::size_t n = 0;
  double q = 0.0;        // sparseness; ignored for GOE
  double f = 0.0;        // rank-one shift; ignored for ER and Interpolated (natural shift)
  std::uint64_t seed = 0;
  double t = 0.0;        // flow time, Interpolated only

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;

  EnsembleSpec with_seed(std::uint64_t s) const {
    EnsembleSpec c = *this;
    c.seed = s;
    return c;
  }

  friend bool operator==(const EnsembleSpec&, const EnsembleSpec&) = default;
};

/// Soft diagnostics that do not block sampling (e.g. a shift above sqrt(N)).
std::vector<std::string> spec_warnings(const EnsembleSpec& spec);

/// The mean-part coefficient f of A = H + f|e><e| implied by the spec.
double effective_shift(const EnsembleSpec& spec);

/// True when the spec's matrices carry a separated outlier eigenvalue (f > 1).
bool has_outlier(const EnsembleSpec& spec);

/// gamma = (1 - q^2/N)^{-1/2}; throws if q^2 >= N.
double er_scaling(double q, std::size_t n);

/// Rescaled ER adjacency: each entry (diagonal included) is gamma/q with
/// probability q^2/N, else 0. Entry (i, j) is drawn from its own stream.
SymmetricMatrix sample_er_adjacency(const EnsembleSpec& spec);

struct CenteredMatrix {
  SymmetricMatrix h;
  double f = 0.0;
};

/// Splits A into H + f|e><e| with h_ij = a_ij - gamma*q/N and f = gamma*q.
CenteredMatrix center_er(const SymmetricMatrix& a, double q);

/// GOE: off-diagonal variance 1/N, diagonal variance 2/N.
SymmetricMatrix sample_goe(std::size_t n, std::uint64_t seed);

/// Law p delta_a + q_w delta_{-b} + (1 - p - q_w) delta_0 with mean 0 and
/// variance 1/N.
struct ThreePointLaw {
  double a = 0.0;
  double b = 0.0;
  double p = 0.0;
  double q_w = 0.0;
  std::size_t n = 0;

  double moment(int k) const;
  double sample(RandomStream& rng) const;
};

/// Solves a - b = N m3, ab = N (m4 - N m3^2) for the three-point law with
/// moments (0, 1/N, m3, m4). Throws std::invalid_argument when the targets
/// are infeasible (m4 - N m3^2 < 1/N^2, i.e. p + q_w > 1).
ThreePointLaw fit_three_point(double m3_target, double m4_target, std::size_t n);

/// Third and fourth moments required of the initial entry law so that
/// sqrt(1-g) xi_0 + sqrt(g) G (G Gaussian, variance 1/N) reproduces the
/// first three moments of xi and its fourth up to O(g).
std::pair<double, double> flow_initial_moments(double m3_xi, double m4_xi, double gamma_flow, std::size_t n);

/// Entry law of ThreePointShifted: symmetric atoms at +-1/q.
ThreePointLaw sparse_three_point_law(double q, std::size_t n);

/// e^{-t/2} A0 + (1 - e^{-t})^{1/2} V with V a fresh GOE drawn from `seed`.
SymmetricMatrix interpolate_flow(const SymmetricMatrix& a0, double t, std::uint64_t seed);

/// Samples one matrix of the law described by `spec` (using spec.seed).
SymmetricMatrix sample_matrix(const EnsembleSpec& spec);

}  // namespace rmtlab
