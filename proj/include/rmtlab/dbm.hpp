#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rmtlab/matrix.hpp"
#include "rmtlab/rng.hpp"
#include "rmtlab/spectral.hpp"

namespace rmtlab {

/// Particle configuration x_1 <= ... <= x_N at time t.
struct DbmState {
  double t = 0.0;
  std::vector<double> x;
};

enum class DbmScheme { EulerMaruyama };

struct DbmConfig {
  double dt = 1e-4;
  double t_final = 0.0;
  double delta = 0.0;  // regularisation scale; 0 means the default 1/(2N)
  std::uint64_t seed = 0;
  DbmScheme scheme = DbmScheme::EulerMaruyama;

  /// delta resolved against N.
  double delta_for(std::size_t n) const;
  /// Requires dt > 0, t_final >= 0, 0 < delta <= 1/N and dt <= delta^2.
  void validate(std::size_t n) const;
};

struct LogDelta {
  double value;
  double derivative;
};

/// log x for x >= delta; below delta, the second-order Taylor expansion of
/// log around delta. C^2 and concave on the whole line.
LogDelta log_delta(double x, double delta);

/// Drift of every particle of an ascending configuration:
///   -x_i/4 + (1/2N) sum_{j != i} s_ij log_delta'(|x_i - x_j|),
/// where s_ij = +1 for j < i and -1 for j > i. Pair contributions are
/// computed once and applied with opposite signs, so they cancel exactly in
/// the sum over i.
void dbm_drift(std::span<const double> x, double delta, std::span<double> out);

/// Restores ascending order by insertion sort; returns the number of
/// adjacent exchanges performed.
std::size_t resort(std::vector<double>& x);

/// One Euler-Maruyama step with Gaussian increments of variance dt/N,
/// followed by a re-sort. `swaps`, if given, receives the exchange count.
template <NormalSource Noise>
DbmState dbm_step(const DbmState& s, double dt, double delta, Noise& noise, std::size_t* swaps = nullptr);

struct DbmResult {
  DbmState state;
  std::size_t steps = 0;
  std::size_t swaps = 0;             // total adjacent exchanges during re-sorting
  std::size_t steps_with_swaps = 0;
  std::uint64_t noise_checksum = 0;  // hash of every consumed Gaussian increment
};

/// Called with the state after every `snapshot_every`-th step (and at t = 0).
using DbmObserver = std::function<void(const DbmState&)>;

/// Integrates from x0 (nondecreasing) to t_final in ceil(t_final/dt) equal
/// steps. Throws NumericalError naming the step if a particle becomes NaN.
DbmResult dbm_evolve(std::span<const double> x0, const DbmConfig& cfg, const DbmObserver& observer = {},
                     std::size_t snapshot_every = 0);

/// Eigenvalues of e^{-t/2} A0 + (1 - e^{-t})^{1/2} V, V an independent GOE.
/// The eigenvalues of this matrix flow solve the particle equation above run
/// at twice the speed, so DBM time tau pairs with flow time tau/2.
SpectralSample matrix_flow_oracle(const SymmetricMatrix& a0, double t, std::uint64_t seed);

/// Flow time of the matrix ensemble whose spectrum the particle system
/// reproduces at DBM time tau.
constexpr double flow_time_for_dbm(double tau) noexcept { return 0.5 * tau; }

// ---------------------------------------------------------------------------

template <NormalSource Noise>
DbmState dbm_step(const DbmState& s, double dt, double delta, Noise& noise, std::size_t* swaps) {
  const std::size_t n = s.x.size();
  std::vector<double> drift(n);
  dbm_drift(s.x, delta, drift);
  const double sd = std::sqrt(dt / static_cast<double>(n));
  DbmState next{s.t + dt, s.x};
  for (std::size_t i = 0; i < n; ++i) next.x[i] += drift[i] * dt + sd * static_cast<double>(noise.normal());
  const std::size_t k = resort(next.x);
  if (swaps) *swaps = k;
  return next;
}

}  // namespace rmtlab
