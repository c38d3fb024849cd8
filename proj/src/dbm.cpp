#include "rmtlab/dbm.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rmtlab/ensembles.hpp"
#include "rmtlab/errors.hpp"

namespace rmtlab {

namespace {

// Gaussian stream that folds every draw into a running hash.
class RecordingNoise {
 public:
  explicit RecordingNoise(std::uint64_t key) : rng_(key) {}

  double normal() {
    const double g = rng_.normal();
    checksum_ = mix64(checksum_ ^ std::bit_cast<std::uint64_t>(g));
    return g;
  }
  std::uint64_t checksum() const { return checksum_; }

 private:
  RandomStream rng_;
  std::uint64_t checksum_ = 0;
};

}  // namespace

double DbmConfig::delta_for(std::size_t n) const { return delta > 0.0 ? delta : 0.5 / static_cast<double>(n); }

void DbmConfig::validate(std::size_t n) const {
  if (n == 0) throw std::invalid_argument("DbmConfig: empty configuration");
  if (!(dt > 0.0)) throw std::invalid_argument("DbmConfig: dt must be positive");
  if (!(t_final >= 0.0)) throw std::invalid_argument("DbmConfig: t_final must be nonnegative");
  if (delta < 0.0) throw std::invalid_argument("DbmConfig: delta must be positive");
  const double d = delta_for(n);
  if (d > (1.0 + 1e-12) / static_cast<double>(n)) throw std::invalid_argument("DbmConfig: delta must not exceed 1/N");
  if (dt > d * d * (1.0 + 1e-9)) throw std::invalid_argument("DbmConfig: dt must not exceed delta^2");
}

LogDelta log_delta(double x, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("log_delta: delta must be positive");
  if (x >= delta) return {std::log(x), 1.0 / x};
  const double u = (x - delta) / delta;
  return {std::log(delta) + u - 0.5 * u * u, (1.0 - u) / delta};
}

void dbm_drift(std::span<const double> x, double delta, std::span<double> out) {
  const std::size_t n = x.size();
  if (out.size() != n) throw std::invalid_argument("dbm_drift: output size mismatch");
  for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
  const double c = 0.5 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double w = c * log_delta(x[j] - x[i], delta).derivative;
      out[j] += w;
      out[i] -= w;
    }
  }
  for (std::size_t i = 0; i < n; ++i) out[i] -= 0.25 * x[i];
}

std::size_t resort(std::vector<double>& x) {
  std::size_t swaps = 0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    for (std::size_t j = i; j > 0 && x[j] < x[j - 1]; --j) {
      std::swap(x[j], x[j - 1]);
      ++swaps;
    }
  }
  return swaps;
}

DbmResult dbm_evolve(std::span<const double> x0, const DbmConfig& cfg, const DbmObserver& observer,
                     std::size_t snapshot_every) {
  cfg.validate(x0.size());
  for (std::size_t i = 1; i < x0.size(); ++i) {
    if (!(x0[i - 1] <= x0[i])) throw std::invalid_argument("dbm_evolve: x0 must be nondecreasing");
  }
  const double delta = cfg.delta_for(x0.size());

  DbmResult res;
  res.state.x.assign(x0.begin(), x0.end());
  if (observer) observer(res.state);
  if (cfg.t_final == 0.0) return res;

  const auto steps = static_cast<std::size_t>(std::ceil(cfg.t_final / cfg.dt - 1e-9));
  const double h = cfg.t_final / static_cast<double>(steps);
  RecordingNoise noise(cfg.seed);
  for (std::size_t k = 1; k <= steps; ++k) {
    std::size_t swaps = 0;
    res.state = dbm_step(res.state, h, delta, noise, &swaps);
    res.state.t = static_cast<double>(k) * h;
    res.swaps += swaps;
    if (swaps > 0) ++res.steps_with_swaps;
    for (double v : res.state.x) {
      if (std::isnan(v)) throw NumericalError("dbm_evolve: NaN at step " + std::to_string(k));
    }
    if (observer && snapshot_every > 0 && (k % snapshot_every == 0 || k == steps)) observer(res.state);
  }
  res.steps = steps;
  res.noise_checksum = noise.checksum();
  return res;
}

SpectralSample matrix_flow_oracle(const SymmetricMatrix& a0, double t, std::uint64_t seed) {
  if (!(t >= 0.0)) throw std::invalid_argument("matrix_flow_oracle: t must be nonnegative");
  if (t == 0.0) return eigen_decompose(a0, false);
  return eigen_decompose(interpolate_flow(a0, t, seed), false);
}

}  // namespace rmtlab
