#include "rmtlab/rankone.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rmtlab/errors.hpp"
#include "rmtlab/ks.hpp"

namespace rmtlab {

namespace {

constexpr double kInertOverlap = 1e-14;
constexpr double kMergeGap = 1e-12;

struct Pole {
  double position;
  double weight;
};

double secular(std::span<const Pole> poles, double inv_f, double mu) {
  double s = 0.0;
  for (const Pole& p : poles) s += p.weight / (mu - p.position);
  return s - inv_f;
}

// Root of the decreasing secular function on (lo, hi); the function is
// positive just above lo and negative at (or just below) hi.
double bisect(std::span<const Pole> poles, double inv_f, double lo, double hi, double tol) {
  for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double g = secular(poles, inv_f, mid);
    if (std::isnan(g)) throw NumericalError("secular_eigenvalues: NaN in secular function");
    (g > 0.0 ? lo : hi) = mid;
  }
  return lo + 0.5 * (hi - lo);
}

std::size_t edge_count(std::size_t n, double delta) {
  return static_cast<std::size_t>(std::floor(static_cast<double>(n) * delta + 1e-9));
}

}  // namespace

void SecularInput::validate() const {
  if (lambdas.empty()) throw std::invalid_argument("SecularInput: empty spectrum");
  if (lambdas.size() != overlaps.size()) throw std::invalid_argument("SecularInput: size mismatch");
  if (!(f > 0.0)) throw std::invalid_argument("SecularInput: f must be positive");
  if (!std::is_sorted(lambdas.begin(), lambdas.end())) throw std::invalid_argument("SecularInput: lambdas not sorted");
  double total = 0.0;
  for (double z : overlaps) {
    if (!(z >= 0.0)) throw std::invalid_argument("SecularInput: negative or NaN overlap");
    total += z;
  }
  if (std::abs(total - 1.0) > 1e-10) throw std::invalid_argument("SecularInput: overlaps must sum to 1");
}

std::vector<double> secular_eigenvalues(const SecularInput& in, double tol) {
  in.validate();
  const std::size_t n = in.lambdas.size();
  std::vector<double> out;
  out.reserve(n);
  std::vector<Pole> poles;

  // Group near-coincident eigenvalues. A group with nonzero total weight is a
  // single pole at its largest member; the remaining members are eigenvalues
  // of the perturbed matrix as they stand.
  for (std::size_t start = 0; start < n;) {
    std::size_t end = start + 1;
    while (end < n && in.lambdas[end] - in.lambdas[end - 1] < kMergeGap) ++end;
    double weight = 0.0;
    for (std::size_t k = start; k < end; ++k) {
      if (in.overlaps[k] >= kInertOverlap) weight += in.overlaps[k];
    }
    if (weight > 0.0) {
      poles.push_back({in.lambdas[end - 1], weight});
      for (std::size_t k = start; k + 1 < end; ++k) out.push_back(in.lambdas[k]);
    } else {
      for (std::size_t k = start; k < end; ++k) out.push_back(in.lambdas[k]);
    }
    start = end;
  }

  const double inv_f = 1.0 / in.f;
  for (std::size_t k = 0; k < poles.size(); ++k) {
    const double lo = poles[k].position;
    double hi;
    if (k + 1 < poles.size()) {
      hi = poles[k + 1].position;
    } else {
      double total = 0.0;
      for (const Pole& p : poles) total += p.weight;
      hi = lo + in.f * total;
    }
    out.push_back(bisect(poles, inv_f, lo, hi, tol));
  }
  std::sort(out.begin(), out.end());
  return out;
}

InterlacingCheck verify_interlacing(std::span<const double> lambdas, std::span<const double> mus, double tol) {
  if (lambdas.size() != mus.size()) throw std::invalid_argument("verify_interlacing: length mismatch");
  InterlacingCheck res;
  const std::size_t n = lambdas.size();
  for (std::size_t a = 0; a < n; ++a) {
    double v = lambdas[a] - mus[a];
    if (a + 1 < n) v = std::max(v, mus[a] - lambdas[a + 1]);
    res.worst_violation = std::max(res.worst_violation, v);
  }
  res.ok = res.worst_violation <= tol;
  return res;
}

std::vector<double> sticking_gaps(std::span<const double> lambdas, std::span<const double> mus, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("sticking_gaps: delta must lie in (0, 1)");
  if (lambdas.size() != mus.size()) throw std::invalid_argument("sticking_gaps: length mismatch");
  const std::size_t n = lambdas.size();
  const double dn = static_cast<double>(n);
  const std::size_t count = std::min(edge_count(n, delta), n - 1);
  std::vector<double> gaps;
  gaps.reserve(count);
  // 1-based alpha runs over N - count, ..., N - 1
  for (std::size_t alpha = n - count; alpha <= n - 1 && alpha >= 1; ++alpha) {
    gaps.push_back(dn * (lambdas[alpha] - mus[alpha - 1]));
  }
  return gaps;
}

std::vector<double> lower_sticking_gaps(std::span<const double> lambdas, std::span<const double> mus,
                                        double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("lower_sticking_gaps: delta must lie in (0, 1)");
  if (lambdas.size() != mus.size()) throw std::invalid_argument("lower_sticking_gaps: length mismatch");
  const std::size_t n = lambdas.size();
  const double dn = static_cast<double>(n);
  const std::size_t count = std::min(edge_count(n, delta), n);
  std::vector<double> gaps;
  gaps.reserve(count);
  for (std::size_t a = 0; a < count; ++a) gaps.push_back(dn * (mus[a] - lambdas[a]));
  return gaps;
}

double predict_top_eigenvalue(double f) {
  if (!(f > 0.0)) throw std::invalid_argument("predict_top_eigenvalue: f must be positive");
  return f + 1.0 / f;
}

FluctuationSummary top_eigenvalue_fluctuation(std::span<const double> top_eigenvalues, double f, std::size_t n) {
  if (!(f > 1.0)) throw std::invalid_argument("top_eigenvalue_fluctuation: f must exceed 1");
  if (n == 0) throw std::invalid_argument("top_eigenvalue_fluctuation: n must be positive");
  FluctuationSummary s;
  if (top_eigenvalues.empty()) return s;
  const double centre = predict_top_eigenvalue(f);
  const double scale = std::pow(static_cast<double>(n), 0.25);
  s.standardized.reserve(top_eigenvalues.size());
  for (double mu : top_eigenvalues) s.standardized.push_back((mu - centre) * scale);

  const double m = static_cast<double>(s.standardized.size());
  s.mean = std::accumulate(s.standardized.begin(), s.standardized.end(), 0.0) / m;
  double ss = 0.0;
  for (double x : s.standardized) ss += (x - s.mean) * (x - s.mean);
  s.variance = s.standardized.size() > 1 ? ss / (m - 1.0) : 0.0;
  if (s.variance > 0.0) {
    const double sd = std::sqrt(s.variance);
    std::vector<double> z;
    z.reserve(s.standardized.size());
    for (double x : s.standardized) z.push_back((x - s.mean) / sd);
    s.ks_normal = ks_one_sample(z, [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); });
  }
  return s;
}

}  // namespace rmtlab
