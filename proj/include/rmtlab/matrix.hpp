#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace rmtlab {

/// Dense real symmetric matrix. Every write goes to both (i, j) and (j, i),
/// so the stored matrix is bit-identical to its transpose.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(std::size_t n);

  /// Adopts `dense`; throws std::invalid_argument unless it is square and
  /// exactly symmetric.
  static SymmetricMatrix from_dense(Eigen::MatrixXd dense);

  std::size_t n() const noexcept { return static_cast<std::size_t>(data_.rows()); }

  double operator()(std::size_t i, std::size_t j) const {
    return data_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  void set(std::size_t i, std::size_t j, double v) {
    data_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    data_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
  }

  const Eigen::MatrixXd& dense() const noexcept { return data_; }

  bool is_exactly_symmetric() const;

  /// this + f |e><e| with e = N^{-1/2}(1, ..., 1).
  SymmetricMatrix plus_rank_one(double f) const;

  friend bool operator==(const SymmetricMatrix& a, const SymmetricMatrix& b) {
    return a.data_.rows() == b.data_.rows() && a.data_ == b.data_;
  }

 private:
  Eigen::MatrixXd data_;
};

}  // namespace rmtlab
