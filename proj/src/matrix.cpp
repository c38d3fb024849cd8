#include "rmtlab/matrix.hpp"

#include <stdexcept>

namespace rmtlab {

SymmetricMatrix::SymmetricMatrix(std::size_t n)
    : data_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))) {}

SymmetricMatrix SymmetricMatrix::from_dense(Eigen::MatrixXd dense) {
  if (dense.rows() != dense.cols()) throw std::invalid_argument("SymmetricMatrix: matrix is not square");
  SymmetricMatrix m;
  m.data_ = std::move(dense);
  if (!m.is_exactly_symmetric()) throw std::invalid_argument("SymmetricMatrix: matrix is not exactly symmetric");
  return m;
}

bool SymmetricMatrix::is_exactly_symmetric() const {
  for (Eigen::Index i = 0; i < data_.rows(); ++i)
    for (Eigen::Index j = i + 1; j < data_.cols(); ++j)
      if (!(data_(i, j) == data_(j, i))) return false;
  return true;
}

SymmetricMatrix SymmetricMatrix::plus_rank_one(double f) const {
  SymmetricMatrix out = *this;
  const double shift = f / static_cast<double>(n());
  out.data_.array() += shift;
  return out;
}

}  // namespace rmtlab
