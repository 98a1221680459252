// SPDX-License-Identifier: Apache-2.0
#include "fdcell/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace fdcell {

ComplexMatrix sample_gaussian_matrix(Eigen::Index rows, Eigen::Index cols,
                                     RandomStream& rng) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("sample_gaussian_matrix: rows and cols must be >= 1");
  }
  ComplexMatrix out(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      out(r, c) = rng.next_cn();
    }
  }
  return out;
}

ComplexMatrix sample_haar_unitary(Eigen::Index dim, RandomStream& rng) {
  if (dim < 1) {
    throw std::invalid_argument("sample_haar_unitary: dim must be >= 1");
  }
  const ComplexMatrix seed = sample_gaussian_matrix(dim, dim, rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(seed);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd& packed = qr.matrixQR();
  for (Eigen::Index m = 0; m < dim; ++m) {
    const Complex r = packed(m, m);
    const double mag = std::abs(r);
    q.col(m) *= (mag > 0.0) ? r / mag : Complex(1.0, 0.0);
  }
  return q;
}

double logdet_id_plus_gram(const ComplexMatrix& a, double c) {
  if (!(c >= 0.0)) {
    throw std::invalid_argument("logdet_id_plus_gram: c must be nonnegative");
  }
  const Eigen::Index m = a.rows();
  Eigen::MatrixXcd hermitian = Eigen::MatrixXcd::Identity(m, m);
  hermitian.noalias() += c * (a * a.adjoint());
  Eigen::LLT<Eigen::MatrixXcd> llt(hermitian);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error(
        "logdet_id_plus_gram: Cholesky failed on I + c*A*A^H (corrupt input?)");
  }
  return 2.0 * llt.matrixLLT().diagonal().real().array().log().sum();
}

}  // namespace fdcell
