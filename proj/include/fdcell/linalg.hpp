// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <complex>

#include "fdcell/rng.hpp"

namespace fdcell {

using Complex = std::complex<double>;

/// Dense complex matrix, row-major so the storage order matches the
/// row-by-row sampling order.
using ComplexMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using ComplexVector = Eigen::VectorXcd;

/// rows x cols matrix with i.i.d. circularly symmetric unit-variance complex
/// Gaussian entries, filled in row-major order from `rng`.
ComplexMatrix sample_gaussian_matrix(Eigen::Index rows, Eigen::Index cols,
                                     RandomStream& rng);

/// Unitary matrix drawn from the Haar measure: QR-factorize a Gaussian
/// matrix, then rescale each column of Q by the phase of the matching
/// diagonal entry of R. The phase correction makes the factorization unique
/// (positive real diagonal of R) and the resulting distribution exactly
/// Haar; the uncorrected Q is biased.
ComplexMatrix sample_haar_unitary(Eigen::Index dim, RandomStream& rng);

/// log det(I + c * A * A^H), natural log, via Cholesky of the explicitly
/// formed Hermitian matrix. Throws std::runtime_error if the factorization
/// fails, which signals numerical corruption: I + c * Gram is always
/// positive definite for finite inputs and c >= 0.
double logdet_id_plus_gram(const ComplexMatrix& a, double c);

}  // namespace fdcell
