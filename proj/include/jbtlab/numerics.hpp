#pragma once

#include <Eigen/Dense>
#include <complex>

#include "jbtlab/errors.hpp"
#include "jbtlab/tolerance.hpp"

namespace jbt {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Singular value decomposition m = left * diag(singular_values) * right^H.
struct Svd {
    ComplexMatrix left;          // columns: left singular vectors
    RealVector singular_values;  // descending, nonnegative
    ComplexMatrix right;         // columns: right singular vectors
};

/// Hermitian eigendecomposition m = vectors * diag(values) * vectors^H.
/// Eigenvalues are real, in ascending order.
struct HermitianEig {
    RealVector values;
    ComplexMatrix vectors;
};

bool all_finite(const ComplexMatrix& m);

/// Largest singular value (spectral norm). Realizes the norm of the
/// operator-type factors.
double operator_norm(const ComplexMatrix& m);

/// Thin SVD with an internal reconstruction check; throws NumericError with
/// diagnostics if the factorization does not reproduce the input.
Svd svd(const ComplexMatrix& m, const Tolerance& tol = {});

/// Eigendecomposition of a Hermitian matrix. Requires ||m - m*|| within
/// tol.struct_tol; verifies m*V = V*diag within tol.eq_tol.
HermitianEig hermitian_eig(const ComplexMatrix& m, const Tolerance& tol = {});

/// Rank of a complex matrix by singular value thresholding, relative to the
/// largest singular value.
int matrix_rank(const ComplexMatrix& m, double threshold);

}  // namespace jbt
