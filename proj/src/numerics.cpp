#include "jbtlab/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <sstream>

namespace jbt {

bool all_finite(const ComplexMatrix& m) {
    return m.allFinite();
}

static void require_nonempty_finite(const ComplexMatrix& m, const char* where) {
    if (m.rows() == 0 || m.cols() == 0) {
        throw ContractError(std::string(where) + ": empty matrix");
    }
    if (!m.allFinite()) {
        throw ContractError(std::string(where) + ": non-finite entries");
    }
}

double operator_norm(const ComplexMatrix& m) {
    require_nonempty_finite(m, "operator_norm");
    Eigen::JacobiSVD<ComplexMatrix> dec(m);
    return dec.singularValues()(0);
}

Svd svd(const ComplexMatrix& m, const Tolerance& tol) {
    require_nonempty_finite(m, "svd");
    Eigen::JacobiSVD<ComplexMatrix> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Svd out;
    out.left = dec.matrixU();
    out.singular_values = dec.singularValues();
    out.right = dec.matrixV();

    const ComplexMatrix rebuilt =
        out.left * out.singular_values.asDiagonal() * out.right.adjoint();
    const double scale = std::max(1.0, out.singular_values(0));
    const double residual = (rebuilt - m).cwiseAbs().maxCoeff();
    if (!(residual <= tol.eq_tol * scale) || !out.singular_values.allFinite()) {
        std::ostringstream msg;
        msg << "svd: reconstruction residual " << residual << " exceeds "
            << tol.eq_tol * scale << " for a " << m.rows() << "x" << m.cols()
            << " matrix";
        throw NumericError(msg.str());
    }
    return out;
}

HermitianEig hermitian_eig(const ComplexMatrix& m, const Tolerance& tol) {
    require_nonempty_finite(m, "hermitian_eig");
    if (m.rows() != m.cols()) {
        throw ContractError("hermitian_eig: matrix not square");
    }
    const double defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (defect > tol.struct_tol * scale) {
        std::ostringstream msg;
        msg << "hermitian_eig: input not Hermitian, defect " << defect;
        throw ContractError(msg.str());
    }

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> dec((m + m.adjoint()) / 2.0);
    if (dec.info() != Eigen::Success) {
        throw NumericError("hermitian_eig: eigensolver did not converge");
    }
    HermitianEig out;
    out.values = dec.eigenvalues();
    out.vectors = dec.eigenvectors();

    const double residual =
        (m * out.vectors - out.vectors * out.values.asDiagonal().toDenseMatrix().cast<Complex>())
            .cwiseAbs()
            .maxCoeff();
    if (residual > tol.eq_tol * scale + defect) {
        std::ostringstream msg;
        msg << "hermitian_eig: residual " << residual << " exceeds tolerance";
        throw NumericError(msg.str());
    }
    return out;
}

int matrix_rank(const ComplexMatrix& m, double threshold) {
    require_nonempty_finite(m, "matrix_rank");
    Eigen::JacobiSVD<ComplexMatrix> dec(m);
    const auto& sv = dec.singularValues();
    if (sv.size() == 0 || sv(0) <= 0.0) return 0;
    const double cut = threshold * sv(0);
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cut) ++r;
    }
    return r;
}

}  // namespace jbt
