#include "jbtlab/operators.hpp"

namespace jbt {

RealLinearOperator::RealLinearOperator(Factor domain, Factor codomain, RealMatrix m)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), matrix_(std::move(m)) {
    if (matrix_.rows() != 2 * codomain_.complex_dim() ||
        matrix_.cols() != 2 * domain_.complex_dim()) {
        throw ContractError("RealLinearOperator: matrix must be 2 dim(codomain) x 2 dim(domain)");
    }
}

RealLinearOperator RealLinearOperator::identity(const Factor& f) {
    const int n = 2 * f.complex_dim();
    return RealLinearOperator(f, f, RealMatrix::Identity(n, n));
}

RealLinearOperator RealLinearOperator::materialize(
    const Factor& domain, const Factor& codomain,
    const std::function<Element(const Element&)>& map) {
    const int n = domain.complex_dim();
    RealMatrix m(2 * codomain.complex_dim(), 2 * n);
    for (int j = 0; j < 2 * n; ++j) {
        RealVector c = RealVector::Zero(2 * n);
        c(j) = 1.0;
        const Element out = map(element_from_real_coordinates(domain, c));
        if (out.factor() != codomain) {
            throw ContractError("RealLinearOperator::materialize: map output factor mismatch");
        }
        m.col(j) = real_coordinates(out);
    }
    return RealLinearOperator(domain, codomain, std::move(m));
}

Element RealLinearOperator::apply(const Element& x) const {
    if (x.factor() != domain_) {
        throw ContractError("RealLinearOperator::apply: element not in the domain factor");
    }
    return element_from_real_coordinates(codomain_, matrix_ * real_coordinates(x));
}

double RealLinearOperator::coordinate_norm() const {
    Eigen::JacobiSVD<RealMatrix> dec(matrix_);
    return dec.singularValues()(0);
}

double RealLinearOperator::complex_linear_defect() const {
    const RealMatrix jd = realified_i_action(domain_);
    const RealMatrix jc = realified_i_action(codomain_);
    Eigen::JacobiSVD<RealMatrix> dec(matrix_ * jd - jc * matrix_);
    return dec.singularValues()(0);
}

double RealLinearOperator::conjugate_linear_defect() const {
    const RealMatrix jd = realified_i_action(domain_);
    const RealMatrix jc = realified_i_action(codomain_);
    Eigen::JacobiSVD<RealMatrix> dec(matrix_ * jd + jc * matrix_);
    return dec.singularValues()(0);
}

double RealLinearOperator::distance(const RealLinearOperator& a,
                                    const RealLinearOperator& b) {
    if (a.domain() != b.domain() || a.codomain() != b.codomain()) {
        throw ContractError("RealLinearOperator::distance: operators on different spaces");
    }
    Eigen::JacobiSVD<RealMatrix> dec(a.matrix_ - b.matrix_);
    return dec.singularValues()(0);
}

RealMatrix realified_i_action(const Factor& f) {
    const int n = f.complex_dim();
    RealMatrix j = RealMatrix::Zero(2 * n, 2 * n);
    j.topRightCorner(n, n) = -RealMatrix::Identity(n, n);
    j.bottomLeftCorner(n, n) = RealMatrix::Identity(n, n);
    return j;
}

ComplexMatrix materialize_complex_operator(
    const Factor& f, const std::function<Element(const Element&)>& map) {
    const int n = f.complex_dim();
    ComplexMatrix m(n, n);
    for (int j = 0; j < n; ++j) {
        ComplexVector z = ComplexVector::Zero(n);
        z(j) = 1.0;
        m.col(j) = complex_coordinates(map(element_from_complex_coordinates(f, z)));
    }
    return m;
}

}  // namespace jbt
