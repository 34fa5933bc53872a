#pragma once

#include <functional>

#include "jbtlab/factors.hpp"

namespace jbt {

/// A real-linear map between factors, stored as a 2M x 2N real matrix acting
/// on the realified canonical coordinates (Re z; Im z). Complex-linear maps
/// commute with the i-action J, conjugate-linear maps anticommute.
class RealLinearOperator {
public:
    RealLinearOperator(Factor domain, Factor codomain, RealMatrix m);

    static RealLinearOperator identity(const Factor& f);

    /// Materializes a map given as a function on elements by applying it to
    /// the 2N canonical real basis elements of the domain.
    static RealLinearOperator materialize(
        const Factor& domain, const Factor& codomain,
        const std::function<Element(const Element&)>& map);

    const Factor& domain() const { return domain_; }
    const Factor& codomain() const { return codomain_; }
    const RealMatrix& matrix() const { return matrix_; }

    Element apply(const Element& x) const;

    /// Spectral norm of the coordinate matrix (operator norm on the
    /// realified space).
    double coordinate_norm() const;

    /// ||A J - J A|| resp. ||A J + J A|| in the realified coordinates;
    /// near zero iff the map is complex- resp. conjugate-linear.
    double complex_linear_defect() const;
    double conjugate_linear_defect() const;

    /// Coordinate-norm distance between two operators on the same spaces.
    static double distance(const RealLinearOperator& a, const RealLinearOperator& b);

private:
    Factor domain_, codomain_;
    RealMatrix matrix_;
};

/// The realified i-action on a factor's coordinates: (Re z; Im z) -> (-Im z; Re z).
RealMatrix realified_i_action(const Factor& f);

/// Materializes a complex-linear operator on a factor as an N x N complex
/// matrix in the canonical complex chart.
ComplexMatrix materialize_complex_operator(
    const Factor& f, const std::function<Element(const Element&)>& map);

}  // namespace jbt
