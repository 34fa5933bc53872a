#pragma once

#include <optional>
#include <string>

#include "jbtlab/factors.hpp"

namespace jbt {

/// Classification flags of a tripotent. minimal: E2(u) is one complex
/// dimension; complete: E0(u) = 0; unitary: E2(u) is everything. rank is the
/// triple rank (maximal orthogonal family in E2(u)): matrix rank for types
/// 1/3, half the matrix rank for type 2, 1 or 2 in a spin factor, blockwise
/// sum for direct sums.
struct TripotentInfo {
    bool minimal = false;
    bool complete = false;
    bool unitary = false;
    int rank = 0;

    std::string label() const;  // "minimal" | "unitary" | "complete" | "none-of-these"
};

/// A validated tripotent with cached classification.
struct Tripotent {
    Element element;
    TripotentInfo info;
};

bool is_tripotent(const Element& x, const Tolerance& tol = {});

/// Validates {x,x,x} = x and classifies. Throws ContractError otherwise.
Tripotent make_tripotent(const Element& x, const Tolerance& tol = {});

/// Classification of a tripotent (see TripotentInfo).
TripotentInfo classify(const Element& u, const Tolerance& tol = {});

/// L(a,b) action: x -> {a,b,x}.
Element l_apply(const Element& a, const Element& b, const Element& x);

/// Q(u) action: x -> {u,x,u} (conjugate-linear in x).
Element q_apply(const Element& u, const Element& x);

/// Peirce projection P_j(u)x through the polynomial formulas in L(u,u):
/// P2 = L(2L - id), P1 = 4L(id - L), P0 = (id - L)(id - 2L).
Element peirce_apply(const Element& u, const Element& x, int j);

struct PeirceDecomposition {
    Element x2, x1, x0;
    Element sum() const { return x2 + x1 + x0; }
};

/// All three Peirce components of x relative to the tripotent u.
PeirceDecomposition peirce_project(const Element& u, const Element& x,
                                   const Tolerance& tol = {});

/// Splitting of x along the involution Q(u): x = plus + minus + zero with
/// Q(u) plus = plus, Q(u) minus = -minus, Q(u) zero = 0. The plus/minus
/// parts are the +-1 eigenspace projections of the realified Q(u) restricted
/// to E2(u), computed as (id +- Q(u))/2 of the Peirce-2 component.
struct QSplit {
    Element plus, minus, zero;
};
QSplit q_split(const Element& u, const Element& x, const Tolerance& tol = {});

/// Pairwise relation of two tripotents. Several flags can hold at once;
/// primary() reports the dominant one for display.
struct TripotentRelation {
    bool orthogonal = false;
    bool collinear = false;
    bool a_governs_b = false;
    bool b_governs_a = false;
    bool a_leq_b = false;
    bool b_leq_a = false;

    std::string primary() const;
};

TripotentRelation relation(const Element& a, const Element& b,
                           const Tolerance& tol = {});

/// Support tripotent of a norm-one element as the limit of odd powers
/// x^[2n+1] = {x, x, x^[2n-1]}. Stops when consecutive iterates agree within
/// tol.eq_tol, capped at max_iterations; converged=false signals singular
/// values close to one (gap carries the estimated spectral gap).
struct SupportResult {
    Element tripotent;
    int iterations = 0;
    bool converged = false;
    double gap = 0.0;
    double last_delta = 0.0;
};

SupportResult support_tripotent(const Element& x, const Tolerance& tol = {},
                                int max_iterations = 200);

/// Independent route for matrix factors: the sum of rank-one singular pieces
/// whose singular value is one within tol.struct_tol. Test oracle for
/// support_tripotent; not defined for spin factors.
Element svd_support_tripotent(const Element& x, const Tolerance& tol = {});

/// The scalar phi_u(x) with P2(u)x = phi_u(x) u for a minimal tripotent u.
Complex p2_coefficient(const Element& u, const Element& x,
                       const Tolerance& tol = {});

}  // namespace jbt
