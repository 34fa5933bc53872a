#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jbtlab/peirce.hpp"

namespace jbt {

/// Outcome of a structured predicate with one residual per condition.
struct PredicateReport {
    bool ok = false;
    std::vector<std::pair<std::string, double>> residuals;

    double worst() const;
};

/// Quadrangle predicate: u1 _|_ u3, u2 _|_ u4, cyclic collinearity
/// u1 T u2 T u3 T u4 T u1, and the closing identity u4 = 2{u1,u2,u3}.
PredicateReport is_quadrangle(const Element& u1, const Element& u2,
                              const Element& u3, const Element& u4,
                              const Tolerance& tol = {});

/// Trangle predicate: v _|_ vt, u governs v, u governs vt, v = Q(u) vt.
PredicateReport is_trangle(const Element& v, const Element& u,
                           const Element& vt, const Tolerance& tol = {});

/// A spanning family of tripotents with its index scheme and cached pairwise
/// relations (primary labels).
struct Grid {
    Factor factor;
    std::vector<Tripotent> elements;
    std::vector<std::pair<int, int>> indices;
    std::vector<std::vector<std::string>> relations;
};

/// Standard grid of a matrix factor: all matrix units (rectangular),
/// u_ij = E_ij - E_ji for i<j (symplectic), u_ij = E_ij + E_ji for i<j plus
/// the diagonal units E_ii (hermitian). Verifies that the real span of
/// {g, ig} is the whole factor. Spin factors are unsupported here; spin
/// synthesis goes through the real-orthonormal basis of X1.
Grid standard_grid(const Factor& factor, const Tolerance& tol = {});

/// For collinear minimal e1, e2 finds a minimal u with u _|_ e1 and u T e2
/// by projecting seeded samples into E0(e1) /\ E1(e2) and taking support
/// tripotents. Throws if the subspace is numerically zero (rank < 2 input).
Tripotent orthogonal_collinear_partner(const Element& e1, const Element& e2,
                                       std::uint64_t seed,
                                       const Tolerance& tol = {},
                                       int max_attempts = 50);

/// Completes a collinear pair (e, v2) to a quadrangle (e, v2, v3, v4) with
/// v3 from the partner search and v4 = 2{e, v2, v3}.
std::array<Tripotent, 4> complete_to_quadrangle(const Element& e,
                                                const Element& v2,
                                                std::uint64_t seed,
                                                const Tolerance& tol = {});

/// Midpoint tripotents of a trangle (v, u, vt) with v, vt minimal:
/// w = (v + u + vt)/2 and wt = (v - u + vt)/2 are orthogonal minimal
/// tripotents, and (w, v - vt, wt) is again a trangle.
struct TrangleMidpoints {
    Tripotent w;
    Tripotent w_tilde;
    Tripotent u_hat;  // v - vt, rank two
};
TrangleMidpoints spin_trangle_midpoints(const Element& v, const Element& u,
                                        const Element& vt,
                                        const Tolerance& tol = {});

/// Samplers built on the constructions above. They return nullopt when the
/// configuration does not exist in the factor (e.g. no collinear minimal
/// pairs in symmetric factors or Spin(3)).
std::optional<std::pair<Tripotent, Tripotent>> sample_collinear_pair(
    const Factor& factor, std::uint64_t seed, const Tolerance& tol = {});

std::vector<Tripotent> sample_orthogonal_minimals(const Factor& factor,
                                                  int count, std::uint64_t seed,
                                                  const Tolerance& tol = {});

std::optional<std::array<Tripotent, 3>> sample_trangle(const Factor& factor,
                                                       std::uint64_t seed,
                                                       const Tolerance& tol = {});

std::optional<std::array<Tripotent, 4>> sample_quadrangle(
    const Factor& factor, std::uint64_t seed, const Tolerance& tol = {});

}  // namespace jbt
