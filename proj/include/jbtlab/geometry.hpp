#pragma once

#include <vector>

#include "jbtlab/peirce.hpp"

namespace jbt {

/// Distance between two minimal tripotents through the closed-form
///   ||u - v||^2 = (1 - Re phi_u(v)) + sqrt((1 - Re phi_u(v))^2 - ||P0(u)v||^2).
/// Radicands below -tol.struct_tol raise NumericError; tiny negatives clamp
/// to zero. Agreement with norm(u - v) is a test, not an assumption.
double minimal_distance(const Element& u, const Element& v,
                        const Tolerance& tol = {});

/// Witness report for the sqrt(2)-distance structure: if ||u + v|| and
/// ||u - v|| are both sqrt(2), then v lies in E^{-1}(u) + E_1(u), i.e.
/// Re phi_u(v) = 0 and P0(u)v = 0.
struct Sqrt2Report {
    bool applies = false;        // both norms within tol of sqrt(2)
    double norm_plus = 0.0;
    double norm_minus = 0.0;
    double re_phi = 0.0;         // conclusion: ~0
    double p0_norm = 0.0;        // conclusion: ~0
    Element q_minus_part;        // component in E^{-1}(u)
    Element p1_part;             // component in E_1(u)
    double conclusion_residual = 0.0;  // ||v - (q_minus_part + p1_part)||
};
Sqrt2Report sqrt2_structure(const Element& u, const Element& v,
                            const Tolerance& tol = {});

/// Witness report for antipodality: if ||e - x|| = 2 for a minimal tripotent
/// e and a norm-one x, then x = -e + P0(e)x.
struct AntipodalReport {
    bool applies = false;  // distance within tol of 2
    double distance = 0.0;
    Element p0_part;
    double conclusion_residual = 0.0;  // ||x - (-e + P0(e)x)||
};
AntipodalReport antipodal_structure(const Element& e, const Element& x,
                                    const Tolerance& tol = {});

enum class FrameShape { Scalar, OrthogonalPair, CollinearPair, Trangle, Quadrangle };

std::string frame_shape_name(FrameShape s);

/// Decomposition of a minimal tripotent v over a frame through e.
///
/// Shapes and coefficient conventions (frame always starts with e):
///   Scalar:         frame {e},             v = a e
///   OrthogonalPair: frame {e, w},          v = a e + d w          (a ~ 0)
///   CollinearPair:  frame {e, v2},         v = a e + b v2
///   Trangle:        frame {e, u, et},      v = a e + b u + d et,
///                   |a|^2 + 2|b|^2 + |d|^2 = 1, a d = b^2
///   Quadrangle:     frame {e, v2, v3, v4}, v = a e + b v2 + g v4 + d v3,
///                   |a|^2 + |b|^2 + |g|^2 + |d|^2 = 1, a d = b g
/// (a, b, g, d) are stored in coefficients in this order; reconstruct()
/// applies the pairing above.
struct FrameDecomposition {
    FrameShape shape = FrameShape::Scalar;
    std::vector<Tripotent> frame;
    std::vector<Complex> coefficients;

    Element reconstruct() const;
};

/// Classifies the subtriple generated by two minimal tripotents by the
/// complex span of {e, v, P1(e)v, P1(v)e} (dimension + orthogonality), and
/// extracts a frame through e with coefficients meeting the invariants above.
/// A singular value within tol.struct_tol of the rank cut raises
/// AmbiguityError with the spectrum in the message.
FrameDecomposition classify_pair(const Element& e, const Element& v,
                                 const Tolerance& tol = {});

}  // namespace jbt
