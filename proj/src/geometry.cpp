#include "jbtlab/geometry.hpp"

#include <cmath>
#include <sstream>

#include "jbtlab/grids.hpp"

namespace jbt {

double minimal_distance(const Element& u, const Element& v, const Tolerance& tol) {
    require_same_factor(u, v, "minimal_distance");
    const Complex phi = p2_coefficient(u, v, tol);  // validates minimality of u in passing
    const double re = 1.0 - std::real(phi);
    const double p0n = norm(peirce_apply(u, v, 0));
    double radicand = re * re - p0n * p0n;
    if (radicand < -tol.struct_tol) {
        std::ostringstream msg;
        msg << "minimal_distance: negative radicand " << radicand
            << " (inputs are not minimal tripotents of one factor)";
        throw NumericError(msg.str());
    }
    radicand = std::max(0.0, radicand);
    return std::sqrt(re + std::sqrt(radicand));
}

Sqrt2Report sqrt2_structure(const Element& u, const Element& v, const Tolerance& tol) {
    require_same_factor(u, v, "sqrt2_structure");
    if (!classify(u, tol).minimal || !classify(v, tol).minimal) {
        throw ContractError("sqrt2_structure: inputs must be minimal tripotents");
    }
    Sqrt2Report rep;
    rep.norm_plus = norm(u + v);
    rep.norm_minus = norm(u - v);
    const double s2 = std::sqrt(2.0);
    rep.applies = std::abs(rep.norm_plus - s2) <= tol.struct_tol &&
                  std::abs(rep.norm_minus - s2) <= tol.struct_tol;
    rep.re_phi = std::real(p2_coefficient(u, v, tol));
    rep.p0_norm = norm(peirce_apply(u, v, 0));
    const QSplit q = q_split(u, v, tol);
    rep.q_minus_part = q.minus;
    rep.p1_part = peirce_apply(u, v, 1);
    rep.conclusion_residual = norm(v - (rep.q_minus_part + rep.p1_part));
    return rep;
}

AntipodalReport antipodal_structure(const Element& e, const Element& x,
                                    const Tolerance& tol) {
    require_same_factor(e, x, "antipodal_structure");
    if (!classify(e, tol).minimal) {
        throw ContractError("antipodal_structure: e must be a minimal tripotent");
    }
    if (std::abs(norm(x) - 1.0) > tol.struct_tol) {
        throw ContractError("antipodal_structure: x must have norm one");
    }
    AntipodalReport rep;
    rep.distance = norm(e - x);
    rep.applies = std::abs(rep.distance - 2.0) <= tol.struct_tol;
    rep.p0_part = peirce_apply(e, x, 0);
    rep.conclusion_residual = norm(x - (-e + rep.p0_part));
    return rep;
}

std::string frame_shape_name(FrameShape s) {
    switch (s) {
        case FrameShape::Scalar: return "scalar";
        case FrameShape::OrthogonalPair: return "orthogonal-pair";
        case FrameShape::CollinearPair: return "collinear-pair";
        case FrameShape::Trangle: return "trangle";
        case FrameShape::Quadrangle: return "quadrangle";
    }
    return "?";
}

Element FrameDecomposition::reconstruct() const {
    if (frame.empty()) throw ContractError("FrameDecomposition: empty frame");
    Element acc = frame[0].element * coefficients[0];
    switch (shape) {
        case FrameShape::Scalar:
            break;
        case FrameShape::OrthogonalPair:
        case FrameShape::CollinearPair:
            acc = acc + frame[1].element * coefficients[1];
            break;
        case FrameShape::Trangle:
            acc = acc + frame[1].element * coefficients[1] +
                  frame[2].element * coefficients[2];
            break;
        case FrameShape::Quadrangle:
            // v = a e + b v2 + g v4 + d v3 with frame (e, v2, v3, v4)
            acc = acc + frame[1].element * coefficients[1] +
                  frame[3].element * coefficients[2] +
                  frame[2].element * coefficients[3];
            break;
    }
    return acc;
}

namespace {

/// Span dimension of columns with an honesty window around the rank cut.
int span_dimension(const ComplexMatrix& columns, const Tolerance& tol) {
    Eigen::JacobiSVD<ComplexMatrix> dec(columns);
    const auto& sv = dec.singularValues();
    if (sv.size() == 0 || sv(0) <= 0.0) return 0;
    const double cut = tol.struct_tol;
    int dim = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        const double rel = sv(i) / sv(0);
        if (rel > cut * 16.0) {
            ++dim;
        } else if (rel > cut / 16.0) {
            std::ostringstream msg;
            msg << "classify_pair: ambiguous span dimension; relative spectrum = [";
            for (Eigen::Index k = 0; k < sv.size(); ++k) {
                msg << (k ? ", " : "") << sv(k) / sv(0);
            }
            msg << "] with cut " << cut;
            throw AmbiguityError(msg.str());
        }
    }
    return dim;
}

void check_constraint(bool ok, const std::string& what) {
    if (!ok) throw NumericError("classify_pair: " + what);
}

}  // namespace

FrameDecomposition classify_pair(const Element& e, const Element& v,
                                 const Tolerance& tol) {
    require_same_factor(e, v, "classify_pair");
    const Tripotent te = make_tripotent(e, tol);
    const Tripotent tv = make_tripotent(v, tol);
    if (!te.info.minimal || !tv.info.minimal) {
        throw ContractError("classify_pair: inputs must be minimal tripotents");
    }

    const int n = e.factor().complex_dim();
    ComplexMatrix cols(n, 4);
    cols.col(0) = complex_coordinates(e);
    cols.col(1) = complex_coordinates(v);
    cols.col(2) = complex_coordinates(peirce_apply(e, v, 1));
    cols.col(3) = complex_coordinates(peirce_apply(v, e, 1));
    const int dim = span_dimension(cols, tol);

    const Complex alpha = p2_coefficient(e, v, tol);
    const Element z0 = peirce_apply(e, v, 0);
    const double delta_mag = norm(z0);
    const Element w = peirce_apply(e, v, 1);

    FrameDecomposition out;
    switch (dim) {
        case 1: {
            out.shape = FrameShape::Scalar;
            out.frame = {te};
            out.coefficients = {alpha};
            check_constraint(std::abs(std::abs(alpha) - 1.0) <= tol.struct_tol,
                             "scalar case needs |alpha| = 1");
            break;
        }
        case 2: {
            const bool orth = norm(triple_product(e, e, v)) <= tol.struct_tol;
            if (orth) {
                out.shape = FrameShape::OrthogonalPair;
                check_constraint(delta_mag > tol.struct_tol, "orthogonal pair with zero P0 part");
                const Element w3 = z0 * Complex(1.0 / delta_mag, 0.0);
                out.frame = {te, make_tripotent(w3, tol)};
                out.coefficients = {alpha, Complex(delta_mag, 0.0)};
            } else {
                out.shape = FrameShape::CollinearPair;
                const double beta = norm(w);
                check_constraint(beta > tol.struct_tol, "collinear pair with zero P1 part");
                const Element v2 = w * Complex(1.0 / beta, 0.0);
                const Tripotent tv2 = make_tripotent(v2, tol);
                check_constraint(tv2.info.minimal, "collinear partner is not minimal");
                check_constraint(delta_mag <= tol.struct_tol,
                                 "collinear pair with nonzero P0 part");
                out.frame = {te, tv2};
                out.coefficients = {alpha, Complex(beta, 0.0)};
                check_constraint(
                    std::abs(std::norm(alpha) + beta * beta - 1.0) <= tol.struct_tol * 16,
                    "collinear coefficients must satisfy |a|^2 + |b|^2 = 1");
            }
            break;
        }
        case 3: {
            out.shape = FrameShape::Trangle;
            check_constraint(delta_mag > tol.struct_tol, "trangle case needs P0(e)v != 0");
            const Element et = z0 * Complex(1.0 / delta_mag, 0.0);
            const Complex beta = std::sqrt(alpha * delta_mag);
            check_constraint(std::abs(beta) > tol.struct_tol, "trangle case needs P1(e)v != 0");
            check_constraint(std::abs(norm(w) - std::abs(beta)) <= tol.struct_tol * 16,
                             "||P1(e)v|| must match sqrt(|alpha| delta)");
            const Element u = w * (1.0 / beta);
            out.frame = {te, make_tripotent(u, tol), make_tripotent(et, tol)};
            out.coefficients = {alpha, beta, Complex(delta_mag, 0.0)};
            const PredicateReport tr = is_trangle(e, u, et, tol);
            check_constraint(tr.ok, "extracted frame fails the trangle predicate (worst " +
                                        std::to_string(tr.worst()) + ")");
            break;
        }
        case 4: {
            out.shape = FrameShape::Quadrangle;
            check_constraint(delta_mag > tol.struct_tol, "quadrangle case needs P0(e)v != 0");
            const Element v3 = z0 * Complex(1.0 / delta_mag, 0.0);
            const Element rw = triple_product(e, w, v3) * 2.0;
            const double c2 = std::real(frobenius_inner(e, e));
            const Complex p = alpha * delta_mag;  // beta * gamma
            const double s = std::real(frobenius_inner(w, w)) / c2;  // |b|^2 + |g|^2
            double disc = s * s - 4.0 * std::norm(p);
            check_constraint(disc > -tol.struct_tol, "coefficient discriminant negative");
            // The discriminant is a difference of O(s^2) terms; when it is
            // this small its relative error (and hence the frame) degrades
            // past struct_tol, so the configuration is reported as sitting on
            // the quadrangle/trangle boundary rather than guessed.
            if (disc < 4e-8 * s * s) {
                throw AmbiguityError(
                    "classify_pair: |beta| and |gamma| coincide within the coefficient "
                    "discriminant's conditioning; the pair sits on the quadrangle/trangle "
                    "boundary (disc " + std::to_string(disc) + ", scale " + std::to_string(s * s) +
                    ")");
            }
            disc = std::max(0.0, disc);
            const double beta_sq = 0.5 * (s + std::sqrt(disc));
            const double beta = std::sqrt(beta_sq);
            check_constraint(beta > tol.struct_tol, "quadrangle case needs P1(e)v != 0");
            const Complex gamma = p / beta;
            const double det = beta * beta - std::norm(gamma);
            if (det <= tol.struct_tol) {
                throw AmbiguityError(
                    "classify_pair: |beta| = |gamma| within tolerance; the pair sits on "
                    "the quadrangle/trangle boundary");
            }
            const Element v2 = (w * beta - rw * gamma) * (1.0 / det);
            const Element v4 = (rw * beta - w * std::conj(gamma)) * (1.0 / det);
            const Tripotent tv2 = make_tripotent(v2, tol);
            const Tripotent tv3 = make_tripotent(v3, tol);
            const Tripotent tv4 = make_tripotent(v4, tol);
            check_constraint(tv2.info.minimal && tv3.info.minimal && tv4.info.minimal,
                             "quadrangle frame elements must be minimal");
            const PredicateReport quad = is_quadrangle(e, v2, v3, v4, tol);
            check_constraint(quad.ok, "extracted frame fails the quadrangle predicate (worst " +
                                          std::to_string(quad.worst()) + ")");
            out.frame = {te, tv2, tv3, tv4};
            out.coefficients = {alpha, Complex(beta, 0.0), gamma, Complex(delta_mag, 0.0)};
            break;
        }
        default:
            throw NumericError("classify_pair: span dimension " + std::to_string(dim) +
                               " is outside the Friedman-Russo list");
    }

    const double recon = norm(v - out.reconstruct());
    check_constraint(recon <= tol.struct_tol * 16,
                     "reconstruction residual " + std::to_string(recon));
    return out;
}

}  // namespace jbt
