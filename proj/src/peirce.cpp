#include "jbtlab/peirce.hpp"

#include <cmath>
#include <sstream>

namespace jbt {

std::string TripotentInfo::label() const {
    if (minimal) return "minimal";
    if (unitary) return "unitary";
    if (complete) return "complete";
    return "none-of-these";
}

Element l_apply(const Element& a, const Element& b, const Element& x) {
    return triple_product(a, b, x);
}

Element q_apply(const Element& u, const Element& x) {
    return triple_product(u, x, u);
}

bool is_tripotent(const Element& x, const Tolerance& tol) {
    const double n = norm(x);
    const Element cube = triple_product(x, x, x);
    return norm(cube - x) <= tol.struct_tol * std::max(1.0, n);
}

Element peirce_apply(const Element& u, const Element& x, int j) {
    const Element y = l_apply(u, u, x);
    const Element z = l_apply(u, u, y);
    switch (j) {
        case 2: return z * 2.0 - y;                    // L(2L - id)
        case 1: return (y - z) * 4.0;                  // 4 L(id - L)
        case 0: return x - y * 3.0 + z * 2.0;          // (id - L)(id - 2L)
        default: throw ContractError("peirce_apply: j must be 0, 1 or 2");
    }
}

PeirceDecomposition peirce_project(const Element& u, const Element& x,
                                   const Tolerance& tol) {
    require_same_factor(u, x, "peirce_project");
    if (!is_tripotent(u, tol)) {
        throw ContractError("peirce_project: u is not a tripotent");
    }
    const Element y = l_apply(u, u, x);
    const Element z = l_apply(u, u, y);
    PeirceDecomposition out{z * 2.0 - y, (y - z) * 4.0, x - y * 3.0 + z * 2.0};
    return out;
}

QSplit q_split(const Element& u, const Element& x, const Tolerance& tol) {
    require_same_factor(u, x, "q_split");
    if (!is_tripotent(u, tol)) {
        throw ContractError("q_split: u is not a tripotent");
    }
    const Element x2 = peirce_apply(u, x, 2);
    const Element qx2 = q_apply(u, x2);
    QSplit out{(x2 + qx2) * 0.5, (x2 - qx2) * 0.5, x - x2};
    return out;
}

namespace {

/// Complex dimensions of the Peirce spaces of u, by ranking the images of
/// the canonical basis under P2(u) and P0(u).
struct PeirceDims {
    int dim2 = 0;
    int dim0 = 0;
};

PeirceDims peirce_dimensions(const Element& u, const Tolerance& tol) {
    const Factor& f = u.factor();
    const int n = f.complex_dim();
    ComplexMatrix img2(n, n), img0(n, n);
    for (int j = 0; j < n; ++j) {
        ComplexVector ez = ComplexVector::Zero(n);
        ez(j) = 1.0;
        const Element bj = element_from_complex_coordinates(f, ez);
        const Element y = l_apply(u, u, bj);
        const Element z = l_apply(u, u, y);
        img2.col(j) = complex_coordinates(z * 2.0 - y);
        img0.col(j) = complex_coordinates(bj - y * 3.0 + z * 2.0);
    }
    PeirceDims dims;
    dims.dim2 = matrix_rank(img2, tol.struct_tol);
    dims.dim0 = matrix_rank(img0, tol.struct_tol);
    return dims;
}

int structural_block_rank(const Factor& bf, const ComplexMatrix& m) {
    double squared = m.squaredNorm();
    double raw = 0.0;
    switch (bf.kind()) {
        case FactorKind::Rectangular:
        case FactorKind::Symmetric:
            raw = squared;  // singular values of a tripotent are 0 or 1
            break;
        case FactorKind::Antisymmetric:
            raw = squared / 2.0;  // nonzero singular values come in pairs
            break;
        case FactorKind::Spin:
            raw = 2.0 * squared;  // (u|u) = 1/2 for minimal, 1 for unitary
            break;
        case FactorKind::DirectSum:
            throw ContractError("structural_block_rank: unexpected sum block");
    }
    const int r = static_cast<int>(std::lround(raw));
    if (std::abs(raw - r) > 0.1) {
        std::ostringstream msg;
        msg << "structural rank: squared invariant " << raw
            << " is not close to an integer; input is not a clean tripotent";
        throw NumericError(msg.str());
    }
    return r;
}

}  // namespace

TripotentInfo classify(const Element& u, const Tolerance& tol) {
    if (!is_tripotent(u, tol)) {
        throw ContractError("classify: input is not a tripotent");
    }
    const PeirceDims dims = peirce_dimensions(u, tol);
    TripotentInfo info;
    info.minimal = (dims.dim2 == 1);
    info.complete = (dims.dim0 == 0);
    info.unitary = (dims.dim2 == u.factor().complex_dim());
    int rank = 0;
    for (int b = 0; b < u.block_count(); ++b) {
        rank += structural_block_rank(u.factor().block(b), u.block(b));
    }
    info.rank = rank;
    return info;
}

Tripotent make_tripotent(const Element& x, const Tolerance& tol) {
    if (!is_tripotent(x, tol)) {
        throw ContractError("make_tripotent: {x,x,x} != x within tolerance");
    }
    return Tripotent{x, classify(x, tol)};
}

namespace {

bool in_peirce_space(const Element& a, const Element& b, int j, const Tolerance& tol) {
    // a in E_j(b)
    const Element pa = peirce_apply(b, a, j);
    return norm(pa - a) <= tol.struct_tol * std::max(1.0, norm(a));
}

}  // namespace

std::string TripotentRelation::primary() const {
    if (orthogonal) return "orthogonal";
    if (collinear) return "collinear";
    if (a_governs_b) return "governs(a,b)";
    if (b_governs_a) return "governs(b,a)";
    if (a_leq_b) return "leq(a,b)";
    if (b_leq_a) return "leq(b,a)";
    return "other";
}

TripotentRelation relation(const Element& a, const Element& b, const Tolerance& tol) {
    require_same_factor(a, b, "relation");
    if (!is_tripotent(a, tol) || !is_tripotent(b, tol)) {
        throw ContractError("relation: inputs must be tripotents");
    }
    TripotentRelation rel;
    const double scale = std::max(1.0, std::max(norm(a), norm(b)));
    rel.orthogonal = norm(triple_product(a, a, b)) <= tol.struct_tol * scale &&
                     norm(triple_product(b, b, a)) <= tol.struct_tol * scale;
    const bool a_in_b1 = in_peirce_space(a, b, 1, tol);
    const bool b_in_a1 = in_peirce_space(b, a, 1, tol);
    rel.collinear = a_in_b1 && b_in_a1;
    rel.a_governs_b = in_peirce_space(b, a, 2, tol) && a_in_b1;
    rel.b_governs_a = in_peirce_space(a, b, 2, tol) && b_in_a1;

    const Element d_ab = b - a;  // a <= b iff b - a is a tripotent orthogonal to a
    rel.a_leq_b = is_tripotent(d_ab, tol) &&
                  norm(triple_product(d_ab, d_ab, a)) <= tol.struct_tol * scale;
    const Element d_ba = a - b;
    rel.b_leq_a = is_tripotent(d_ba, tol) &&
                  norm(triple_product(d_ba, d_ba, b)) <= tol.struct_tol * scale;
    return rel;
}

SupportResult support_tripotent(const Element& x, const Tolerance& tol,
                                int max_iterations) {
    const double n = norm(x);
    if (std::abs(n - 1.0) > tol.eq_tol) {
        throw ContractError("support_tripotent: input must have norm one (got " +
                            std::to_string(n) + ")");
    }
    SupportResult out;
    Element prev = x;
    double prev_delta = -1.0;
    double ratio = 0.0;
    for (int it = 1; it <= max_iterations; ++it) {
        const Element cur = l_apply(x, x, prev);
        const double delta = norm(cur - prev);
        if (prev_delta > 1e-300) ratio = delta / prev_delta;
        prev_delta = delta;
        prev = cur;
        out.iterations = it;
        out.last_delta = delta;
        if (delta <= tol.eq_tol) {
            out.converged = true;
            break;
        }
    }
    // ratio ~ sigma^2 of the slowest sub-unit singular value
    out.gap = 1.0 - std::sqrt(std::min(1.0, std::max(0.0, ratio)));
    out.tripotent = prev;
    return out;
}

Element svd_support_tripotent(const Element& x, const Tolerance& tol) {
    std::vector<ComplexMatrix> blocks;
    for (int b = 0; b < x.block_count(); ++b) {
        const Factor& bf = x.factor().block(b);
        if (bf.kind() == FactorKind::Spin) {
            throw ContractError("svd_support_tripotent: matrix factors only");
        }
        const ComplexMatrix& m = x.block(b);
        if (m.cwiseAbs().maxCoeff() == 0.0) {
            blocks.push_back(ComplexMatrix::Zero(m.rows(), m.cols()));
            continue;
        }
        const Svd dec = svd(m, tol);
        ComplexMatrix u = ComplexMatrix::Zero(m.rows(), m.cols());
        for (Eigen::Index i = 0; i < dec.singular_values.size(); ++i) {
            if (std::abs(dec.singular_values(i) - 1.0) <= tol.struct_tol) {
                u += dec.left.col(i) * dec.right.col(i).adjoint();
            }
        }
        blocks.push_back(std::move(u));
    }
    return Element(x.factor(), std::move(blocks));
}

Complex p2_coefficient(const Element& u, const Element& x, const Tolerance& tol) {
    require_same_factor(u, x, "p2_coefficient");
    const Element p = peirce_apply(u, x, 2);
    const double c2 = std::real(frobenius_inner(u, u));
    if (c2 <= tol.struct_tol) {
        throw ContractError("p2_coefficient: u is (numerically) zero");
    }
    const Complex phi = frobenius_inner(p, u) / c2;
    if (norm(p - u * phi) > tol.struct_tol * std::max(1.0, norm(x))) {
        throw ContractError(
            "p2_coefficient: P2(u)x is not a multiple of u; u is not minimal");
    }
    return phi;
}

}  // namespace jbt
