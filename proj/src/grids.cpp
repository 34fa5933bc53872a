#include "jbtlab/grids.hpp"

#include <cmath>
#include <sstream>

namespace jbt {

double PredicateReport::worst() const {
    double w = 0.0;
    for (const auto& [name, r] : residuals) w = std::max(w, r);
    return w;
}

namespace {

double tripotency_residual(const Element& x) {
    return norm(triple_product(x, x, x) - x);
}

double orthogonality_residual(const Element& a, const Element& b) {
    return std::max(norm(triple_product(a, a, b)), norm(triple_product(b, b, a)));
}

double collinearity_residual(const Element& a, const Element& b) {
    const double r1 = norm(peirce_apply(b, a, 1) - a);
    const double r2 = norm(peirce_apply(a, b, 1) - b);
    return std::max(r1, r2);
}

double governs_residual(const Element& u, const Element& v) {
    // u governs v: v in E2(u), u in E1(v)
    const double r1 = norm(peirce_apply(u, v, 2) - v);
    const double r2 = norm(peirce_apply(v, u, 1) - u);
    return std::max(r1, r2);
}

}  // namespace

PredicateReport is_quadrangle(const Element& u1, const Element& u2,
                              const Element& u3, const Element& u4,
                              const Tolerance& tol) {
    require_same_factor(u1, u2, "is_quadrangle");
    require_same_factor(u1, u3, "is_quadrangle");
    require_same_factor(u1, u4, "is_quadrangle");
    PredicateReport rep;
    rep.residuals = {
        {"tripotent(u1)", tripotency_residual(u1)},
        {"tripotent(u2)", tripotency_residual(u2)},
        {"tripotent(u3)", tripotency_residual(u3)},
        {"tripotent(u4)", tripotency_residual(u4)},
        {"u1_orth_u3", orthogonality_residual(u1, u3)},
        {"u2_orth_u4", orthogonality_residual(u2, u4)},
        {"u1_coll_u2", collinearity_residual(u1, u2)},
        {"u2_coll_u3", collinearity_residual(u2, u3)},
        {"u3_coll_u4", collinearity_residual(u3, u4)},
        {"u4_coll_u1", collinearity_residual(u4, u1)},
        {"closure", norm(u4 - triple_product(u1, u2, u3) * 2.0)},
    };
    rep.ok = rep.worst() <= tol.struct_tol;
    return rep;
}

PredicateReport is_trangle(const Element& v, const Element& u, const Element& vt,
                           const Tolerance& tol) {
    require_same_factor(v, u, "is_trangle");
    require_same_factor(v, vt, "is_trangle");
    PredicateReport rep;
    rep.residuals = {
        {"tripotent(v)", tripotency_residual(v)},
        {"tripotent(u)", tripotency_residual(u)},
        {"tripotent(vt)", tripotency_residual(vt)},
        {"v_orth_vt", orthogonality_residual(v, vt)},
        {"u_governs_v", governs_residual(u, v)},
        {"u_governs_vt", governs_residual(u, vt)},
        {"closure", norm(v - q_apply(u, vt))},
    };
    rep.ok = rep.worst() <= tol.struct_tol;
    return rep;
}

namespace {

ComplexMatrix unit_matrix(int rows, int cols, int r, int c) {
    ComplexMatrix m = ComplexMatrix::Zero(rows, cols);
    m(r, c) = 1.0;
    return m;
}

}  // namespace

Grid standard_grid(const Factor& factor, const Tolerance& tol) {
    Grid grid;
    grid.factor = factor;
    const FactorKind kind = factor.kind();
    if (kind == FactorKind::Spin || kind == FactorKind::DirectSum) {
        throw ContractError("standard_grid: supported for matrix factors only (got " +
                            factor.descriptor() + ")");
    }
    const int rows = factor.rows(), cols = factor.cols();
    std::vector<Element> elems;
    if (kind == FactorKind::Rectangular) {
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) {
                grid.indices.emplace_back(r, c);
                elems.push_back(unchecked_element(factor, {unit_matrix(rows, cols, r, c)}));
            }
    } else if (kind == FactorKind::Antisymmetric) {
        for (int i = 0; i < rows; ++i)
            for (int j = i + 1; j < cols; ++j) {
                grid.indices.emplace_back(i, j);
                elems.push_back(unchecked_element(
                    factor, {unit_matrix(rows, cols, i, j) - unit_matrix(rows, cols, j, i)}));
            }
    } else {  // Symmetric: diagonal units plus symmetrized pairs
        for (int i = 0; i < rows; ++i)
            for (int j = i; j < cols; ++j) {
                grid.indices.emplace_back(i, j);
                elems.push_back(unchecked_element(
                    factor, {i == j ? unit_matrix(rows, cols, i, i)
                                    : unit_matrix(rows, cols, i, j) +
                                          unit_matrix(rows, cols, j, i)}));
            }
    }

    for (const auto& g : elems) grid.elements.push_back(make_tripotent(g, tol));

    // Real span of {g, ig} must be the whole factor.
    const int n = factor.complex_dim();
    RealMatrix span(2 * n, 2 * static_cast<int>(elems.size()));
    for (size_t k = 0; k < elems.size(); ++k) {
        span.col(2 * static_cast<Eigen::Index>(k)) = real_coordinates(elems[k]);
        span.col(2 * static_cast<Eigen::Index>(k) + 1) =
            real_coordinates(elems[k] * Complex(0.0, 1.0));
    }
    if (matrix_rank(span.cast<Complex>(), tol.struct_tol) != 2 * n) {
        throw NumericError("standard_grid: grid does not span the factor");
    }

    grid.relations.resize(elems.size());
    for (size_t a = 0; a < elems.size(); ++a) {
        grid.relations[a].resize(elems.size());
        for (size_t b = 0; b < elems.size(); ++b) {
            grid.relations[a][b] =
                a == b ? "self" : relation(elems[a], elems[b], tol).primary();
        }
    }
    return grid;
}

Tripotent orthogonal_collinear_partner(const Element& e1, const Element& e2,
                                       std::uint64_t seed, const Tolerance& tol,
                                       int max_attempts) {
    require_same_factor(e1, e2, "orthogonal_collinear_partner");
    if (!relation(e1, e2, tol).collinear) {
        throw ContractError("orthogonal_collinear_partner: inputs must be collinear");
    }
    bool subspace_seen = false;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        const Element z =
            sample_element(e1.factor(), Rng::derive(seed, static_cast<std::uint64_t>(attempt)));
        // E0(e1) and E1(e2) are compatible (e1 lies in a Peirce space of e2),
        // so the composition projects onto the intersection.
        Element y = peirce_apply(e2, peirce_apply(e1, z, 0), 1);
        const double ny = norm(y);
        if (ny <= 1e3 * tol.struct_tol) continue;
        subspace_seen = true;
        const SupportResult sup = support_tripotent(y * Complex(1.0 / ny, 0.0), tol);
        if (!sup.converged) continue;
        const Element& u = sup.tripotent;
        if (!is_tripotent(u, tol)) continue;
        const TripotentRelation r1 = relation(u, e1, tol);
        const TripotentRelation r2 = relation(u, e2, tol);
        if (!r1.orthogonal || !r2.collinear) continue;
        const Tripotent t = make_tripotent(u, tol);
        if (!t.info.minimal) continue;
        return t;
    }
    if (!subspace_seen) {
        throw NumericError(
            "orthogonal_collinear_partner: E0(e1) /\\ E1(e2) is numerically zero; "
            "the factor has rank < 2 or the inputs are inconsistent");
    }
    throw NumericError("orthogonal_collinear_partner: no partner found after " +
                       std::to_string(max_attempts) + " attempts");
}

std::array<Tripotent, 4> complete_to_quadrangle(const Element& e, const Element& v2,
                                                std::uint64_t seed,
                                                const Tolerance& tol) {
    const Tripotent v3 = orthogonal_collinear_partner(e, v2, seed, tol);
    const Element v4 = triple_product(e, v2, v3.element) * 2.0;
    const PredicateReport rep = is_quadrangle(e, v2, v3.element, v4, tol);
    if (!rep.ok) {
        throw NumericError("complete_to_quadrangle: closure failed (worst residual " +
                           std::to_string(rep.worst()) + ")");
    }
    return {make_tripotent(e, tol), make_tripotent(v2, tol), v3, make_tripotent(v4, tol)};
}

TrangleMidpoints spin_trangle_midpoints(const Element& v, const Element& u,
                                        const Element& vt, const Tolerance& tol) {
    const PredicateReport tr = is_trangle(v, u, vt, tol);
    if (!tr.ok) {
        throw ContractError("spin_trangle_midpoints: inputs are not a trangle (worst " +
                            std::to_string(tr.worst()) + ")");
    }
    if (!classify(v, tol).minimal || !classify(vt, tol).minimal) {
        throw ContractError("spin_trangle_midpoints: v and vt must be minimal");
    }
    const Element w = (v + u + vt) * 0.5;
    const Element wt = (v - u + vt) * 0.5;
    const Element uh = v - vt;
    const Tripotent tw = make_tripotent(w, tol);
    const Tripotent twt = make_tripotent(wt, tol);
    if (!tw.info.minimal || !twt.info.minimal ||
        !relation(w, wt, tol).orthogonal) {
        throw NumericError("spin_trangle_midpoints: midpoints are not an orthogonal "
                           "minimal pair");
    }
    const PredicateReport tr2 = is_trangle(w, uh, wt, tol);
    if (!tr2.ok) {
        throw NumericError("spin_trangle_midpoints: (w, v - vt, wt) fails the trangle "
                           "predicate (worst " + std::to_string(tr2.worst()) + ")");
    }
    return {tw, twt, make_tripotent(uh, tol)};
}

// ---------------------------------------------------------------------------
// Samplers

std::optional<std::pair<Tripotent, Tripotent>> sample_collinear_pair(
    const Factor& factor, std::uint64_t seed, const Tolerance& tol) {
    for (int attempt = 0; attempt < 12; ++attempt) {
        const std::uint64_t s = Rng::derive(seed, static_cast<std::uint64_t>(attempt));
        const Element e1 = sample_minimal_tripotent(factor, s);
        const Element z = sample_element(factor, Rng::derive(s, 1));
        Element y = peirce_apply(e1, z, 1);
        const double ny = norm(y);
        if (ny <= 1e3 * tol.struct_tol) continue;
        SupportResult sup;
        try {
            sup = support_tripotent(y * Complex(1.0 / ny, 0.0), tol);
        } catch (const Error&) {
            continue;
        }
        if (!sup.converged || !is_tripotent(sup.tripotent, tol)) continue;
        Tripotent t2;
        try {
            t2 = make_tripotent(sup.tripotent, tol);
        } catch (const Error&) {
            continue;
        }
        if (!t2.info.minimal) continue;
        if (!relation(e1, t2.element, tol).collinear) continue;
        return std::make_pair(make_tripotent(e1, tol), t2);
    }
    return std::nullopt;
}

namespace {

std::vector<ComplexMatrix> orthogonal_minimal_blocks(const Factor& f, int count,
                                                     Rng& rng) {
    std::vector<ComplexMatrix> out;
    const int rows = f.rows(), cols = f.cols();
    switch (f.kind()) {
        case FactorKind::Rectangular: {
            ComplexMatrix gl(rows, count), gr(cols, count);
            for (int r = 0; r < rows; ++r)
                for (int c = 0; c < count; ++c) gl(r, c) = rng.cgaussian();
            for (int r = 0; r < cols; ++r)
                for (int c = 0; c < count; ++c) gr(r, c) = rng.cgaussian();
            Eigen::HouseholderQR<ComplexMatrix> ql(gl), qr(gr);
            const ComplexMatrix u = ql.householderQ() * ComplexMatrix::Identity(rows, count);
            const ComplexMatrix v = qr.householderQ() * ComplexMatrix::Identity(cols, count);
            for (int i = 0; i < count; ++i) out.push_back(u.col(i) * v.col(i).adjoint());
            break;
        }
        case FactorKind::Antisymmetric: {
            ComplexMatrix g(rows, 2 * count);
            for (int r = 0; r < rows; ++r)
                for (int c = 0; c < 2 * count; ++c) g(r, c) = rng.cgaussian();
            Eigen::HouseholderQR<ComplexMatrix> qr(g);
            const ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(rows, 2 * count);
            for (int i = 0; i < count; ++i) {
                const ComplexVector a = q.col(2 * i), b = q.col(2 * i + 1);
                out.push_back(a.conjugate() * b.adjoint() - b.conjugate() * a.adjoint());
            }
            break;
        }
        case FactorKind::Symmetric: {
            ComplexMatrix g(rows, count);
            for (int r = 0; r < rows; ++r)
                for (int c = 0; c < count; ++c) g(r, c) = rng.cgaussian();
            Eigen::HouseholderQR<ComplexMatrix> qr(g);
            const ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(rows, count);
            for (int i = 0; i < count; ++i) {
                out.push_back(q.col(i).conjugate() * q.col(i).adjoint());
            }
            break;
        }
        case FactorKind::Spin: {
            RealMatrix g(rows, 2);
            for (int r = 0; r < rows; ++r)
                for (int c = 0; c < 2; ++c) g(r, c) = rng.gaussian();
            Eigen::HouseholderQR<RealMatrix> qr(g);
            const RealMatrix q = qr.householderQ() * RealMatrix::Identity(rows, 2);
            ComplexMatrix e(rows, 1);
            for (int i = 0; i < rows; ++i) e(i, 0) = 0.5 * Complex(q(i, 0), q(i, 1));
            out.push_back(e);
            if (count == 2) {
                const double phase = 6.283185307179586 * rng.uniform();
                out.push_back(std::polar(1.0, phase) * e.conjugate());
            }
            break;
        }
        case FactorKind::DirectSum:
            throw ContractError("orthogonal_minimal_blocks: unexpected sum block");
    }
    return out;
}

}  // namespace

std::vector<Tripotent> sample_orthogonal_minimals(const Factor& factor, int count,
                                                  std::uint64_t seed,
                                                  const Tolerance& tol) {
    if (count < 1 || count > factor.rank()) {
        throw ContractError("sample_orthogonal_minimals: count must be in [1, rank]");
    }
    Rng rng(seed);
    std::vector<Element> elems;
    if (!factor.is_direct_sum()) {
        for (auto& m : orthogonal_minimal_blocks(factor, count, rng)) {
            elems.push_back(unchecked_element(factor, {std::move(m)}));
        }
    } else {
        // Distribute across summands, up to each block's rank.
        int remaining = count;
        std::vector<std::vector<ComplexMatrix>> per_block(
            static_cast<size_t>(factor.block_count()));
        for (int b = 0; b < factor.block_count() && remaining > 0; ++b) {
            const Factor& bf = factor.block(b);
            const int take = std::min(remaining, bf.rank());
            if (take > 0) per_block[static_cast<size_t>(b)] = orthogonal_minimal_blocks(bf, take, rng);
            remaining -= take;
        }
        const size_t total = [&] {
            size_t t = 0;
            for (auto& v : per_block) t = std::max(t, v.size());
            size_t sum = 0;
            for (auto& v : per_block) sum += v.size();
            (void)t;
            return sum;
        }();
        for (size_t k = 0; k < total; ++k) {
            std::vector<ComplexMatrix> blocks;
            size_t seen = 0;
            for (int b = 0; b < factor.block_count(); ++b) {
                const Factor& bf = factor.block(b);
                const auto& mats = per_block[static_cast<size_t>(b)];
                if (k >= seen && k < seen + mats.size()) {
                    blocks.push_back(mats[k - seen]);
                } else {
                    blocks.push_back(ComplexMatrix::Zero(bf.rows(), bf.cols()));
                }
                seen += mats.size();
            }
            elems.push_back(unchecked_element(factor, std::move(blocks)));
        }
    }
    std::vector<Tripotent> out;
    out.reserve(elems.size());
    for (const auto& e : elems) out.push_back(make_tripotent(e, tol));
    return out;
}

std::optional<std::array<Tripotent, 3>> sample_trangle(const Factor& factor,
                                                       std::uint64_t seed,
                                                       const Tolerance& tol) {
    if (factor.rank() < 2) return std::nullopt;
    for (int attempt = 0; attempt < 12; ++attempt) {
        const std::uint64_t s = Rng::derive(seed, static_cast<std::uint64_t>(attempt));
        std::vector<Tripotent> pair;
        try {
            pair = sample_orthogonal_minimals(factor, 2, s, tol);
        } catch (const Error&) {
            continue;
        }
        if (pair.size() != 2) continue;
        const Element& v = pair[0].element;
        const Element& vt = pair[1].element;
        const Element e = v + vt;  // rank-two tripotent; E2(e) is a spin factor
        const double c2 = std::real(frobenius_inner(v, v));

        // Spin conjugation of E2(e) recovered from Q(e):
        //   conj(x) = 2 conj((x|e)) e - Q(e) x   with (x|e) = <x,e>_F / (2 c2).
        const auto conj_x = [&](const Element& x) {
            const Complex inner = frobenius_inner(x, e) / (2.0 * c2);
            return e * (2.0 * std::conj(inner)) - q_apply(e, x);
        };

        const Element z = sample_element(factor, Rng::derive(s, 7));
        Element y = peirce_apply(e, z, 2);
        y = peirce_apply(v, y, 1);
        y = peirce_apply(vt, y, 1);
        const Element s0 = (y + conj_x(y)) * 0.5;
        const double s0n2 = std::real(frobenius_inner(s0, s0)) / (2.0 * c2);
        if (s0n2 <= 1e3 * tol.struct_tol) continue;
        const Element u = s0 * Complex(0.0, 1.0 / std::sqrt(s0n2));
        if (!is_tripotent(u, tol)) continue;
        if (!is_trangle(v, u, vt, tol).ok) continue;
        return std::array<Tripotent, 3>{pair[0], make_tripotent(u, tol), pair[1]};
    }
    return std::nullopt;
}

std::optional<std::array<Tripotent, 4>> sample_quadrangle(const Factor& factor,
                                                          std::uint64_t seed,
                                                          const Tolerance& tol) {
    if (factor.rank() < 2) return std::nullopt;
    for (int attempt = 0; attempt < 8; ++attempt) {
        const std::uint64_t s = Rng::derive(seed, 1000 + static_cast<std::uint64_t>(attempt));
        const auto pair = sample_collinear_pair(factor, s, tol);
        if (!pair) return std::nullopt;  // factor admits no collinear minimal pairs
        try {
            return complete_to_quadrangle(pair->first.element, pair->second.element,
                                          Rng::derive(s, 2), tol);
        } catch (const Error&) {
            continue;
        }
    }
    return std::nullopt;
}

}  // namespace jbt
