#include <doctest.h>

#include "test_helpers.hpp"

using namespace jbt;
using namespace jbt::test;

TEST_CASE("tripotent detection on pinned elements") {
    const Factor f = Factor::rectangular(2, 2);
    const Element e11 = elem(f, unit(2, 2, 0, 0));
    CHECK(is_tripotent(e11));
    CHECK_FALSE(is_tripotent(e11 * Complex(0.5, 0.0)));

    const Factor s = Factor::spin(3);
    const Element e = (spin_basis(s, 0) + spin_basis(s, 1) * Complex(0, 1)) * Complex(0.5, 0.0);
    CHECK(is_tripotent(e));
}

TEST_CASE("Peirce projections of a matrix unit split the matrix") {
    const Factor f = Factor::rectangular(2, 2);
    const Element u = elem(f, unit(2, 2, 0, 0));
    const Complex a(0.37, -0.2), b(-1.4, 0.11), c(0.05, 0.9), d(2.0, -0.7);
    const Element x = elem(f, mat2(a, b, c, d));
    const PeirceDecomposition dec = peirce_project(u, x);
    CHECK(approx_equal(dec.x2, elem(f, mat2(a, 0, 0, 0)), 1e-13));
    CHECK(approx_equal(dec.x1, elem(f, mat2(0, b, c, 0)), 1e-13));
    CHECK(approx_equal(dec.x0, elem(f, mat2(0, 0, 0, d)), 1e-13));

    const PeirceDecomposition self = peirce_project(u, u);
    CHECK(approx_equal(self.x2, u, 1e-14));
    CHECK(norm(self.x1) < 1e-14);
    CHECK(norm(self.x0) < 1e-14);

    CHECK_THROWS_AS(peirce_project(x, u), ContractError);  // x is not a tripotent
}

TEST_CASE("spin Peirce projections match the inner-product formulas") {
    const Factor f = Factor::spin(5);
    for (int trial = 0; trial < 40; ++trial) {
        const std::uint64_t s = Rng::derive(555, static_cast<std::uint64_t>(trial));
        const Element v = sample_minimal_tripotent(f, s);
        const Element vt = spin_conjugate(v);
        const Element x = sample_element(f, Rng::derive(s, 1));
        const PeirceDecomposition dec = peirce_project(v, x);
        // P2(v)x = 2 (x|v) v and P0(v)x = 2 (x|conj v) conj v
        CHECK(norm(dec.x2 - v * (2.0 * spin_inner(x, v))) < 1e-10);
        CHECK(norm(dec.x0 - vt * (2.0 * spin_inner(x, vt))) < 1e-10);
    }
}

TEST_CASE("Peirce projections sum to the identity and are idempotent") {
    for (const Factor& f : standard_factors()) {
        CAPTURE(f.descriptor());
        for (int trial = 0; trial < 25; ++trial) {
            const std::uint64_t s = Rng::derive(808, static_cast<std::uint64_t>(trial));
            const int k = 1 + static_cast<int>(s % static_cast<std::uint64_t>(f.rank()));
            const auto mins = sample_orthogonal_minimals(f, k, Rng::derive(s, 1), Tolerance{});
            Element u = mins[0].element;
            for (size_t i = 1; i < mins.size(); ++i) u = u + mins[i].element;
            const Element x = sample_element(f, Rng::derive(s, 2));
            const PeirceDecomposition dec = peirce_project(u, x);
            CHECK(norm(dec.sum() - x) < 1e-9 * std::max(1.0, norm(x)));
            CHECK(norm(peirce_apply(u, dec.x2, 2) - dec.x2) < 1e-9 * std::max(1.0, norm(x)));
            CHECK(norm(peirce_apply(u, dec.x1, 1) - dec.x1) < 1e-9 * std::max(1.0, norm(x)));
            CHECK(norm(peirce_apply(u, dec.x0, 0) - dec.x0) < 1e-9 * std::max(1.0, norm(x)));
        }
    }
}

TEST_CASE("Peirce multiplication rules") {
    for (const Factor& f : standard_factors()) {
        CAPTURE(f.descriptor());
        for (int trial = 0; trial < 12; ++trial) {
            const std::uint64_t s = Rng::derive(4242, static_cast<std::uint64_t>(trial));
            const Element u = sample_minimal_tripotent(f, s);
            const Element x = sample_element(f, Rng::derive(s, 1));
            const Element y = sample_element(f, Rng::derive(s, 2));
            const Element z = sample_element(f, Rng::derive(s, 3));
            const PeirceDecomposition dx = peirce_project(u, x);
            const PeirceDecomposition dy = peirce_project(u, y);
            const PeirceDecomposition dz = peirce_project(u, z);

            // {E2, E0, E} = {E0, E2, E} = 0
            CHECK(norm(triple_product(dx.x2, dy.x0, z)) < 1e-8);
            CHECK(norm(triple_product(dx.x0, dy.x2, z)) < 1e-8);

            // {E_i, E_j, E_k} lies in E_{i-j+k}
            auto check_membership = [&](const Element& a, int i, const Element& b, int j,
                                        const Element& c, int k) {
                const Element t = triple_product(a, b, c);
                const int target = i - j + k;
                if (target < 0 || target > 2) {
                    CHECK(norm(t) < 1e-8);
                } else {
                    CHECK(norm(peirce_apply(u, t, target) - t) < 1e-8);
                }
            };
            check_membership(dx.x2, 2, dy.x1, 1, dz.x1, 1);
            check_membership(dx.x1, 1, dy.x1, 1, dz.x0, 0);
            check_membership(dx.x1, 1, dy.x0, 0, dz.x1, 1);
            check_membership(dx.x2, 2, dy.x2, 2, dz.x1, 1);
            check_membership(dx.x0, 0, dy.x1, 1, dz.x2, 2);
        }
    }
}

TEST_CASE("compatible tripotents have commuting Peirce projections") {
    for (const Factor& f : standard_factors()) {
        CAPTURE(f.descriptor());
        if (f.rank() < 2) continue;
        for (int trial = 0; trial < 8; ++trial) {
            const std::uint64_t s = Rng::derive(616, static_cast<std::uint64_t>(trial));
            const auto pair = sample_orthogonal_minimals(f, 2, s, Tolerance{});
            const Element& u = pair[0].element;  // u lies in E0(v)
            const Element& v = pair[1].element;
            const Element x = sample_element(f, Rng::derive(s, 5));
            for (int j = 0; j <= 2; ++j) {
                for (int k = 0; k <= 2; ++k) {
                    const Element lhs = peirce_apply(u, peirce_apply(v, x, j), k);
                    const Element rhs = peirce_apply(v, peirce_apply(u, x, k), j);
                    CHECK(norm(lhs - rhs) < 1e-8 * std::max(1.0, norm(x)));
                }
            }
        }
    }
}

TEST_CASE("q_split separates the involution eigenspaces") {
    const Factor f = Factor::rectangular(2, 2);
    const Element u = elem(f, unit(2, 2, 0, 0));

    const QSplit a = q_split(u, u);
    CHECK(approx_equal(a.plus, u, 1e-14));
    CHECK(norm(a.minus) < 1e-14);
    CHECK(norm(a.zero) < 1e-14);

    const QSplit b = q_split(u, u * Complex(0, 1));
    CHECK(norm(b.plus) < 1e-14);
    CHECK(approx_equal(b.minus, u * Complex(0, 1), 1e-14));

    const Element e12 = elem(f, unit(2, 2, 0, 1));
    const QSplit c = q_split(u, e12);
    CHECK(norm(c.plus) < 1e-14);
    CHECK(norm(c.minus) < 1e-14);
    CHECK(approx_equal(c.zero, e12, 1e-14));

    // Q(u) fixes plus, negates minus, kills zero (random inputs).
    for (int trial = 0; trial < 30; ++trial) {
        const Element x = sample_element(f, Rng::derive(9000, static_cast<std::uint64_t>(trial)));
        const QSplit q = q_split(u, x);
        CHECK(norm(q_apply(u, q.plus) - q.plus) < 1e-10);
        CHECK(norm(q_apply(u, q.minus) + q.minus) < 1e-10);
        CHECK(norm(q_apply(u, q.zero)) < 1e-10);
        CHECK(norm(q.plus + q.minus + q.zero - x) < 1e-10);
    }
}

TEST_CASE("classification of pinned tripotents") {
    {
        const Factor f = Factor::rectangular(2, 3);
        const TripotentInfo info = classify(elem(f, unit(2, 3, 0, 0)));
        CHECK(info.minimal);
        CHECK(info.rank == 1);
        CHECK_FALSE(info.complete);
        CHECK(info.label() == "minimal");
    }
    {
        const Factor f = Factor::rectangular(2, 2);
        const TripotentInfo info = classify(elem(f, mat2(1, 0, 0, 1)));
        CHECK(info.unitary);
        CHECK(info.complete);
        CHECK_FALSE(info.minimal);
        CHECK(info.rank == 2);
    }
    {
        const Factor f = Factor::spin(4);
        const TripotentInfo info = classify(spin_basis(f, 0));
        CHECK(info.complete);
        CHECK(info.unitary);
        CHECK(info.rank == 2);
    }
    {
        // Antisymmetric grid elements have matrix rank 2 but triple rank 1.
        const Factor f = Factor::antisymmetric(4);
        const Element u = elem(f, unit(4, 4, 0, 1) - unit(4, 4, 1, 0));
        CHECK(matrix_rank(u.matrix(), 0.5) == 2);
        const TripotentInfo info = classify(u);
        CHECK(info.minimal);
        CHECK(info.rank == 1);
    }
    CHECK_THROWS_AS(classify(elem(Factor::rectangular(2, 2), mat2(0.5, 0, 0, 0))),
                    ContractError);
}

TEST_CASE("relations on pinned pairs") {
    const Factor f = Factor::rectangular(2, 2);
    const Element e11 = elem(f, unit(2, 2, 0, 0));
    const Element e22 = elem(f, unit(2, 2, 1, 1));
    const Element e12 = elem(f, unit(2, 2, 0, 1));

    CHECK(relation(e11, e22).primary() == "orthogonal");
    CHECK(relation(e11, e12).primary() == "collinear");

    const Factor s2 = Factor::symmetric(2);
    const Element u = elem(s2, mat2(0, 1, 1, 0));
    const Element v = elem(s2, mat2(1, 0, 0, 0));
    const TripotentRelation rel = relation(u, v);
    CHECK(rel.a_governs_b);
    CHECK(rel.primary() == "governs(a,b)");

    // partial order: E11 <= identity
    const Element id2 = elem(f, mat2(1, 0, 0, 1));
    const TripotentRelation leq = relation(e11, id2);
    CHECK(leq.a_leq_b);
    CHECK_FALSE(leq.b_leq_a);
}

TEST_CASE("support tripotents via odd powers") {
    const Factor f = Factor::rectangular(2, 2);
    const Element x = elem(f, mat2(1.0, 0, 0, 0.5));
    const SupportResult sup = support_tripotent(x);
    CHECK(sup.converged);
    CHECK(approx_equal(sup.tripotent, elem(f, unit(2, 2, 0, 0)), 1e-8));

    const Element e11 = elem(f, unit(2, 2, 0, 0));
    const SupportResult fixed = support_tripotent(e11);
    CHECK(fixed.converged);
    CHECK(fixed.iterations == 1);
    CHECK(approx_equal(fixed.tripotent, e11, 1e-12));

    const Element id2 = elem(f, mat2(1, 0, 0, 1));
    const SupportResult idr = support_tripotent(id2);
    CHECK(idr.converged);
    CHECK(approx_equal(idr.tripotent, id2, 1e-12));
    CHECK(classify(idr.tripotent).unitary);

    CHECK_THROWS_AS(support_tripotent(elem(f, mat2(0.5, 0, 0, 0.25))), ContractError);

    // Slow convergence: singular value 0.999 is flagged, with a gap estimate.
    const SupportResult slow = support_tripotent(elem(f, mat2(1.0, 0, 0, 0.999)));
    CHECK_FALSE(slow.converged);
    CHECK(slow.gap < 2e-3);
}

TEST_CASE("support tripotent agrees with the SVD construction") {
    for (const char* d : {"rect:3x3", "sym:3", "asym:4"}) {
        const Factor f = Factor::parse(d);
        CAPTURE(d);
        for (int trial = 0; trial < 30; ++trial) {
            const Element x = sample_sphere_point(f, Rng::derive(321, static_cast<std::uint64_t>(trial)));
            const SupportResult sup = support_tripotent(x);
            if (!sup.converged) continue;  // near-degenerate spectrum, skip honestly
            const Element via_svd = svd_support_tripotent(x);
            CHECK(norm(sup.tripotent - via_svd) < 1e-6);
        }
    }
}

TEST_CASE("support decomposition x = u + P0(u)x for contractive completions") {
    for (const Factor& f : standard_factors()) {
        if (f.rank() < 2) continue;
        CAPTURE(f.descriptor());
        const auto pair = sample_orthogonal_minimals(f, 2, 99, Tolerance{});
        const Element u = pair[0].element;
        const Element x = u + pair[1].element * Complex(0.4, 0.2);  // contraction in E0(u)
        CHECK(norm(x) == doctest::Approx(1.0).epsilon(1e-9));
        const SupportResult sup = support_tripotent(x);
        CHECK(sup.converged);
        CHECK(norm(x - (sup.tripotent + peirce_apply(sup.tripotent, x, 0))) < 1e-7);
    }
}

TEST_CASE("p2 coefficient of a minimal tripotent") {
    const Factor f = Factor::rectangular(2, 2);
    const Element u = elem(f, unit(2, 2, 0, 0));
    const Complex alpha(0.6, -0.3);
    const Element x = elem(f, mat2(alpha, 1.0, Complex(0, 2), -0.5));
    CHECK(std::abs(p2_coefficient(u, x) - alpha) < 1e-13);
    CHECK(std::abs(p2_coefficient(u, u) - Complex(1, 0)) < 1e-13);
    CHECK(std::abs(p2_coefficient(u, elem(f, unit(2, 2, 1, 1)))) < 1e-13);

    const Element id2 = elem(f, mat2(1, 0, 0, 1));
    CHECK_THROWS_AS(p2_coefficient(id2, x), ContractError);  // not minimal
}

TEST_CASE("collinearity transfers minimality") {
    for (const Factor& f : standard_factors()) {
        CAPTURE(f.descriptor());
        const auto pair = sample_collinear_pair(f, 777, Tolerance{});
        if (!pair) continue;  // no collinear minimal pairs in this factor
        CHECK(pair->first.info.minimal);
        CHECK(pair->second.info.minimal);
        CHECK(relation(pair->first.element, pair->second.element).collinear);
    }
}
