#include <doctest.h>

#include "test_helpers.hpp"

using namespace jbt;
using namespace jbt::test;

TEST_CASE("quadrangle predicate on pinned tuples") {
    const Factor f = Factor::rectangular(2, 2);
    const Element e11 = elem(f, unit(2, 2, 0, 0));
    const Element e12 = elem(f, unit(2, 2, 0, 1));
    const Element e22 = elem(f, unit(2, 2, 1, 1));
    const Element e21 = elem(f, unit(2, 2, 1, 0));

    // 2{E11, E12, E22} = E21 by direct evaluation of the product formula.
    const ComplexMatrix direct =
        e11.matrix() * e12.matrix().adjoint() * e22.matrix() +
        e22.matrix() * e12.matrix().adjoint() * e11.matrix();
    CHECK((direct - e21.matrix()).cwiseAbs().maxCoeff() < 1e-15);

    CHECK(is_quadrangle(e11, e12, e22, e21).ok);
    CHECK_FALSE(is_quadrangle(e11, e12, e22, -e21).ok);       // sign breaks closure
    CHECK_FALSE(is_quadrangle(e11, e22, e12, e21).ok);        // wrong relation pattern
}

TEST_CASE("trangle predicate on pinned tuples") {
    const ComplexMatrix um = mat2(0, 1, 1, 0);
    for (const Factor& f : {Factor::symmetric(2), Factor::rectangular(2, 2)}) {
        CAPTURE(f.descriptor());
        const Element v = elem(f, unit(2, 2, 0, 0));
        const Element u = elem(f, um);
        const Element vt = elem(f, unit(2, 2, 1, 1));
        CHECK(is_trangle(v, u, vt).ok);
    }
    const Factor f = Factor::rectangular(2, 2);
    CHECK_FALSE(is_trangle(elem(f, unit(2, 2, 0, 0)), elem(f, unit(2, 2, 0, 1)),
                           elem(f, unit(2, 2, 1, 1)))
                    .ok);  // E12 does not govern E11
}

TEST_CASE("standard grids") {
    {
        const Grid g = standard_grid(Factor::rectangular(2, 2));
        CHECK(g.elements.size() == 4);
        for (const auto& t : g.elements) CHECK(t.info.minimal);
        // matrix units in one row/column are collinear, otherwise orthogonal
        CHECK(g.relations[0][1] == "collinear");
        CHECK(g.relations[0][3] == "orthogonal");
    }
    {
        const Grid g = standard_grid(Factor::antisymmetric(4));
        CHECK(g.elements.size() == 6);
        for (const auto& t : g.elements) {
            CHECK(t.info.minimal);
            CHECK(matrix_rank(t.element.matrix(), 0.5) == 2);
        }
    }
    {
        const Grid g = standard_grid(Factor::symmetric(2));
        CHECK(g.elements.size() == 3);
        int minimal = 0, rank2 = 0;
        for (const auto& t : g.elements) {
            if (t.info.minimal) ++minimal;
            if (t.info.rank == 2) ++rank2;
        }
        CHECK(minimal == 2);  // diagonal units
        CHECK(rank2 == 1);    // E12 + E21
    }
    CHECK_THROWS_AS(standard_grid(Factor::spin(4)), ContractError);
}

TEST_CASE("grid spans the factor over the reals") {
    for (const char* d : {"rect:2x3", "rect:3x4", "sym:3", "sym:4", "asym:4", "asym:5"}) {
        const Factor f = Factor::parse(d);
        CAPTURE(d);
        const Grid g = standard_grid(f);
        CHECK(static_cast<int>(g.elements.size()) == f.complex_dim());
        RealMatrix span(2 * f.complex_dim(), 2 * static_cast<int>(g.elements.size()));
        for (size_t k = 0; k < g.elements.size(); ++k) {
            span.col(2 * static_cast<Eigen::Index>(k)) = real_coordinates(g.elements[k].element);
            span.col(2 * static_cast<Eigen::Index>(k) + 1) =
                real_coordinates(g.elements[k].element * Complex(0, 1));
        }
        CHECK(matrix_rank(span.cast<Complex>(), 1e-9) == 2 * f.complex_dim());
    }
}

TEST_CASE("orthogonal collinear partner") {
    const Factor f22 = Factor::rectangular(2, 2);
    const Element e1 = elem(f22, unit(2, 2, 0, 0));
    const Element e2 = elem(f22, unit(2, 2, 0, 1));
    const Tripotent u = orthogonal_collinear_partner(e1, e2, 71);
    CHECK(u.info.minimal);
    CHECK(relation(u.element, e1).orthogonal);
    CHECK(relation(u.element, e2).collinear);
    // In the 2x2 factor the partner is E22 up to phase.
    CHECK(std::abs(std::abs(u.element.matrix()(1, 1)) - 1.0) < 1e-8);

    const Factor f23 = Factor::rectangular(2, 3);
    const Tripotent u23 = orthogonal_collinear_partner(
        elem(f23, unit(2, 3, 0, 0)), elem(f23, unit(2, 3, 0, 1)), 72);
    CHECK(u23.info.minimal);
    CHECK(relation(u23.element, elem(f23, unit(2, 3, 0, 0))).orthogonal);
    CHECK(relation(u23.element, elem(f23, unit(2, 3, 0, 1))).collinear);

    // Rank-one factor: collinear pairs exist but no orthogonal partner does.
    const Factor row = Factor::rectangular(1, 2);
    const Element r1 = elem(row, unit(1, 2, 0, 0));
    const Element r2 = elem(row, unit(1, 2, 0, 1));
    CHECK_THROWS_AS(orthogonal_collinear_partner(r1, r2, 73), NumericError);

    CHECK_THROWS_AS(orthogonal_collinear_partner(e1, elem(f22, unit(2, 2, 1, 1)), 74),
                    ContractError);  // not collinear
}

TEST_CASE("complete_to_quadrangle") {
    const Factor f = Factor::rectangular(2, 2);
    const Element e = elem(f, unit(2, 2, 0, 0));
    const Element v2 = elem(f, unit(2, 2, 0, 1));
    const auto quad = complete_to_quadrangle(e, v2, 11);
    CHECK(is_quadrangle(quad[0].element, quad[1].element, quad[2].element, quad[3].element).ok);

    // Phased second entry still closes into a quadrangle.
    const auto phased = complete_to_quadrangle(e, v2 * Complex(0, 1), 12);
    CHECK(is_quadrangle(phased[0].element, phased[1].element, phased[2].element,
                        phased[3].element)
              .ok);

    CHECK_THROWS_AS(complete_to_quadrangle(e, elem(f, unit(2, 2, 1, 1)), 13), ContractError);
}

TEST_CASE("trangle midpoints") {
    const Factor f = Factor::symmetric(2);
    const Element v = elem(f, unit(2, 2, 0, 0));
    const Element u = elem(f, mat2(0, 1, 1, 0));
    const Element vt = elem(f, unit(2, 2, 1, 1));
    const TrangleMidpoints mid = spin_trangle_midpoints(v, u, vt);

    CHECK(approx_equal(mid.w.element, elem(f, mat2(0.5, 0.5, 0.5, 0.5)), 1e-12));
    CHECK(approx_equal(mid.w_tilde.element, elem(f, mat2(0.5, -0.5, -0.5, 0.5)), 1e-12));
    CHECK(mid.w.info.minimal);
    CHECK(mid.w_tilde.info.minimal);
    CHECK(relation(mid.w.element, mid.w_tilde.element).orthogonal);
    CHECK(norm(mid.w.element) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(norm(mid.w_tilde.element) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(is_trangle(mid.w.element, mid.u_hat.element, mid.w_tilde.element).ok);

    CHECK_THROWS_AS(spin_trangle_midpoints(v, Element::zero(f), vt), ContractError);
}

TEST_CASE("samplers produce validated configurations across factors") {
    for (const Factor& f : standard_factors()) {
        CAPTURE(f.descriptor());
        const auto tri = sample_trangle(f, 4141);
        REQUIRE(tri.has_value());  // trangles exist in every rank >= 2 factor here
        CHECK(is_trangle((*tri)[0].element, (*tri)[1].element, (*tri)[2].element).ok);
        CHECK((*tri)[0].info.minimal);
        CHECK((*tri)[2].info.minimal);

        const auto quad = sample_quadrangle(f, 4242);
        const bool expects_quadrangles =
            f.kind() == FactorKind::Rectangular ||
            f.kind() == FactorKind::Antisymmetric ||
            (f.kind() == FactorKind::Spin && f.spin_dim() >= 4);
        if (expects_quadrangles) {
            REQUIRE(quad.has_value());
            CHECK(is_quadrangle((*quad)[0].element, (*quad)[1].element, (*quad)[2].element,
                                (*quad)[3].element)
                      .ok);
        } else {
            CHECK_FALSE(quad.has_value());  // no collinear minimal pairs in S_n / Spin(3)
        }

        const auto mins = sample_orthogonal_minimals(f, f.rank(), 4343, Tolerance{});
        CHECK(static_cast<int>(mins.size()) == f.rank());
        for (size_t i = 0; i < mins.size(); ++i) {
            CHECK(mins[i].info.minimal);
            for (size_t j = i + 1; j < mins.size(); ++j) {
                CHECK(relation(mins[i].element, mins[j].element).orthogonal);
            }
        }
    }
}
