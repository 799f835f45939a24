#include "helpers.hpp"

#include <doctest.h>

using namespace th;

namespace {

// fixtures shared across the adic tests
struct Fix {
    PresentationPtr k = make_presentation(Field{}, {}, {}, {}, "k");
    PresentationPtr aff = make_presentation(Field{}, {"T"}, {}, {}, "Aff");
    PresentationPtr disc = make_presentation(Field{}, {}, {"Z"}, {}, "Disc");

    AdicMorphism kappa() const {
        return {"kappa", aff, disc, {Polynomial::variable(disc->ring, 0)}};
    }
    AdicMorphism p() const { return {"p", k, disc, {}}; }
    AdicMorphism incl() const { return {"incl", k, aff, {}}; }
};

// generators of (sum of the given polynomials as an ideal)^power
std::vector<Polynomial> ideal_power(const PolyRingPtr &ring, const std::vector<Polynomial> &gens,
                                    std::uint32_t power) {
    std::vector<Polynomial> cur = {Polynomial::constant(ring, Scalar::one(ring->field))};
    for (std::uint32_t i = 0; i < power; ++i) {
        std::vector<Polynomial> next;
        for (const auto &a : cur)
            for (const auto &g : gens) next.push_back(a * g);
        cur = std::move(next);
    }
    return cur;
}

} // namespace

TEST_CASE("presentation validation") {
    Fix fx;
    CHECK(validate(*make_presentation(Field{}, {"T"}, {"Z"}, {}, "ok")).ok);

    auto degenerate = make_presentation_with(Field{}, {}, {"Z"}, [](const PolyRingPtr &r) {
        return std::vector<Polynomial>{Polynomial::constant(r, Scalar::one(r->field))};
    });
    Diagnostics d = validate(*degenerate);
    CHECK_FALSE(d.ok);
    CHECK(d.issues.front().find("degenerate") != std::string::npos);

    auto clash = make_presentation(Field{}, {"T"}, {"T"}, {});
    Diagnostics dc = validate(*clash);
    CHECK_FALSE(dc.ok);
    CHECK(dc.issues.front().find("name clash") != std::string::npos);
}

TEST_CASE("truncations of the formal disc") {
    Fix fx;
    MonomialOrder ord = fx.disc->default_order();

    TruncatedAlgebra t0 = truncate(fx.disc, 0);
    CHECK(ideal_contains(t0.ideal, P(fx.disc->ring, "Z"), ord));
    auto qb0 = quotient_basis(t0.ideal);
    REQUIRE(qb0);
    CHECK(qb0->size() == 1);

    TruncatedAlgebra t2 = truncate(fx.disc, 2);
    auto qb2 = quotient_basis(t2.ideal);
    REQUIRE(qb2);
    CHECK(qb2->size() == 3); // {1, Z, Z^2}

    auto graph = make_presentation_with(Field{}, {"T"}, {"Z"}, [](const PolyRingPtr &r) {
        return std::vector<Polynomial>{P(r, "T - Z")};
    });
    TruncatedAlgebra g0 = truncate(graph, 0);
    MonomialOrder gord = graph->default_order();
    CHECK(ideal_contains(g0.ideal, P(graph->ring, "T"), gord));
    CHECK(ideal_contains(g0.ideal, P(graph->ring, "Z"), gord));
    auto gqb = quotient_basis(g0.ideal);
    REQUIRE(gqb);
    CHECK(gqb->size() == 1);
}

TEST_CASE("tower coherence of truncations") {
    auto mixed = make_presentation_with(Field{}, {"T"}, {"Z1", "Z2"}, [](const PolyRingPtr &r) {
        return std::vector<Polynomial>{P(r, "T*Z1 - Z2^2")};
    });
    MonomialOrder ord = mixed->default_order();
    for (std::uint32_t n = 0; n < 4; ++n) {
        PolyIdeal big = mixed->truncation_ideal(n + 2);
        PolyIdeal small = mixed->truncation_ideal(n + 1);
        CHECK(ideal_subset(big, small, ord)); // I + (Z)^{n+2} inside I + (Z)^{n+1}
    }
}

TEST_CASE("morphism validation") {
    Fix fx;
    CHECK(validate_morphism(fx.kappa()).ok);
    CHECK(validate_morphism(identity_morphism(fx.disc)).ok);

    // a Z-variable must land in the ideal of definition
    auto w = make_presentation(Field{}, {}, {"W"}, {}, "W");
    AdicMorphism bad{"bad", w, fx.aff, {Polynomial::variable(fx.aff->ring, 0)}};
    Diagnostics d = validate_morphism(bad);
    CHECK_FALSE(d.ok);
    CHECK(d.issues.front().find("not continuous") != std::string::npos);

    // well-definedness failure
    auto dbl = make_presentation_with(Field{}, {"x"}, {}, [](const PolyRingPtr &r) {
        return std::vector<Polynomial>{P(r, "x^2")};
    });
    AdicMorphism notwd{"notwd", dbl, fx.aff, {Polynomial::variable(fx.aff->ring, 0)}};
    CHECK_FALSE(validate_morphism(notwd).ok);
}

TEST_CASE("adicness of the running morphisms") {
    Fix fx;
    CHECK(is_adic(fx.incl()).value == Trilean::Yes);
    CHECK(is_adic(fx.p()).value == Trilean::No);
    CHECK(is_adic(fx.kappa()).value == Trilean::No);
    CHECK(is_adic(identity_morphism(fx.disc)).value == Trilean::Yes);
    CHECK_THROWS_AS(is_adic(fx.p(), 0), std::invalid_argument);

    // composition of adic morphisms stays adic
    auto plane = make_presentation(Field{}, {"T", "S"}, {}, {}, "Plane");
    AdicMorphism ext{"ext", fx.aff, plane, {Polynomial::variable(plane->ring, 0)}};
    CHECK(is_adic(ext).value == Trilean::Yes);
    CHECK(is_adic(compose(ext, fx.incl())).value == Trilean::Yes);
}

TEST_CASE("fibers of the running morphisms") {
    Fix fx;
    // base change along the identity of the base point
    RationalPoint yk = make_point(fx.k, {});
    auto f1 = fiber(fx.incl(), yk);
    CHECK(f1->relations.generators().empty());
    CHECK(f1->t_vars == std::vector<std::string>{"T"});

    auto f2 = fiber(fx.p(), yk);
    CHECK(f2->relations.generators().empty());
    CHECK(f2->z_vars == std::vector<std::string>{"Z"});

    RationalPoint t0 = make_point(fx.aff, {{"T", q(0)}});
    auto f3 = fiber(fx.kappa(), t0);
    auto qb = quotient_basis(f3->relations);
    REQUIRE(qb);
    CHECK(qb->size() == 1); // k[[Z]]/(Z) = k
}

TEST_CASE("fiber of a composite agrees with the pushed relations") {
    Fix fx;
    // k[s] -> k[T] (s -> T^2), then kappa : k[T] -> k[[Z]]
    auto line_s = make_presentation(Field{}, {"s"}, {}, {}, "LineS");
    AdicMorphism g{"g", line_s, fx.aff, {P(fx.aff->ring, "T^2")}};
    AdicMorphism h = compose(fx.kappa(), g);
    RationalPoint y = make_point(line_s, {{"s", q(0)}});
    auto fib_h = fiber(h, y);
    // same ideal built from the target relations plus pushed fiber relations
    std::vector<Polynomial> gens = fx.disc->relations.generators();
    for (std::size_t i = 0; i < g.images.size(); ++i) {
        Polynomial pushed = g.images[i].substitute(fx.disc->ring, fx.kappa().images);
        gens.push_back(pushed - Polynomial::constant(fx.disc->ring, y.coords[i]));
    }
    PolyIdeal expected(fx.disc->ring, gens);
    CHECK(ideal_equal(fib_h->relations, expected, fx.disc->default_order()));
}

TEST_CASE("completions") {
    Fix fx;
    SUBCASE("line completed at the origin") {
        Completion c = completion_along(fx.aff, {P(fx.aff->ring, "T")});
        CHECK(validate_morphism(c.kappa).ok);
        auto [alg, top] = dimensions(*c.completed);
        CHECK(alg == 1);
        CHECK(top == 0);
    }
    SUBCASE("center already inside the ideal of definition") {
        Completion c = completion_along(fx.disc, {P(fx.disc->ring, "Z")});
        // eliminating the fresh variable returns the original relations
        auto hat = c.completed;
        std::vector<char> drop(hat->ring->nvars(), 0);
        drop[static_cast<std::size_t>(hat->ring->var_index("w0"))] = 1;
        auto back = eliminate(hat->relations, drop, fx.disc->ring);
        PolyIdeal recovered(fx.disc->ring, back);
        CHECK(ideal_equal(recovered, fx.disc->relations, fx.disc->default_order()));
    }
    SUBCASE("plane completed at the origin") {
        auto plane = make_presentation(Field{}, {"x", "y"}, {}, {}, "plane");
        Completion c = completion_along(plane, Ps(plane->ring, {"x", "y"}));
        CHECK(c.completed->z_vars.size() == 2);
        auto [alg, top] = dimensions(*c.completed);
        CHECK(alg == 2);
        CHECK(top == 0);
    }
    SUBCASE("unit center is rejected") {
        CHECK_THROWS_AS(completion_along(fx.aff, Ps(fx.aff->ring, {"1"})), std::invalid_argument);
    }
}

TEST_CASE("completion then truncation commutes with truncating the blown-down ideal") {
    Fix fx;
    std::vector<std::pair<PresentationPtr, std::vector<std::string>>> corpus = {
        {fx.aff, {"T"}},
        {make_presentation(Field{}, {"x", "y"}, {}, {}, "pl"), {"x", "y"}},
        {make_presentation_with(Field{}, {"x", "y"}, {},
                                [](const PolyRingPtr &r) {
                                    return std::vector<Polynomial>{P(r, "x*y")};
                                }),
         {"x"}},
    };
    for (const auto &[pres, center_names] : corpus) {
        std::vector<Polynomial> center;
        for (const auto &cn : center_names) center.push_back(P(pres->ring, cn));
        Completion c = completion_along(pres, center);
        for (std::uint32_t n = 0; n <= 3; ++n) {
            // eliminate the fresh variables from the truncated completion
            PolyIdeal trunc = c.completed->truncation_ideal(n + 1);
            std::vector<char> drop(c.completed->ring->nvars(), 0);
            for (const auto &zv : c.completed->z_vars)
                if (pres->ring->var_index(zv) < 0)
                    drop[static_cast<std::size_t>(c.completed->ring->var_index(zv))] = 1;
            auto back = eliminate(trunc, drop, pres->ring);
            PolyIdeal lhs(pres->ring, back);
            // I + ((Z) + I')^{n+1}
            std::vector<Polynomial> jgens = center;
            for (auto zi : pres->z_indices()) jgens.push_back(Polynomial::variable(pres->ring, zi));
            std::vector<Polynomial> rhs_gens = pres->relations.generators();
            auto pw = ideal_power(pres->ring, jgens, n + 1);
            rhs_gens.insert(rhs_gens.end(), pw.begin(), pw.end());
            PolyIdeal rhs(pres->ring, rhs_gens);
            CHECK(ideal_equal(lhs, rhs, MonomialOrder::degrevlex()));
        }
    }
}

TEST_CASE("dimensions of the standard models") {
    Fix fx;
    auto dims = [](const PresentationPtr &p) { return dimensions(*p); };
    CHECK(dims(make_presentation(Field{}, {"T1"}, {"Z1"}, {})) == std::pair<int, int>{2, 1});
    CHECK(dims(make_presentation(Field{}, {}, {"Z1", "Z2"}, {})) == std::pair<int, int>{2, 0});
    auto node = make_presentation_with(Field{}, {"x", "y"}, {}, [](const PolyRingPtr &r) {
        return std::vector<Polynomial>{P(r, "x*y")};
    });
    CHECK(dims(node) == std::pair<int, int>{1, 1});
    CHECK_THROWS_AS(dimensions(*make_presentation_with(Field{}, {}, {"Z"},
                                                       [](const PolyRingPtr &r) {
                                                           return std::vector<Polynomial>{P(r, "1")};
                                                       })),
                    std::invalid_argument);
    // algebraic dimension always dominates the topological one
    std::vector<PresentationPtr> corpus = {fx.k, fx.aff, fx.disc, node,
                                           make_presentation(Field{}, {"T"}, {"Z"}, {})};
    for (const auto &p : corpus) {
        auto [alg, top] = dimensions(*p);
        CHECK(alg >= top);
    }
}

TEST_CASE("quasi-covering probe on the running examples") {
    Fix fx;
    RationalPoint o = make_point(fx.disc, {});
    CHECK(quasi_covering_probe(fx.kappa(), o).kind == QuasiCoveringProbe::Kind::QuasiCovering);

    auto pr = quasi_covering_probe(fx.p(), o);
    CHECK(pr.kind == QuasiCoveringProbe::Kind::NotQuasiCovering);
    // d_n = n + 1
    REQUIRE(pr.table.size() >= 3);
    for (std::size_t i = 0; i < pr.table.size(); ++i) CHECK(pr.table[i] == static_cast<long>(i) + 1);

    // finite squaring model: fiber at the origin is k[u]/(u^2)
    auto line_u = make_presentation(Field{}, {"u"}, {}, {}, "LineU");
    AdicMorphism sq{"sq", fx.aff, line_u, {P(line_u->ring, "u^2")}};
    RationalPoint u0 = make_point(line_u, {{"u", q(0)}});
    auto pq = quasi_covering_probe(sq, u0);
    CHECK(pq.kind == QuasiCoveringProbe::Kind::QuasiCovering);
    CHECK(pq.fiber_dimension == 2);
}
