#include "helpers.hpp"

#include <doctest.h>

using namespace th;

namespace {

struct Fix {
    PresentationPtr k = make_presentation(Field{}, {}, {}, {}, "k");
    PresentationPtr aff = make_presentation(Field{}, {"T"}, {}, {}, "Aff");
    PresentationPtr disc = make_presentation(Field{}, {}, {"Z"}, {}, "Disc");
    PresentationPtr node = make_presentation_with(Field{}, {"x", "y"}, {},
                                                  [](const PolyRingPtr &r) {
                                                      return std::vector<Polynomial>{P(r, "x*y")};
                                                  },
                                                  "Node");
    PresentationPtr parab = make_presentation_with(Field{}, {"x", "y"}, {},
                                                   [](const PolyRingPtr &r) {
                                                       return std::vector<Polynomial>{P(r, "y - x^2")};
                                                   },
                                                   "Parab");
    PresentationPtr dbl = make_presentation_with(Field{}, {"x"}, {},
                                                 [](const PolyRingPtr &r) {
                                                     return std::vector<Polynomial>{P(r, "x^2")};
                                                 },
                                                 "Dbl");

    AdicMorphism kappa() const { return {"kappa", aff, disc, {Polynomial::variable(disc->ring, 0)}}; }
    AdicMorphism p() const { return {"p", k, disc, {}}; }
    AdicMorphism to_node() const { return {"n", k, node, {}}; }
    AdicMorphism to_parab() const { return {"pb", k, parab, {}}; }
    AdicMorphism ci() const { return {"ci", aff, dbl, {Polynomial::variable(dbl->ring, 0)}}; }
};

} // namespace

TEST_CASE("pointwise unramified classification") {
    Fix fx;
    CHECK(classify_unramified_at(fx.kappa(), make_point(fx.disc, {})).verdict == Verdict::Yes);
    CHECK(classify_unramified_at(fx.p(), make_point(fx.disc, {})).verdict == Verdict::No);
    CHECK(classify_unramified_at(fx.to_node(), make_point(fx.node, {{"x", q(1)}})).verdict == Verdict::No);
}

TEST_CASE("pointwise smooth classification") {
    Fix fx;
    SUBCASE("the disc over the base field") {
        auto rep = classify_smooth_at(fx.p(), make_point(fx.disc, {}));
        CHECK(rep.verdict == Verdict::Yes);
        CHECK(rep.relative_dimension == 1);
    }
    SUBCASE("node at the origin is singular with a Hilbert witness") {
        auto rep = classify_smooth_at(fx.to_node(), make_point(fx.node, {}));
        CHECK(rep.verdict == Verdict::No);
        REQUIRE(!rep.notes.empty());
        CHECK(rep.notes.front().find("Hilbert") != std::string::npos);
    }
    SUBCASE("node away from the origin is smooth of relative dimension one") {
        auto rep = classify_smooth_at(fx.to_node(), make_point(fx.node, {{"x", q(1)}}));
        CHECK(rep.verdict == Verdict::Yes);
        CHECK(rep.relative_dimension == 1);
        REQUIRE(rep.cert);
        CHECK(rep.cert->generator_subset == std::vector<std::size_t>{0});
        CHECK(rep.cert->global_equality);
    }
    SUBCASE("no certificate and no witness yields an honest indeterminate") {
        // k[x] ->> k[x]/(x^2): unramified, fiber regular, yet not smooth;
        // the classifier must not claim either side
        auto rep = classify_smooth_at(fx.ci(), make_point(fx.dbl, {}));
        CHECK(rep.verdict == Verdict::Indeterminate);
    }
}

TEST_CASE("pointwise etale classification") {
    Fix fx;
    CHECK(classify_etale_at(fx.kappa(), make_point(fx.disc, {})).verdict == Verdict::Yes);
    auto repp = classify_etale_at(fx.p(), make_point(fx.disc, {}));
    CHECK(repp.verdict == Verdict::No);
    CHECK(repp.relative_dimension == 1);
    CHECK(classify_etale_at(identity_morphism(fx.node), make_point(fx.node, {{"x", q(1)}})).verdict == Verdict::Yes);
}

TEST_CASE("pseudo closed immersion detection") {
    Fix fx;
    auto repk = detect_pseudo_closed_immersion(fx.kappa(), 5);
    CHECK(repk.verdict == Verdict::Yes);
    auto repp = detect_pseudo_closed_immersion(fx.p(), 5);
    CHECK(repp.verdict == Verdict::No);
    CHECK(detect_pseudo_closed_immersion(fx.ci(), 5).verdict == Verdict::Yes);
}

TEST_CASE("completion morphism detection") {
    Fix fx;
    SUBCASE("the running completion") {
        auto rep = detect_completion_morphism(fx.kappa(), 4);
        CHECK(rep.verdict == Verdict::Yes);
        REQUIRE(rep.center.size() == 1);
        PolyIdeal center(fx.aff->ring, rep.center);
        PolyIdeal expected(fx.aff->ring, Ps(fx.aff->ring, {"T"}));
        CHECK(ideal_equal(center, expected, MonomialOrder::degrevlex()));
    }
    SUBCASE("identity is a trivial completion") {
        auto rep = detect_completion_morphism(identity_morphism(fx.disc), 3);
        CHECK(rep.verdict == Verdict::Yes);
        PolyIdeal center(fx.disc->ring, rep.center);
        PolyIdeal defid = fx.disc->definition_ideal();
        CHECK(ideal_equal(center, defid, fx.disc->default_order()));
    }
    SUBCASE("a non-flat closed immersion is rejected") {
        auto rep = detect_completion_morphism(fx.ci(), 3);
        CHECK(rep.verdict == Verdict::No);
    }
}

TEST_CASE("completion detection recovers the construction") {
    Fix fx;
    std::vector<std::pair<PresentationPtr, std::vector<std::string>>> corpus = {
        {fx.aff, {"T"}},
        {make_presentation(Field{}, {"x", "y"}, {}, {}, "pl"), {"x", "y"}},
        {fx.node, {"x"}},
    };
    for (const auto &[pres, center_names] : corpus) {
        std::vector<Polynomial> center;
        for (const auto &cn : center_names) center.push_back(P(pres->ring, cn));
        Completion c = completion_along(pres, center);
        auto rep = detect_completion_morphism(c.kappa, 3);
        CHECK(rep.verdict == Verdict::Yes);
        // recovered center = I' + I_P + (Z_P) as ideals of the source
        std::vector<Polynomial> expect = center;
        for (const auto &g : pres->relations.generators()) expect.push_back(g);
        for (auto zi : pres->z_indices()) expect.push_back(Polynomial::variable(pres->ring, zi));
        CHECK(ideal_equal(PolyIdeal(pres->ring, rep.center), PolyIdeal(pres->ring, expect),
                          MonomialOrder::degrevlex()));
    }
}

TEST_CASE("smooth factorization through affine formal space") {
    Fix fx;
    SUBCASE("formal disc: completion leg plus adic smooth projection") {
        SmoothFactorization fac = factor_smooth(fx.p(), make_point(fx.disc, {}));
        CHECK(fac.composes);
        CHECK(fac.first_leg_unramified);
        CHECK(fac.tppall_form);
        REQUIRE(fac.completion_center.size() == 1);
        // second leg is adic smooth
        CHECK(is_adic(fac.second_leg).value == Trilean::Yes);
        RationalPoint mid0 = make_point(fac.second_leg.target, {});
        CHECK(classify_smooth_at(fac.second_leg, mid0).verdict == Verdict::Yes);
    }
    SUBCASE("polynomial line is already adic smooth") {
        AdicMorphism f{"q", fx.k, fx.aff, {}};
        SmoothFactorization fac = factor_smooth(f, make_point(fx.aff, {{"T", q(0)}}));
        CHECK(fac.composes);
        CHECK(fac.first_leg_unramified);
        CHECK(fac.tppall_form); // the completion leg is trivial
    }
    SUBCASE("parabola absorbs x") {
        SmoothFactorization fac = factor_smooth(fx.to_parab(), make_point(fx.parab, {}));
        CHECK(fac.composes);
        CHECK(fac.first_leg_unramified);
        CHECK(fac.first_leg.source->t_vars.size() == 1);
    }
    SUBCASE("precondition violation") {
        CHECK_THROWS_AS(factor_smooth(fx.to_node(), make_point(fx.node, {})), std::invalid_argument);
    }
}

TEST_CASE("unique lifting along etale morphisms") {
    Fix fx;
    auto eps = make_presentation_with(Field{}, {}, {"e"}, [](const PolyRingPtr &r) {
        return std::vector<Polynomial>{P(r, "e^2")};
    });
    SUBCASE("completion lifts the dual-number point") {
        AdicMorphism g{"g", fx.aff, eps, {P(eps->ring, "e")}};
        auto lift = lift_along_etale(fx.kappa(), g, {Polynomial::zero(eps->ring)}, 4);
        CHECK(lift.unique);
        CHECK(lift.lifting.images[0] == P(eps->ring, "e"));
        // a different representative of the same level-0 class converges to the same map
        auto lift2 = lift_along_etale(fx.kappa(), g, {P(eps->ring, "5*e")}, 4);
        CHECK(lift2.lifting.images[0] == lift.lifting.images[0]);
    }
    SUBCASE("identity lifts to the map itself") {
        AdicMorphism g{"g", fx.disc, eps, {P(eps->ring, "e")}};
        auto lift = lift_along_etale(identity_morphism(fx.disc), g, {Polynomial::zero(eps->ring)}, 3);
        CHECK(lift.lifting.images[0] == P(eps->ring, "e"));
    }
    SUBCASE("hensel step for the squaring map") {
        auto line_u = make_presentation(Field{}, {"u"}, {}, {}, "LineU");
        AdicMorphism f{"sq", fx.aff, line_u, {P(line_u->ring, "u^2")}};
        AdicMorphism g{"g", fx.aff, eps, {P(eps->ring, "1 + e")}};
        auto lift = lift_along_etale(f, g, {P(eps->ring, "1")}, 4);
        CHECK(lift.unique);
        CHECK(lift.lifting.images[0] == P(eps->ring, "1 + 1/2*e"));
    }
    SUBCASE("level-0 square must commute") {
        AdicMorphism g{"g", fx.aff, eps, {P(eps->ring, "1 + e")}};
        CHECK_THROWS_AS(lift_along_etale(fx.kappa(), g, {Polynomial::zero(eps->ring)}, 2),
                        std::invalid_argument);
    }
}

TEST_CASE("flatness probe on Artinian truncations") {
    Fix fx;
    auto sz = make_presentation_with(Field{}, {}, {"s"}, [](const PolyRingPtr &r) {
        return std::vector<Polynomial>{P(r, "s^2")};
    });
    SUBCASE("identity is flat") {
        CHECK(flatness_probe(identity_morphism(sz), 1).kind == FlatnessProbe::Kind::Flat);
    }
    SUBCASE("collapsing the dual numbers is not flat") {
        AdicMorphism f{"f", sz, fx.k, {Polynomial::zero(fx.k->ring)}};
        auto pr = flatness_probe(f, 1);
        CHECK(pr.kind == FlatnessProbe::Kind::NotFlat);
        CHECK(pr.tor_dimension == 1);
    }
    SUBCASE("completion truncations are not flat over the formal line") {
        auto formal_line = make_presentation(Field{}, {}, {"t"}, {}, "FLine");
        auto artin = make_presentation_with(Field{}, {}, {"t"},
                                            [](const PolyRingPtr &r) {
                                                return std::vector<Polynomial>{P(r, "t^2")};
                                            });
        AdicMorphism f{"f", formal_line, artin, {Polynomial::variable(artin->ring, 0)}};
        auto pr = flatness_probe(f, 3);
        CHECK(pr.kind == FlatnessProbe::Kind::NotFlat);
    }
    SUBCASE("non-adic morphisms are out of the probe's domain") {
        CHECK(flatness_probe(fx.p(), 2).kind == FlatnessProbe::Kind::Indeterminate);
    }
}

TEST_CASE("etale implies unramified implies quasi-covering at points") {
    Fix fx;
    std::vector<std::pair<AdicMorphism, RationalPoint>> etale_corpus = {
        {fx.kappa(), make_point(fx.disc, {})},
        {identity_morphism(fx.parab), make_point(fx.parab, {})},
    };
    for (auto &[f, x] : etale_corpus) {
        REQUIRE(classify_etale_at(f, x).verdict == Verdict::Yes);
        CHECK(classify_unramified_at(f, x).verdict == Verdict::Yes);
        CHECK(quasi_covering_probe(f, x).kind == QuasiCoveringProbe::Kind::QuasiCovering);
        auto sm = classify_smooth_at(f, x);
        CHECK(sm.verdict == Verdict::Yes);
        CHECK(sm.relative_dimension == 0);
    }
}

TEST_CASE("smooth certificates compose on the corpus") {
    Fix fx;
    // Aff -> Parab via x, composed with k -> Aff, equals k -> Parab
    AdicMorphism f{"f", fx.aff, fx.parab, {Polynomial::variable(fx.parab->ring, 0)}};
    AdicMorphism g{"g", fx.k, fx.aff, {}};
    RationalPoint pt = make_point(fx.parab, {});
    REQUIRE(classify_smooth_at(f, pt).verdict == Verdict::Yes);
    AdicMorphism h = compose(f, g);
    auto rep = classify_smooth_at(h, pt);
    CHECK(rep.verdict == Verdict::Yes);
    CHECK(rep.relative_dimension == 1);
}
