#include "helpers.hpp"

#include <doctest.h>

using namespace th;

namespace {

// k[eps]/(eps^2) with basis {one, eps}
SquareZeroExtension dual_numbers() {
    TableAlgebra alg;
    alg.field = Field{};
    alg.basis_names = {"one", "eps"};
    alg.mult.assign(2, std::vector<std::vector<Scalar>>(2, std::vector<Scalar>(2, q(0))));
    alg.mult[0][0][0] = q(1);
    alg.mult[0][1][1] = q(1);
    alg.mult[1][0][1] = q(1);
    return make_extension("Eps", alg, {{q(0), q(1)}});
}

// k[ep,de]/(ep,de)^2 with basis {one, ep, de}
SquareZeroExtension two_params() {
    TableAlgebra alg;
    alg.field = Field{};
    alg.basis_names = {"one", "ep", "de"};
    alg.mult.assign(3, std::vector<std::vector<Scalar>>(3, std::vector<Scalar>(3, q(0))));
    for (std::size_t i = 0; i < 3; ++i) {
        alg.mult[0][i][i] = q(1);
        alg.mult[i][0][i] = q(1);
    }
    return make_extension("Two", alg, {{q(0), q(1), q(0)}, {q(0), q(0), q(1)}});
}

struct Fix {
    PresentationPtr k = make_presentation(Field{}, {}, {}, {}, "k");
    PresentationPtr line = make_presentation(Field{}, {"x"}, {}, {}, "Line");
    PresentationPtr parab = make_presentation_with(Field{}, {"x", "y"}, {},
                                                   [](const PolyRingPtr &r) {
                                                       return std::vector<Polynomial>{P(r, "y - x^2")};
                                                   },
                                                   "Parab");

    AdicMorphism to_line() const { return {"ml", k, line, {}}; }
    AdicMorphism to_parab() const { return {"mp", k, parab, {}}; }

    LiftingProblem parab_problem(const SquareZeroExtension &ext, const Scalar &c) const {
        LiftingProblem pb;
        pb.f = to_parab();
        pb.ext = ext;
        // u0(x) = c, u0(y) = c^2 in quotient coordinates
        auto cx = ext.total.embed(c);
        auto cy = ext.total.embed(c * c);
        pb.u0 = {ext.project(cx), ext.project(cy)};
        return pb;
    }
};

} // namespace

TEST_CASE("square-zero extensions validate") {
    auto eps = dual_numbers();
    CHECK(eps.validate().ok);
    CHECK(eps.ideal_dim() == 1);
    CHECK(eps.quotient_dim() == 1);
    auto two = two_params();
    CHECK(two.validate().ok);
    CHECK(two.ideal_dim() == 2);

    // a non-square-zero ideal is rejected
    TableAlgebra alg;
    alg.field = Field{};
    alg.basis_names = {"one", "s"};
    alg.mult.assign(2, std::vector<std::vector<Scalar>>(2, std::vector<Scalar>(2, q(0))));
    alg.mult[0][0][0] = q(1);
    alg.mult[0][1][1] = q(1);
    alg.mult[1][0][1] = q(1);
    alg.mult[1][1][0] = q(1); // s^2 = 1
    auto bad = make_extension("Bad", alg, {{q(0), q(1)}});
    CHECK_FALSE(bad.validate().ok);
}

TEST_CASE("affine lifting over a smooth source") {
    Fix fx;
    auto eps = dual_numbers();
    SUBCASE("polynomial line lifts freely") {
        LiftingProblem pb;
        pb.f = fx.to_line();
        pb.ext = eps;
        pb.u0 = {eps.project(eps.total.embed(q(7)))};
        Lifting u = lift_affine(pb);
        CHECK(is_lifting(pb, u));
        CHECK(u[0] == eps.total.embed(q(7))); // zero correction
    }
    SUBCASE("parabola at (1,1): relation already satisfied") {
        LiftingProblem pb = fx.parab_problem(eps, q(1));
        Lifting u = lift_affine(pb);
        CHECK(is_lifting(pb, u));
        CHECK(u[0] == eps.total.embed(q(1)));
        CHECK(u[1] == eps.total.embed(q(1)));
    }
    SUBCASE("newton correction in the eps layer") {
        LiftingProblem pb = fx.parab_problem(eps, q(1));
        Lifting u = lift_affine(pb);
        // the naive lift (1 + eps, 1) violates the relation by -2 eps; the
        // corrected lifting is (1 + eps, 1 + 2 eps)
        Lifting w = {{q(1), q(1)}, {q(1), q(2)}};
        CHECK(is_lifting(pb, w));
        Lifting bad = {{q(1), q(1)}, {q(1), q(0)}};
        CHECK_FALSE(is_lifting(pb, bad));
        // difference annihilates the gradient row: (-2x, 1) . (eps, 2eps) = 0
        HomElement phi = lifting_difference(pb, w, u);
        CHECK(annihilates_gradients(pb, phi));
    }
}

TEST_CASE("lifting differences form a torsor") {
    Fix fx;
    auto eps = dual_numbers();
    LiftingProblem pb = fx.parab_problem(eps, q(1));
    Lifting u = lift_affine(pb);

    SUBCASE("difference of equal liftings vanishes") {
        HomElement z = lifting_difference(pb, u, u);
        for (const auto &row : z.rows)
            for (const auto &c : row) CHECK(c.is_zero());
    }
    SUBCASE("apply then difference recovers the negative") {
        HomElement phi;
        phi.rows = {{q(3)}, {q(6)}}; // annihilates (-2, 1) at x = 1: -2*3 + 6 = 0
        REQUIRE(annihilates_gradients(pb, phi));
        Lifting v = apply_difference(pb, u, phi);
        HomElement back = lifting_difference(pb, u, v);
        CHECK(back.rows[0][0] == -phi.rows[0][0]);
        CHECK(back.rows[1][0] == -phi.rows[1][0]);
        HomElement fwd = lifting_difference(pb, v, u);
        CHECK(fwd.rows[0][0] == phi.rows[0][0]);
    }
    SUBCASE("additivity of apply") {
        HomElement phi, psi;
        phi.rows = {{q(1)}, {q(2)}};
        psi.rows = {{q(-2)}, {q(-4)}};
        Lifting a = apply_difference(pb, apply_difference(pb, u, phi), psi);
        HomElement sum;
        sum.rows = {{q(-1)}, {q(-2)}};
        Lifting b = apply_difference(pb, u, sum);
        CHECK(a == b);
    }
    SUBCASE("shape mismatch is rejected") {
        HomElement phi;
        phi.rows = {{q(1)}};
        CHECK_THROWS_AS(apply_difference(pb, u, phi), std::invalid_argument);
    }
}

TEST_CASE("torsor laws hold on seeded random instances") {
    Fix fx;
    std::vector<SquareZeroExtension> exts = {dual_numbers(), two_params()};
    Rng rng(2024);
    for (const auto &ext : exts) {
        for (int trial = 0; trial < 25; ++trial) {
            Scalar c = q(rng.next_small());
            LiftingProblem pb = fx.parab_problem(ext, c);
            Lifting u = lift_affine(pb);
            std::size_t m = ext.ideal_dim();
            // phi = lambda (dx -> t, dy -> 2 c t) annihilates (-2c, 1)
            HomElement phi, psi;
            for (int vi = 0; vi < 2; ++vi) {
                phi.rows.emplace_back(m, q(0));
                psi.rows.emplace_back(m, q(0));
            }
            for (std::size_t j = 0; j < m; ++j) {
                Scalar t = q(rng.next_small());
                Scalar s = q(rng.next_small());
                phi.rows[0][j] = t;
                phi.rows[1][j] = q(2) * c * t;
                psi.rows[0][j] = s;
                psi.rows[1][j] = q(2) * c * s;
            }
            REQUIRE(annihilates_gradients(pb, phi));
            Lifting v = apply_difference(pb, u, phi);
            HomElement d = lifting_difference(pb, u, v);
            for (int vi = 0; vi < 2; ++vi)
                for (std::size_t j = 0; j < m; ++j) CHECK(d.rows[vi][j] == -phi.rows[vi][j]);
            Lifting ab = apply_difference(pb, v, psi);
            HomElement sum;
            for (int vi = 0; vi < 2; ++vi) {
                sum.rows.emplace_back(m, q(0));
                for (std::size_t j = 0; j < m; ++j) sum.rows[vi][j] = phi.rows[vi][j] + psi.rows[vi][j];
            }
            CHECK(ab == apply_difference(pb, u, sum));
        }
    }
}

TEST_CASE("cech covers from the fixtures") {
    auto ws = dsl::parse(slurp(std::string(FIXTURE_DIR) + "/deform.fsc"));
    SUBCASE("single chart always vanishes") {
        auto rep = obstruction_to_morphism_lift(ws.covers.at("Cm1").datum);
        CHECK(rep.cocycle_ok);
        CHECK(rep.vanishes);
    }
    SUBCASE("two charts vanish with a primitive") {
        auto rep = obstruction_to_morphism_lift(ws.covers.at("Cm2").datum);
        CHECK(rep.vanishes);
        REQUIRE(rep.primitive.size() == 2);
        REQUIRE(rep.glued.size() == 2);
    }
    SUBCASE("three charts with the full nerve") {
        auto rep = obstruction_to_morphism_lift(ws.covers.at("Cm3").datum);
        CHECK(rep.cocycle_ok); // the 1-cocycle identity holds exactly
        CHECK(rep.vanishes);
    }
    SUBCASE("synthetic rank-deficient instance does not vanish") {
        const auto &cb = ws.covers.at("Csynth");
        REQUIRE(cb.cochain);
        auto rep = coboundary_probe(cb.datum, *cb.cochain);
        CHECK(rep.cocycle_ok);
        CHECK_FALSE(rep.vanishes);
    }
    SUBCASE("perturbing chart liftings never changes the verdict") {
        const auto &cov = ws.covers.at("Cm2").datum;
        ObstructionReport base = obstruction_to_morphism_lift(cov);
        Rng rng(7);
        for (int k = 0; k < 10; ++k) {
            std::vector<Lifting> lifts;
            for (std::size_t a = 0; a < cov.charts.size(); ++a) {
                LiftingProblem pb;
                pb.f = cov.f;
                pb.ext = cov.charts[a].ext;
                pb.base_images = cov.charts[a].base_images;
                pb.u0 = cov.charts[a].u0;
                Lifting u = lift_affine(pb);
                // perturb along the annihilator direction (dx -> t, dy -> 2t at c=1)
                HomElement phi;
                Scalar t = q(rng.next_small());
                phi.rows = {{t}, {q(2) * t}};
                lifts.push_back(apply_difference(pb, u, phi));
            }
            ObstructionReport rep = obstruction_to_morphism_lift(cov, &lifts);
            CHECK(rep.vanishes == base.vanishes);
            CHECK(rep.cocycle_ok);
        }
    }
}

TEST_CASE("scheme lifting obstructions") {
    auto ws = dsl::parse(slurp(std::string(FIXTURE_DIR) + "/deform.fsc"));
    SUBCASE("identity transitions glue trivially") {
        const auto &cb = ws.covers.at("Cm3");
        std::vector<Transition> trivial(cb.datum.pairs.size());
        for (auto &t : trivial) t.delta.resize(cb.datum.f.target->nvars());
        auto rep = obstruction_to_scheme_lift(cb.datum, trivial);
        CHECK(rep.vanishes);
        CHECK(rep.corrected_strict);
    }
    SUBCASE("two charts have no triple data") {
        const auto &cb = ws.covers.at("Cm2");
        std::vector<Transition> trivial(cb.datum.pairs.size());
        for (auto &t : trivial) t.delta.resize(cb.datum.f.target->nvars());
        auto rep = obstruction_to_scheme_lift(cb.datum, trivial);
        CHECK(rep.vanishes);
    }
    SUBCASE("the twisted three-chart example from the fixtures") {
        const auto &cb = ws.covers.at("Csch3");
        auto rep = obstruction_to_scheme_lift(cb.datum, cb.transitions);
        CHECK(rep.cocycle_ok);
        CHECK(rep.vanishes);
        CHECK(rep.corrected_strict);
    }
}

TEST_CASE("isomorphism classification of lifting families") {
    auto ws = dsl::parse(slurp(std::string(FIXTURE_DIR) + "/deform.fsc"));
    const auto &cov = ws.covers.at("Cm2").datum;
    std::vector<Lifting> u;
    for (std::size_t a = 0; a < cov.charts.size(); ++a) {
        LiftingProblem pb;
        pb.f = cov.f;
        pb.ext = cov.charts[a].ext;
        pb.base_images = cov.charts[a].base_images;
        pb.u0 = cov.charts[a].u0;
        u.push_back(lift_affine(pb));
    }
    SUBCASE("identical data are isomorphic") {
        CHECK(classify_lifting_isomorphisms(cov, u, u).vanishes);
    }
    SUBCASE("a chartwise mismatch that is a coboundary still glues") {
        std::vector<Lifting> v = u;
        LiftingProblem pb;
        pb.f = cov.f;
        pb.ext = cov.charts[0].ext;
        pb.base_images = cov.charts[0].base_images;
        pb.u0 = cov.charts[0].u0;
        HomElement phi;
        phi.rows = {{q(1)}, {q(2)}};
        v[0] = apply_difference(pb, u[0], phi);
        CHECK(classify_lifting_isomorphisms(cov, u, v).vanishes);
    }
}
