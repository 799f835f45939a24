#include "fscheck/morphism.hpp"

#include <algorithm>

namespace fscheck {

Diagnostics validate_morphism(const AdicMorphism &f) {
    Diagnostics d;
    const auto &B = *f.source;
    const auto &A = *f.target;
    if (!(B.field == A.field)) {
        d.fail("field mismatch between source and target");
        return d;
    }
    if (f.images.size() != B.nvars()) {
        d.fail("image list arity does not match the source variables");
        return d;
    }
    for (const auto &img : f.images)
        if (!same_ring(img.ring(), A.ring)) {
            d.fail("image polynomial outside the target ring");
            return d;
        }
    MonomialOrder ord = A.default_order();
    // well-definedness: relations of B map into I_A
    for (const auto &g : B.relations.generators()) {
        Polynomial pushed = g.substitute(A.ring, f.images);
        if (!ideal_contains(A.relations, pushed, ord))
            d.fail("not well defined: relation '" + g.str() + "' does not map into the target relations");
    }
    // continuity: Z-variables land in the ideal of definition (Z_A) + I_A
    PolyIdeal def = A.definition_ideal();
    for (std::size_t i = B.t_vars.size(); i < B.nvars(); ++i) {
        if (!ideal_contains(def, f.images[i], ord))
            d.fail("not continuous: image of '" + B.ring->vars[i] + "' is not topologically nilpotent");
    }
    return d;
}

AdicMorphism identity_morphism(const PresentationPtr &p) {
    AdicMorphism f;
    f.source = p;
    f.target = p;
    for (std::size_t i = 0; i < p->nvars(); ++i) f.images.push_back(Polynomial::variable(p->ring, i));
    return f;
}

AdicMorphism compose(const AdicMorphism &f, const AdicMorphism &g) {
    if (g.target.get() != f.source.get() && !(g.target->ring->vars == f.source->ring->vars))
        throw std::invalid_argument("compose: middle presentations differ");
    AdicMorphism h;
    h.source = g.source;
    h.target = f.target;
    for (const auto &img : g.images) h.images.push_back(img.substitute(f.target->ring, f.images));
    return h;
}

RationalPoint image_point(const AdicMorphism &f, const RationalPoint &x) {
    if (x.on.get() != f.target.get()) throw std::invalid_argument("image_point: point not on the target");
    RationalPoint y;
    y.on = f.source;
    for (const auto &img : f.images) y.coords.push_back(img.eval(x.coords));
    return y;
}

AdicVerdict is_adic(const AdicMorphism &f, int exponent_bound) {
    if (exponent_bound < 1) throw std::invalid_argument("is_adic: exponent bound must be >= 1");
    const auto &A = *f.target;
    const auto &B = *f.source;
    // Q = <images of source Z-vars> + I_A
    std::vector<Polynomial> qgens = A.relations.generators();
    for (std::size_t i = B.t_vars.size(); i < B.nvars(); ++i) qgens.push_back(f.images[i]);
    PolyIdeal q(A.ring, std::move(qgens));
    MonomialOrder ord = A.default_order();

    AdicVerdict v;
    v.bound = exponent_bound;
    v.value = Trilean::Yes;
    for (auto zi : A.z_indices()) {
        Polynomial z = Polynomial::variable(A.ring, zi);
        int found = -1;
        Polynomial zp = z;
        for (int m = 1; m <= exponent_bound; ++m) {
            if (ideal_contains(q, zp, ord)) {
                found = m;
                break;
            }
            zp = zp * z;
        }
        if (found < 0) {
            // settle by radical membership: no power ever enters iff z is
            // outside the radical of Q
            if (in_radical(q, z)) {
                found = exponent_bound + 1; // witness beyond the search bound
                v.note = "power witness exceeds the bound; settled by radical membership";
            } else {
                v.value = Trilean::No;
                v.note = "z-variable '" + A.ring->vars[zi] + "' is not in the radical of the pulled-back ideal";
            }
        }
        v.witnesses.push_back(found);
    }
    return v;
}

PresentationPtr fiber(const AdicMorphism &f, const RationalPoint &y) {
    if (y.on.get() != f.source.get()) throw std::invalid_argument("fiber: point not on the source");
    Diagnostics d = validate_point(y);
    if (!d.ok) throw std::invalid_argument("fiber: invalid point: " + d.issues.front());
    const auto &A = *f.target;
    std::vector<Polynomial> rels = A.relations.generators();
    for (std::size_t i = 0; i < f.images.size(); ++i)
        rels.push_back(f.images[i] - Polynomial::constant(A.ring, y.coords[i]));
    return make_presentation(A.field, A.t_vars, A.z_vars, std::move(rels),
                             A.name.empty() ? "fiber" : A.name + "_fiber");
}

Completion completion_along(const PresentationPtr &p, const std::vector<Polynomial> &center) {
    // nondegeneracy: I' + I_P proper
    {
        PolyIdeal sum = ideal_sum(p->relations, center);
        if (is_unit_ideal(sum, MonomialOrder::degrevlex()))
            throw std::invalid_argument("completion_along: center plus relations is the unit ideal");
    }
    std::vector<std::string> z = p->z_vars;
    std::vector<std::string> fresh;
    for (std::size_t i = 0; i < center.size(); ++i) {
        std::string name = "w" + std::to_string(i);
        while (p->ring->var_index(name) >= 0 || std::find(fresh.begin(), fresh.end(), name) != fresh.end())
            name += "_";
        fresh.push_back(name);
        z.push_back(name);
    }
    std::vector<std::string> vars = p->t_vars;
    vars.insert(vars.end(), z.begin(), z.end());
    PolyRingPtr big = make_ring(p->field, vars);
    std::vector<Polynomial> rels;
    for (const auto &g : p->relations.generators()) rels.push_back(g.transport(big));
    for (std::size_t i = 0; i < center.size(); ++i) {
        Polynomial zg = Polynomial::variable(big, big->var_index(fresh[i]));
        rels.push_back(zg - center[i].transport(big));
    }
    Completion c;
    c.completed = make_presentation(p->field, p->t_vars, z, std::move(rels),
                                    p->name.empty() ? "completion" : p->name + "_hat");
    c.kappa.source = p;
    c.kappa.target = c.completed;
    for (const auto &v : p->ring->vars)
        c.kappa.images.push_back(Polynomial::variable(c.completed->ring, c.completed->ring->var_index(v)));
    return c;
}

QuasiCoveringProbe quasi_covering_probe(const AdicMorphism &f, const RationalPoint &x, int depth) {
    Diagnostics d = validate_point(x);
    if (!d.ok) throw std::invalid_argument("quasi_covering_probe: invalid point: " + d.issues.front());
    RationalPoint y = image_point(f, x);
    PresentationPtr fib = fiber(f, y);

    QuasiCoveringProbe probe;
    probe.bound = depth;

    auto qb = quotient_basis(fib->relations);
    if (qb) {
        probe.kind = QuasiCoveringProbe::Kind::QuasiCovering;
        probe.fiber_dimension = static_cast<long>(qb->size());
        probe.note = "fiber staircase already finite without truncation";
        return probe;
    }
    if (fib->z_vars.empty()) {
        probe.kind = QuasiCoveringProbe::Kind::NotQuasiCovering;
        probe.note = "discrete fiber with infinite staircase";
        return probe;
    }
    bool all_finite = true;
    for (int n = 0; n <= depth; ++n) {
        auto tqb = quotient_basis(fib->truncation_ideal(static_cast<std::uint32_t>(n) + 1));
        probe.table.push_back(tqb ? static_cast<long>(tqb->size()) : -1);
        if (!tqb) all_finite = false;
    }
    if (!all_finite) {
        probe.kind = QuasiCoveringProbe::Kind::Indeterminate;
        probe.note = "truncated fiber not finite dimensional; growth outside the Z-block";
        return probe;
    }
    // d_n weakly increases; stabilization certifies a finite completed fiber
    for (std::size_t i = 0; i + 1 < probe.table.size(); ++i) {
        if (probe.table[i] == probe.table[i + 1]) {
            probe.kind = QuasiCoveringProbe::Kind::QuasiCovering;
            probe.fiber_dimension = probe.table[i];
            probe.note = "truncated fiber dimensions stabilize at level " + std::to_string(i);
            return probe;
        }
    }
    // strictly increasing: detect an eventually linear pattern
    if (probe.table.size() >= 3) {
        long d1 = probe.table[probe.table.size() - 2] - probe.table[probe.table.size() - 3];
        long d2 = probe.table[probe.table.size() - 1] - probe.table[probe.table.size() - 2];
        if (d1 == d2 && d1 > 0) {
            probe.kind = QuasiCoveringProbe::Kind::NotQuasiCovering;
            probe.note = "strictly increasing truncated dimensions with linear growth and infinite staircase";
            return probe;
        }
    }
    probe.kind = QuasiCoveringProbe::Kind::Indeterminate;
    probe.note = "no stabilization and no linear pattern up to the requested depth";
    return probe;
}

} // namespace fscheck
