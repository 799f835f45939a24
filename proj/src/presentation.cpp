#include "fscheck/presentation.hpp"

#include <set>

namespace fscheck {

std::vector<char> AdicPresentation::z_mask() const {
    std::vector<char> m(nvars(), 0);
    for (std::size_t i = t_vars.size(); i < nvars(); ++i) m[i] = 1;
    return m;
}

std::vector<std::size_t> AdicPresentation::z_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = t_vars.size(); i < nvars(); ++i) out.push_back(i);
    return out;
}

MonomialOrder AdicPresentation::default_order() const {
    if (z_vars.empty()) return MonomialOrder::degrevlex();
    return MonomialOrder::block(z_mask());
}

PolyIdeal AdicPresentation::definition_ideal() const {
    std::vector<Polynomial> gens = relations.generators();
    for (auto i : z_indices()) gens.push_back(Polynomial::variable(ring, i));
    return PolyIdeal(ring, std::move(gens));
}

PolyIdeal AdicPresentation::truncation_ideal(std::uint32_t deg) const {
    std::vector<Polynomial> gens = relations.generators();
    auto powers = power_generators(ring, z_indices(), deg);
    gens.insert(gens.end(), powers.begin(), powers.end());
    return PolyIdeal(ring, std::move(gens));
}

PresentationPtr make_presentation(Field field, std::vector<std::string> t_vars, std::vector<std::string> z_vars,
                                  std::vector<Polynomial> relations, std::string name) {
    auto p = std::make_shared<AdicPresentation>();
    p->name = std::move(name);
    p->field = field;
    p->t_vars = std::move(t_vars);
    p->z_vars = std::move(z_vars);
    std::vector<std::string> vars = p->t_vars;
    vars.insert(vars.end(), p->z_vars.begin(), p->z_vars.end());
    p->ring = make_ring(field, std::move(vars));
    for (auto &g : relations)
        if (!same_ring(g.ring(), p->ring)) g = g.transport(p->ring);
    p->relations = PolyIdeal(p->ring, std::move(relations));
    return p;
}

PresentationPtr make_presentation_with(Field field, std::vector<std::string> t_vars, std::vector<std::string> z_vars,
                                       const std::function<std::vector<Polynomial>(const PolyRingPtr &)> &rels,
                                       std::string name) {
    std::vector<std::string> vars = t_vars;
    vars.insert(vars.end(), z_vars.begin(), z_vars.end());
    PolyRingPtr ring = make_ring(field, vars);
    return make_presentation(field, std::move(t_vars), std::move(z_vars), rels(ring), std::move(name));
}

Diagnostics validate(const AdicPresentation &p) {
    Diagnostics d;
    std::set<std::string> seen;
    for (const auto &v : p.ring->vars) {
        if (!seen.insert(v).second) d.fail("name clash: variable '" + v + "' appears twice");
    }
    for (const auto &g : p.relations.generators())
        if (!same_ring(g.ring(), p.ring)) d.fail("relation outside the presentation ring");
    if (d.ok) {
        if (is_unit_ideal(p.definition_ideal(), p.default_order()))
            d.fail("degenerate: unit relation ideal (Spf empty)");
    }
    return d;
}

TruncatedAlgebra truncate(const PresentationPtr &p, std::uint32_t level) {
    TruncatedAlgebra t;
    t.base = p;
    t.level = level;
    t.ideal = p->truncation_ideal(level + 1);
    return t;
}

std::pair<int, int> dimensions(const AdicPresentation &p) {
    Diagnostics d = validate(p);
    if (!d.ok) throw std::invalid_argument("dimensions: degenerate presentation: " + d.issues.front());
    int alg = krull_dimension(p.relations);
    int top = krull_dimension(p.definition_ideal());
    return {alg, top};
}

RationalPoint make_point(const PresentationPtr &p, const std::vector<std::pair<std::string, Scalar>> &assignments) {
    RationalPoint x;
    x.on = p;
    x.coords.assign(p->nvars(), Scalar::zero(p->field));
    for (const auto &[name, value] : assignments) {
        int i = p->ring->var_index(name);
        if (i < 0) throw std::invalid_argument("point: unknown variable '" + name + "'");
        if (p->is_z_var(static_cast<std::size_t>(i)) && !value.is_zero())
            throw std::invalid_argument("point: Z-coordinate '" + name + "' must be zero");
        x.coords[static_cast<std::size_t>(i)] = value;
    }
    return x;
}

Diagnostics validate_point(const RationalPoint &x) {
    Diagnostics d;
    for (auto i : x.on->z_indices())
        if (!x.coords[i].is_zero()) d.fail("Z-coordinate nonzero at '" + x.on->ring->vars[i] + "'");
    for (const auto &g : x.on->relations.generators())
        if (!g.eval(x.coords).is_zero()) d.fail("relation does not vanish: " + g.str());
    return d;
}

std::vector<Polynomial> maximal_ideal_gens(const RationalPoint &x) {
    std::vector<Polynomial> gens;
    const auto &ring = x.on->ring;
    for (std::size_t i = 0; i < ring->nvars(); ++i)
        gens.push_back(Polynomial::variable(ring, i) - Polynomial::constant(ring, x.coords[i]));
    return gens;
}

} // namespace fscheck
