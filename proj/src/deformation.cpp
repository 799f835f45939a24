#include "fscheck/deformation.hpp"

#include <algorithm>

namespace fscheck {

std::vector<Scalar> TableAlgebra::unit() const {
    auto v = zero();
    v[0] = Scalar::one(field);
    return v;
}

std::vector<Scalar> TableAlgebra::embed(const Scalar &c) const {
    auto v = zero();
    v[0] = c;
    return v;
}

std::vector<Scalar> TableAlgebra::add(const std::vector<Scalar> &a, const std::vector<Scalar> &b) const {
    auto v = zero();
    for (std::size_t i = 0; i < dim(); ++i) v[i] = a[i] + b[i];
    return v;
}

std::vector<Scalar> TableAlgebra::sub(const std::vector<Scalar> &a, const std::vector<Scalar> &b) const {
    auto v = zero();
    for (std::size_t i = 0; i < dim(); ++i) v[i] = a[i] - b[i];
    return v;
}

std::vector<Scalar> TableAlgebra::mul(const std::vector<Scalar> &a, const std::vector<Scalar> &b) const {
    auto v = zero();
    for (std::size_t i = 0; i < dim(); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < dim(); ++j) {
            if (b[j].is_zero()) continue;
            Scalar c = a[i] * b[j];
            for (std::size_t k = 0; k < dim(); ++k) v[k] += c * mult[i][j][k];
        }
    }
    return v;
}

std::vector<Scalar> TableAlgebra::scale(const Scalar &c, const std::vector<Scalar> &a) const {
    auto v = zero();
    for (std::size_t i = 0; i < dim(); ++i) v[i] = c * a[i];
    return v;
}

bool TableAlgebra::is_zero(const std::vector<Scalar> &a) const {
    for (const auto &x : a)
        if (!x.is_zero()) return false;
    return true;
}

std::vector<Scalar> TableAlgebra::eval_poly(const Polynomial &p, const std::vector<std::vector<Scalar>> &args) const {
    auto acc = zero();
    for (auto &[e, c] : p.terms()) {
        auto t = embed(c);
        for (std::size_t i = 0; i < e.size(); ++i)
            for (std::uint32_t k = 0; k < e[i]; ++k) t = mul(t, args[i]);
        acc = add(acc, t);
    }
    return acc;
}

Diagnostics TableAlgebra::validate() const {
    Diagnostics d;
    if (basis_names.empty()) {
        d.fail("empty basis");
        return d;
    }
    for (std::size_t i = 0; i < dim(); ++i) {
        auto ei = zero();
        ei[i] = Scalar::one(field);
        if (mul(unit(), ei) != ei) d.fail("unit law fails on basis element " + basis_names[i]);
        for (std::size_t j = i; j < dim(); ++j) {
            auto ej = zero();
            ej[j] = Scalar::one(field);
            if (mul(ei, ej) != mul(ej, ei)) d.fail("commutativity fails");
        }
    }
    for (std::size_t i = 0; i < dim() && d.ok; ++i)
        for (std::size_t j = 0; j < dim() && d.ok; ++j)
            for (std::size_t k = 0; k < dim() && d.ok; ++k) {
                auto ei = zero(), ej = zero(), ek = zero();
                ei[i] = ej[j] = ek[k] = Scalar::one(field);
                if (mul(mul(ei, ej), ek) != mul(ei, mul(ej, ek))) d.fail("associativity fails");
            }
    return d;
}

void SquareZeroExtension::recompute() {
    // echelonize the ideal basis
    std::vector<std::vector<Scalar>> rows;
    std::vector<std::size_t> pivots;
    for (auto v : ideal_basis) {
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (v[pivots[k]].is_zero()) continue;
            Scalar f = v[pivots[k]];
            for (std::size_t j = 0; j < v.size(); ++j) v[j] = v[j] - f * rows[k][j];
        }
        std::size_t piv = v.size();
        for (std::size_t j = 0; j < v.size(); ++j)
            if (!v[j].is_zero()) {
                piv = j;
                break;
            }
        if (piv == v.size()) continue;
        Scalar inv = v[piv].inv();
        for (auto &x : v) x = x * inv;
        rows.push_back(v);
        pivots.push_back(piv);
    }
    // back-substitute for a fully reduced echelon form
    for (std::size_t k = rows.size(); k-- > 0;) {
        for (std::size_t l = 0; l < k; ++l) {
            Scalar f = rows[l][pivots[k]];
            if (f.is_zero()) continue;
            for (std::size_t j = 0; j < rows[l].size(); ++j) rows[l][j] = rows[l][j] - f * rows[k][j];
        }
    }
    ideal_basis = rows;
    pivots_ = pivots;
    free_cols_.clear();
    std::vector<char> isp(total.dim(), 0);
    for (auto p : pivots_) isp[p] = 1;
    for (std::size_t j = 0; j < total.dim(); ++j)
        if (!isp[j]) free_cols_.push_back(j);
}

SquareZeroExtension make_extension(std::string name, TableAlgebra total,
                                   std::vector<std::vector<Scalar>> ideal_basis) {
    SquareZeroExtension e;
    e.name = std::move(name);
    e.total = std::move(total);
    e.ideal_basis = std::move(ideal_basis);
    e.recompute();
    return e;
}

std::vector<Scalar> SquareZeroExtension::reduce_mod_ideal(std::vector<Scalar> v) const {
    for (std::size_t k = 0; k < ideal_basis.size(); ++k) {
        Scalar f = v[pivots_[k]];
        if (f.is_zero()) continue;
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = v[j] - f * ideal_basis[k][j];
    }
    return v;
}

std::vector<Scalar> SquareZeroExtension::project(const std::vector<Scalar> &total_coords) const {
    auto r = reduce_mod_ideal(total_coords);
    std::vector<Scalar> q;
    for (auto j : free_cols_) q.push_back(r[j]);
    return q;
}

std::vector<Scalar> SquareZeroExtension::section(const std::vector<Scalar> &quotient_coords) const {
    auto v = total.zero();
    for (std::size_t k = 0; k < free_cols_.size(); ++k) v[free_cols_[k]] = quotient_coords[k];
    return v;
}

bool SquareZeroExtension::in_ideal(const std::vector<Scalar> &total_coords) const {
    auto r = reduce_mod_ideal(total_coords);
    for (const auto &x : r)
        if (!x.is_zero()) return false;
    return true;
}

std::vector<Scalar> SquareZeroExtension::ideal_coords(const std::vector<Scalar> &total_coords) const {
    std::vector<Scalar> out(ideal_basis.size(), Scalar::zero(total.field));
    auto v = total_coords;
    for (std::size_t k = 0; k < ideal_basis.size(); ++k) {
        Scalar f = v[pivots_[k]];
        out[k] = f;
        if (f.is_zero()) continue;
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = v[j] - f * ideal_basis[k][j];
    }
    for (const auto &x : v)
        if (!x.is_zero()) throw std::invalid_argument("extension: element is not in the square-zero ideal");
    return out;
}

std::vector<Scalar> SquareZeroExtension::ideal_embed(const std::vector<Scalar> &coords) const {
    auto v = total.zero();
    for (std::size_t k = 0; k < coords.size(); ++k)
        for (std::size_t j = 0; j < total.dim(); ++j) v[j] += coords[k] * ideal_basis[k][j];
    return v;
}

Diagnostics SquareZeroExtension::validate() const {
    Diagnostics d = total.validate();
    if (!d.ok) return d;
    // I is an ideal and I . I = 0
    for (std::size_t i = 0; i < ideal_basis.size(); ++i) {
        for (std::size_t j = 0; j < ideal_basis.size(); ++j)
            if (!total.is_zero(total.mul(ideal_basis[i], ideal_basis[j]))) d.fail("ideal does not square to zero");
        for (std::size_t b = 0; b < total.dim(); ++b) {
            auto eb = total.zero();
            eb[b] = Scalar::one(total.field);
            if (!in_ideal(total.mul(eb, ideal_basis[i]))) d.fail("ideal basis is not closed under multiplication");
        }
    }
    return d;
}

// ---------------------------------------------------------------------------

namespace {

struct RelGen {
    Polynomial poly;                            // in A's ring
    std::optional<std::size_t> base_var;        // set when the row is a B-variable constraint
};

std::vector<RelGen> relative_generators(const AdicMorphism &f) {
    std::vector<RelGen> gens;
    for (const auto &p : f.target->relations.generators()) gens.push_back({p, std::nullopt});
    for (std::size_t b = 0; b < f.source->nvars(); ++b) gens.push_back({f.images[b], b});
    return gens;
}

// residual of one relative generator at a total-coordinates assignment
std::vector<Scalar> residual_of(const LiftingProblem &pb, const RelGen &g, const Lifting &u) {
    auto v = pb.ext.total.eval_poly(g.poly, u);
    if (g.base_var) v = pb.ext.total.sub(v, pb.base_images[*g.base_var]);
    return v;
}

// matrix of multiplication by the u0-value of q on the ideal (ideal coords)
ScalarMat ideal_action(const SquareZeroExtension &ext, const std::vector<Scalar> &q_total) {
    std::size_t m = ext.ideal_dim();
    ScalarMat out(m, m, Scalar::zero(ext.total.field));
    for (std::size_t j = 0; j < m; ++j) {
        auto prod = ext.total.mul(q_total, ext.ideal_basis[j]);
        auto c = ext.ideal_coords(prod);
        for (std::size_t i = 0; i < m; ++i) out.at(i, j) = c[i];
    }
    return out;
}

} // namespace

Diagnostics validate_problem(const LiftingProblem &pb) {
    Diagnostics d = pb.ext.validate();
    if (!d.ok) return d;
    if (pb.base_images.size() != pb.f.source->nvars()) d.fail("base map arity mismatch");
    if (pb.u0.size() != pb.f.target->nvars()) d.fail("u0 arity mismatch");
    if (!d.ok) return d;
    // u0 must be a morphism into C/I compatible with the base map, and must
    // send Z-variables to nilpotents
    Lifting naive;
    for (const auto &q : pb.u0) naive.push_back(pb.ext.section(q));
    for (const auto &g : relative_generators(pb.f)) {
        auto r = residual_of(pb, g, naive);
        if (!pb.ext.in_ideal(r)) d.fail("u0 does not solve the reduced problem (residual outside the ideal)");
    }
    for (auto zi : pb.f.target->z_indices()) {
        // nilpotency in a finite dimensional algebra: some power vanishes
        auto v = pb.ext.section(pb.u0[zi]);
        auto p = v;
        bool nil = false;
        for (std::size_t k = 0; k <= pb.ext.total.dim(); ++k) {
            if (pb.ext.total.is_zero(pb.ext.reduce_mod_ideal(p))) {
                nil = true;
                break;
            }
            p = pb.ext.total.mul(p, v);
        }
        if (!nil) d.fail("u0 image of Z-variable '" + pb.f.target->ring->vars[zi] + "' is not nilpotent");
    }
    return d;
}

Lifting lift_affine(const LiftingProblem &pb) {
    const auto &A = *pb.f.target;
    std::size_t nA = A.nvars();
    std::size_t m = pb.ext.ideal_dim();
    Lifting naive;
    for (const auto &q : pb.u0) naive.push_back(pb.ext.section(q));

    auto gens = relative_generators(pb.f);
    if (m == 0) {
        for (const auto &g : gens)
            if (!pb.ext.total.is_zero(residual_of(pb, g, naive)))
                throw std::invalid_argument("lift_affine: residual nonzero over a trivial ideal");
        return naive;
    }

    // unknown delta_v in I per variable; rows: residual + sum_v dP/dv(u0) . delta_v = 0
    ScalarMat sys(gens.size() * m, nA * m, Scalar::zero(A.field));
    std::vector<Scalar> rhs;
    for (std::size_t gi = 0; gi < gens.size(); ++gi) {
        auto r = residual_of(pb, gens[gi], naive);
        auto rc = pb.ext.ideal_coords(r); // throws when the chart datum is inconsistent
        for (std::size_t i = 0; i < m; ++i) rhs.push_back(-rc[i]);
        for (std::size_t v = 0; v < nA; ++v) {
            auto q = pb.ext.total.eval_poly(gens[gi].poly.derivative(v), naive);
            ScalarMat act = ideal_action(pb.ext, q);
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j) sys.at(gi * m + i, v * m + j) = act.at(i, j);
        }
    }
    SolveResult sol = rank_and_solve(sys, rhs, A.field);
    if (!sol.consistent)
        throw std::invalid_argument("lift_affine: correction system inconsistent (smooth certificate violated)");
    Lifting out;
    for (std::size_t v = 0; v < nA; ++v) {
        std::vector<Scalar> ic((*sol.particular).begin() + static_cast<long>(v * m),
                               (*sol.particular).begin() + static_cast<long>((v + 1) * m));
        out.push_back(pb.ext.total.add(naive[v], pb.ext.ideal_embed(ic)));
    }
    if (!is_lifting(pb, out)) throw std::logic_error("lift_affine: corrected map is not a lifting");
    return out;
}

bool is_lifting(const LiftingProblem &pb, const Lifting &u) {
    for (const auto &g : relative_generators(pb.f))
        if (!pb.ext.total.is_zero(residual_of(pb, g, u))) return false;
    for (std::size_t v = 0; v < pb.u0.size(); ++v)
        if (pb.ext.project(u[v]) != pb.u0[v]) return false;
    return true;
}

HomElement lifting_difference(const LiftingProblem &pb, const Lifting &u, const Lifting &v) {
    HomElement phi;
    for (std::size_t i = 0; i < u.size(); ++i) {
        auto d = pb.ext.total.sub(u[i], v[i]);
        if (pb.ext.project(u[i]) != pb.ext.project(v[i]))
            throw std::invalid_argument("lifting_difference: maps do not lift the same u0");
        phi.rows.push_back(pb.ext.ideal_coords(d));
    }
    return phi;
}

Lifting apply_difference(const LiftingProblem &pb, const Lifting &u, const HomElement &phi) {
    if (phi.rows.size() != u.size()) throw std::invalid_argument("apply_difference: shape mismatch");
    Lifting out;
    for (std::size_t i = 0; i < u.size(); ++i)
        out.push_back(pb.ext.total.add(u[i], pb.ext.ideal_embed(phi.rows[i])));
    if (!is_lifting(pb, out))
        throw std::invalid_argument("apply_difference: result is not a lifting (gradient rows not annihilated)");
    return out;
}

bool annihilates_gradients(const LiftingProblem &pb, const HomElement &phi) {
    Lifting naive;
    for (const auto &q : pb.u0) naive.push_back(pb.ext.section(q));
    for (const auto &g : relative_generators(pb.f)) {
        auto acc = pb.ext.total.zero();
        for (std::size_t v = 0; v < pb.u0.size(); ++v) {
            auto q = pb.ext.total.eval_poly(g.poly.derivative(v), naive);
            acc = pb.ext.total.add(acc, pb.ext.total.mul(q, pb.ext.ideal_embed(phi.rows[v])));
        }
        if (!pb.ext.total.is_zero(acc)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------

const CechPair *CechDatum::pair(std::size_t a, std::size_t b) const {
    for (const auto &p : pairs)
        if (p.a == a && p.b == b) return &p;
    return nullptr;
}

namespace {

std::vector<Scalar> apply_map(const ScalarMat &m, const std::vector<Scalar> &v, Field f) {
    std::vector<Scalar> out(m.rows, Scalar::zero(f));
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) out[i] += m.at(i, j) * v[j];
    return out;
}

LiftingProblem chart_problem(const CechDatum &cov, std::size_t alpha) {
    LiftingProblem pb;
    pb.f = cov.f;
    pb.ext = cov.charts[alpha].ext;
    pb.base_images = cov.charts[alpha].base_images;
    pb.u0 = cov.charts[alpha].u0;
    return pb;
}

bool map_is_algebra_map(const ScalarMat &m, const TableAlgebra &from, const TableAlgebra &to) {
    Field f = from.field;
    // unit to unit
    if (apply_map(m, from.unit(), f) != to.unit()) return false;
    for (std::size_t i = 0; i < from.dim(); ++i)
        for (std::size_t j = i; j < from.dim(); ++j) {
            auto ei = from.zero(), ej = from.zero();
            ei[i] = Scalar::one(f);
            ej[j] = Scalar::one(f);
            auto lhs = apply_map(m, from.mul(ei, ej), f);
            auto rhs = to.mul(apply_map(m, ei, f), apply_map(m, ej, f));
            if (lhs != rhs) return false;
        }
    return true;
}

} // namespace

Diagnostics validate_cover(const CechDatum &cov) {
    Diagnostics d;
    for (const auto &ch : cov.charts)
        if (!(ch.ext.total.field == cov.f.target->field)) {
            d.fail("chart extension field differs from the presentation field");
            return d;
        }
    for (std::size_t a = 0; a < cov.charts.size(); ++a) {
        Diagnostics cd = validate_problem(chart_problem(cov, a));
        for (const auto &i : cd.issues) d.fail("chart " + std::to_string(a + 1) + ": " + i);
    }
    for (const auto &p : cov.pairs) {
        if (p.a >= cov.charts.size() || p.b >= cov.charts.size() || p.a == p.b) {
            d.fail("overlap indexes out of range");
            continue;
        }
        Diagnostics ed = p.ext.validate();
        for (const auto &i : ed.issues) d.fail("overlap algebra: " + i);
        if (!map_is_algebra_map(p.res_a, cov.charts[p.a].ext.total, p.ext.total))
            d.fail("restriction from chart " + std::to_string(p.a + 1) + " is not an algebra map");
        if (!map_is_algebra_map(p.res_b, cov.charts[p.b].ext.total, p.ext.total))
            d.fail("restriction from chart " + std::to_string(p.b + 1) + " is not an algebra map");
        // restrictions carry the chart ideals into the overlap ideal
        Field f = p.ext.total.field;
        for (const auto &iv : cov.charts[p.a].ext.ideal_basis)
            if (!p.ext.in_ideal(apply_map(p.res_a, iv, f))) d.fail("restriction does not preserve the ideal");
        for (const auto &iv : cov.charts[p.b].ext.ideal_basis)
            if (!p.ext.in_ideal(apply_map(p.res_b, iv, f))) d.fail("restriction does not preserve the ideal");
        // u0 data agree on the overlap
        for (std::size_t v = 0; v < cov.f.target->nvars(); ++v) {
            auto ua = apply_map(p.res_a, cov.charts[p.a].ext.section(cov.charts[p.a].u0[v]), f);
            auto ub = apply_map(p.res_b, cov.charts[p.b].ext.section(cov.charts[p.b].u0[v]), f);
            if (p.ext.project(ua) != p.ext.project(ub))
                d.fail("u0 data disagree on overlap (" + std::to_string(p.a + 1) + "," + std::to_string(p.b + 1) +
                       ")");
        }
    }
    return d;
}

namespace {

// shared core of the 1-cochain machinery: cocycle check plus coboundary solve
void check_cocycle_and_solve(const CechDatum &cov, ObstructionReport &rep) {
    Field f = cov.f.target->field;
    std::size_t nA = cov.f.target->nvars();
    // cocycle identity on declared triples
    for (const auto &t : cov.triples) {
        const CechPair *ab = cov.pair(t.a, t.b);
        const CechPair *ac = cov.pair(t.a, t.c);
        const CechPair *bc = cov.pair(t.b, t.c);
        if (!ab || !ac || !bc) continue;
        auto idx = [&](const CechPair *p) {
            for (std::size_t i = 0; i < cov.pairs.size(); ++i)
                if (&cov.pairs[i] == p) return i;
            return std::size_t(0);
        };
        for (std::size_t v = 0; v < nA; ++v) {
            auto vab = apply_map(t.from_ab, ab->ext.ideal_embed(rep.cochain[idx(ab)].rows[v]), f);
            auto vac = apply_map(t.from_ac, ac->ext.ideal_embed(rep.cochain[idx(ac)].rows[v]), f);
            auto vbc = apply_map(t.from_bc, bc->ext.ideal_embed(rep.cochain[idx(bc)].rows[v]), f);
            auto sum = t.ext.total.add(t.ext.total.sub(vab, vac), vbc);
            if (!t.ext.total.is_zero(sum)) rep.cocycle_ok = false;
        }
    }

    // coboundary system: phi_ab = res_a(psi_a) - res_b(psi_b) with psi_a in
    // Hom(u0^* Omega, I_a), i.e. annihilating the gradient rows
    std::vector<std::size_t> offset;
    std::size_t total_unknowns = 0;
    for (const auto &ch : cov.charts) {
        offset.push_back(total_unknowns);
        total_unknowns += nA * ch.ext.ideal_dim();
    }
    std::vector<std::vector<Scalar>> eq_rows;
    std::vector<Scalar> rhs;
    auto push_eq = [&](const std::vector<Scalar> &row, const Scalar &b) {
        eq_rows.push_back(row);
        rhs.push_back(b);
    };
    // gradient-annihilation constraints per chart
    for (std::size_t a = 0; a < cov.charts.size(); ++a) {
        const auto &ext = cov.charts[a].ext;
        std::size_t m = ext.ideal_dim();
        if (m == 0) continue;
        LiftingProblem pb = chart_problem(cov, a);
        Lifting naive;
        for (const auto &q : pb.u0) naive.push_back(ext.section(q));
        for (const auto &g : relative_generators(cov.f)) {
            // sum_v action(dP/dv) psi_{a,v} = 0 (ideal coordinates)
            std::vector<ScalarMat> acts;
            for (std::size_t v = 0; v < nA; ++v)
                acts.push_back(ideal_action(ext, ext.total.eval_poly(g.poly.derivative(v), naive)));
            for (std::size_t i = 0; i < m; ++i) {
                std::vector<Scalar> row(total_unknowns, Scalar::zero(f));
                for (std::size_t v = 0; v < nA; ++v)
                    for (std::size_t j = 0; j < m; ++j) row[offset[a] + v * m + j] = acts[v].at(i, j);
                push_eq(row, Scalar::zero(f));
            }
        }
    }
    // matching equations on overlaps (expressed in overlap ideal coordinates)
    for (std::size_t pi = 0; pi < cov.pairs.size(); ++pi) {
        const auto &p = cov.pairs[pi];
        std::size_t mo = p.ext.ideal_dim();
        std::size_t ma = cov.charts[p.a].ext.ideal_dim();
        std::size_t mb = cov.charts[p.b].ext.ideal_dim();
        for (std::size_t v = 0; v < nA; ++v) {
            // columns for psi_a
            std::vector<std::vector<Scalar>> rows(mo, std::vector<Scalar>(total_unknowns, Scalar::zero(f)));
            for (std::size_t j = 0; j < ma; ++j) {
                auto img = p.ext.ideal_coords(apply_map(p.res_a, cov.charts[p.a].ext.ideal_basis[j], f));
                for (std::size_t i = 0; i < mo; ++i) rows[i][offset[p.a] + v * ma + j] = img[i];
            }
            for (std::size_t j = 0; j < mb; ++j) {
                auto img = p.ext.ideal_coords(apply_map(p.res_b, cov.charts[p.b].ext.ideal_basis[j], f));
                for (std::size_t i = 0; i < mo; ++i) rows[i][offset[p.b] + v * mb + j] = rows[i][offset[p.b] + v * mb + j] - img[i];
            }
            for (std::size_t i = 0; i < mo; ++i) push_eq(rows[i], rep.cochain[pi].rows[v][i]);
        }
    }

    ScalarMat sys(eq_rows.size(), total_unknowns, Scalar::zero(f));
    for (std::size_t i = 0; i < eq_rows.size(); ++i)
        for (std::size_t j = 0; j < total_unknowns; ++j) sys.at(i, j) = eq_rows[i][j];
    SolveResult sol = rank_and_solve(sys, rhs, f);
    rep.vanishes = sol.consistent;
    if (sol.consistent) {
        for (std::size_t a = 0; a < cov.charts.size(); ++a) {
            std::size_t m = cov.charts[a].ext.ideal_dim();
            HomElement psi;
            for (std::size_t v = 0; v < nA; ++v) {
                std::vector<Scalar> r;
                for (std::size_t j = 0; j < m; ++j) r.push_back((*sol.particular)[offset[a] + v * m + j]);
                psi.rows.push_back(std::move(r));
            }
            rep.primitive.push_back(psi);
        }
    } else {
        rep.note = "coboundary system inconsistent: class does not vanish";
    }
}

} // namespace

ObstructionReport obstruction_to_morphism_lift(const CechDatum &cov, const std::vector<Lifting> *chart_liftings) {
    Diagnostics d = validate_cover(cov);
    if (!d.ok) throw std::invalid_argument("obstruction: inconsistent chart data: " + d.issues.front());
    Field f = cov.f.target->field;
    std::size_t nA = cov.f.target->nvars();

    std::vector<Lifting> lifts;
    if (chart_liftings) {
        lifts = *chart_liftings;
        for (std::size_t a = 0; a < cov.charts.size(); ++a)
            if (!is_lifting(chart_problem(cov, a), lifts[a]))
                throw std::invalid_argument("obstruction: supplied chart map is not a lifting");
    } else {
        for (std::size_t a = 0; a < cov.charts.size(); ++a) lifts.push_back(lift_affine(chart_problem(cov, a)));
    }

    ObstructionReport rep;
    // phi_ab = res_a(v_a) - res_b(v_b) on each declared overlap
    for (const auto &p : cov.pairs) {
        HomElement phi;
        for (std::size_t v = 0; v < nA; ++v) {
            auto da = apply_map(p.res_a, lifts[p.a][v], f);
            auto db = apply_map(p.res_b, lifts[p.b][v], f);
            phi.rows.push_back(p.ext.ideal_coords(p.ext.total.sub(da, db)));
        }
        rep.cochain.push_back(phi);
    }
    check_cocycle_and_solve(cov, rep);
    if (rep.vanishes) {
        // corrected liftings agree on overlaps
        for (std::size_t a = 0; a < cov.charts.size(); ++a) {
            Lifting u;
            const auto &ext = cov.charts[a].ext;
            for (std::size_t v = 0; v < nA; ++v)
                u.push_back(ext.total.sub(lifts[a][v], ext.ideal_embed(rep.primitive[a].rows[v])));
            rep.glued.push_back(u);
        }
        for (std::size_t pi = 0; pi < cov.pairs.size(); ++pi) {
            const auto &p = cov.pairs[pi];
            for (std::size_t v = 0; v < nA; ++v) {
                auto da = apply_map(p.res_a, rep.glued[p.a][v], f);
                auto db = apply_map(p.res_b, rep.glued[p.b][v], f);
                if (da != db) {
                    rep.note = "internal: corrected liftings fail to glue";
                    rep.vanishes = false;
                }
            }
        }
    }
    return rep;
}

ObstructionReport coboundary_probe(const CechDatum &cov, const std::vector<HomElement> &cochain) {
    if (cochain.size() != cov.pairs.size())
        throw std::invalid_argument("coboundary_probe: one cochain component per overlap required");
    ObstructionReport rep;
    rep.cochain = cochain;
    check_cocycle_and_solve(cov, rep);
    if (!rep.vanishes) rep.note = "coboundary system inconsistent: class does not vanish";
    return rep;
}

SchemeObstructionReport obstruction_to_scheme_lift(const CechDatum &cov, const std::vector<Transition> &transitions) {
    if (transitions.size() != cov.pairs.size())
        throw std::invalid_argument("scheme obstruction: one transition per declared overlap required");
    Field f = cov.f.target->field;
    std::size_t nA = cov.f.target->nvars();
    const auto &A = *cov.f.target;

    SchemeObstructionReport rep;
    if (cov.triples.empty()) {
        rep.cocycle_ok = true;
        rep.vanishes = true;
        rep.corrected_strict = true;
        rep.note = "no triple overlaps: the 2-class vanishes trivially";
        return rep;
    }

    // collect the monomial support of the data
    std::vector<Expo> support;
    auto add_support = [&](const Expo &e) {
        if (std::find(support.begin(), support.end(), e) == support.end()) support.push_back(e);
    };
    for (const auto &t : transitions)
        for (const auto &dv : t.delta)
            for (const auto &[e, c] : dv) add_support(e);
    if (support.empty()) add_support(Expo(nA, 0));
    std::sort(support.begin(), support.end());

    auto pair_index = [&](std::size_t a, std::size_t b) {
        for (std::size_t i = 0; i < cov.pairs.size(); ++i)
            if (cov.pairs[i].a == a && cov.pairs[i].b == b) return i;
        throw std::invalid_argument("scheme obstruction: missing overlap");
    };

    // triple cochain phi_abc = delta_ab + delta_bc - delta_ac restricted to the triple
    struct TripleCochain {
        std::vector<std::map<Expo, std::vector<Scalar>>> rows; // per variable, total coords in triple algebra
    };
    std::vector<TripleCochain> phi;
    for (const auto &t : cov.triples) {
        const auto &pab = cov.pairs[pair_index(t.a, t.b)];
        const auto &pac = cov.pairs[pair_index(t.a, t.c)];
        const auto &pbc = cov.pairs[pair_index(t.b, t.c)];
        const auto &dab = transitions[pair_index(t.a, t.b)];
        const auto &dac = transitions[pair_index(t.a, t.c)];
        const auto &dbc = transitions[pair_index(t.b, t.c)];
        TripleCochain tc;
        tc.rows.resize(nA);
        for (std::size_t v = 0; v < nA; ++v) {
            for (const auto &[e, c] : dab.delta[v]) {
                auto moved = apply_map(t.from_ab, pab.ext.ideal_embed(c), f);
                auto &slot = tc.rows[v][e];
                if (slot.empty()) slot = t.ext.total.zero();
                slot = t.ext.total.add(slot, moved);
            }
            for (const auto &[e, c] : dbc.delta[v]) {
                auto moved = apply_map(t.from_bc, pbc.ext.ideal_embed(c), f);
                auto &slot = tc.rows[v][e];
                if (slot.empty()) slot = t.ext.total.zero();
                slot = t.ext.total.add(slot, moved);
            }
            for (const auto &[e, c] : dac.delta[v]) {
                auto moved = apply_map(t.from_ac, pac.ext.ideal_embed(c), f);
                auto &slot = tc.rows[v][e];
                if (slot.empty()) slot = t.ext.total.zero();
                slot = t.ext.total.sub(slot, moved);
            }
        }
        phi.push_back(std::move(tc));
    }

    // 2-cocycle identity needs quadruple overlaps; with at most triple data it
    // holds vacuously, which we record explicitly
    rep.cocycle_ok = true;

    // coboundary system: phi' per pair with
    //   res_ab(phi'_ab) - res_ac(phi'_ac) + res_bc(phi'_bc) = phi_abc
    // plus relation compatibility: sum_v dg/dv . phi'(dv) = 0 mod I_A
    std::vector<std::size_t> offset;
    std::size_t unknowns = 0;
    for (const auto &p : cov.pairs) {
        offset.push_back(unknowns);
        unknowns += nA * support.size() * p.ext.ideal_dim();
    }
    std::vector<std::vector<Scalar>> eq_rows;
    std::vector<Scalar> rhs;

    for (std::size_t ti = 0; ti < cov.triples.size(); ++ti) {
        const auto &t = cov.triples[ti];
        std::size_t iab = pair_index(t.a, t.b), iac = pair_index(t.a, t.c), ibc = pair_index(t.b, t.c);
        std::size_t mo = t.ext.total.dim();
        for (std::size_t v = 0; v < nA; ++v) {
            for (std::size_t s = 0; s < support.size(); ++s) {
                std::vector<std::vector<Scalar>> rows(mo, std::vector<Scalar>(unknowns, Scalar::zero(f)));
                auto fill = [&](std::size_t pi, const ScalarMat &res, const Scalar &sign) {
                    const auto &p = cov.pairs[pi];
                    for (std::size_t j = 0; j < p.ext.ideal_dim(); ++j) {
                        auto img = apply_map(res, p.ext.ideal_basis[j], f);
                        for (std::size_t i = 0; i < mo; ++i) {
                            std::size_t col = offset[pi] + (v * support.size() + s) * p.ext.ideal_dim() + j;
                            rows[i][col] += sign * img[i];
                        }
                    }
                };
                fill(iab, t.from_ab, Scalar::one(f));
                fill(iac, t.from_ac, -Scalar::one(f));
                fill(ibc, t.from_bc, Scalar::one(f));
                auto it = phi[ti].rows[v].find(support[s]);
                std::vector<Scalar> target = it == phi[ti].rows[v].end() ? t.ext.total.zero() : it->second;
                for (std::size_t i = 0; i < mo; ++i) {
                    eq_rows.push_back(rows[i]);
                    rhs.push_back(target[i]);
                }
            }
        }
    }
    // relation-compatibility constraints per pair (only when A has relations)
    MonomialOrder ordA = A.default_order();
    for (std::size_t pi = 0; pi < cov.pairs.size(); ++pi) {
        const auto &p = cov.pairs[pi];
        std::size_t m = p.ext.ideal_dim();
        if (m == 0) continue;
        for (const auto &g : A.relations.generators()) {
            // sum_v dg/dv * phi'(dv) must reduce to zero mod I_A; expand per
            // monomial of the product and per ideal coordinate
            std::map<Expo, std::vector<std::vector<Scalar>>> coeff; // monomial -> rows over unknowns (per ideal coord)
            for (std::size_t v = 0; v < nA; ++v) {
                Polynomial dg = g.derivative(v);
                for (auto &[ge, gc] : dg.terms()) {
                    for (std::size_t s = 0; s < support.size(); ++s) {
                        Polynomial mono = Polynomial::monomial(A.ring, expo_mul(ge, support[s]), gc);
                        Polynomial nf = normal_form(mono, A.relations, ordA);
                        for (auto &[ne, nc] : nf.terms()) {
                            auto &rows = coeff[ne];
                            if (rows.empty())
                                rows.assign(m, std::vector<Scalar>(unknowns, Scalar::zero(f)));
                            for (std::size_t j = 0; j < m; ++j) {
                                std::size_t col = offset[pi] + (v * support.size() + s) * m + j;
                                rows[j][col] += nc;
                            }
                        }
                    }
                }
            }
            for (auto &[e, rows] : coeff)
                for (auto &row : rows) {
                    eq_rows.push_back(row);
                    rhs.push_back(Scalar::zero(f));
                }
        }
    }

    ScalarMat sys(eq_rows.size(), unknowns, Scalar::zero(f));
    for (std::size_t i = 0; i < eq_rows.size(); ++i)
        for (std::size_t j = 0; j < unknowns; ++j) sys.at(i, j) = eq_rows[i][j];
    SolveResult sol = rank_and_solve(sys, rhs, f);
    rep.vanishes = sol.consistent;
    if (!sol.consistent) {
        rep.note = "triple cochain is not a coboundary";
        return rep;
    }
    // corrected transitions: v_ab = u_ab - phi'_ab; verify the strict cocycle
    // identity delta_ab + delta_bc - delta_ac = 0 on every triple
    std::vector<Transition> corrected = transitions;
    for (std::size_t pi = 0; pi < cov.pairs.size(); ++pi) {
        const auto &p = cov.pairs[pi];
        std::size_t m = p.ext.ideal_dim();
        for (std::size_t v = 0; v < nA; ++v)
            for (std::size_t s = 0; s < support.size(); ++s) {
                std::vector<Scalar> ic;
                for (std::size_t j = 0; j < m; ++j)
                    ic.push_back((*sol.particular)[offset[pi] + (v * support.size() + s) * m + j]);
                bool nonzero = false;
                for (const auto &x : ic) nonzero = nonzero || !x.is_zero();
                if (!nonzero) continue;
                auto &slot = corrected[pi].delta[v][support[s]];
                if (slot.empty()) slot = std::vector<Scalar>(m, Scalar::zero(f));
                for (std::size_t j = 0; j < m; ++j) slot[j] = slot[j] - ic[j];
            }
    }
    rep.corrected_strict = true;
    for (const auto &t : cov.triples) {
        std::size_t iab = pair_index(t.a, t.b), iac = pair_index(t.a, t.c), ibc = pair_index(t.b, t.c);
        for (std::size_t v = 0; v < nA; ++v) {
            std::map<Expo, std::vector<Scalar>> acc;
            auto addin = [&](const Transition &tr, std::size_t pi, const ScalarMat &res, bool minus) {
                const auto &p = cov.pairs[pi];
                for (const auto &[e, c] : tr.delta[v]) {
                    auto moved = apply_map(res, p.ext.ideal_embed(c), f);
                    auto &slot = acc[e];
                    if (slot.empty()) slot = t.ext.total.zero();
                    slot = minus ? t.ext.total.sub(slot, moved) : t.ext.total.add(slot, moved);
                }
            };
            addin(corrected[iab], iab, t.from_ab, false);
            addin(corrected[ibc], ibc, t.from_bc, false);
            addin(corrected[iac], iac, t.from_ac, true);
            for (auto &[e, c] : acc)
                if (!t.ext.total.is_zero(c)) rep.corrected_strict = false;
        }
    }
    if (!rep.corrected_strict) rep.note = "internal: corrected transitions fail the strict cocycle rule";
    return rep;
}

IsomorphismReport classify_lifting_isomorphisms(const CechDatum &cov, const std::vector<Lifting> &u,
                                                const std::vector<Lifting> &v) {
    // chartwise isomorphism mismatches xi_a = u_a - v_a give a 1-cochain
    // phi_ab = res_a(xi_a) - res_b(xi_b); the two data glue compatibly iff it
    // is a coboundary
    if (u.size() != cov.charts.size() || v.size() != cov.charts.size())
        throw std::invalid_argument("classify_lifting_isomorphisms: chart shapes mismatch");
    // reuse the morphism-obstruction solver on the difference data: liftings
    // u_a and v_a of the same u0, so xi_a is a valid Hom element per chart
    Field f = cov.f.target->field;
    std::size_t nA = cov.f.target->nvars();
    std::vector<HomElement> xi;
    for (std::size_t a = 0; a < cov.charts.size(); ++a) {
        LiftingProblem pb = chart_problem(cov, a);
        xi.push_back(lifting_difference(pb, u[a], v[a]));
    }
    // phi_ab = res_a(xi_a) - res_b(xi_b); the data glue iff it is a coboundary
    std::vector<std::size_t> offset;
    std::size_t unknowns = 0;
    for (const auto &ch : cov.charts) {
        offset.push_back(unknowns);
        unknowns += nA * ch.ext.ideal_dim();
    }
    std::vector<std::vector<Scalar>> eq_rows;
    std::vector<Scalar> rhs;
    for (const auto &p : cov.pairs) {
        std::size_t mo = p.ext.ideal_dim();
        std::size_t ma = cov.charts[p.a].ext.ideal_dim();
        std::size_t mb = cov.charts[p.b].ext.ideal_dim();
        for (std::size_t vv = 0; vv < nA; ++vv) {
            auto da = apply_map(p.res_a, cov.charts[p.a].ext.ideal_embed(xi[p.a].rows[vv]), f);
            auto db = apply_map(p.res_b, cov.charts[p.b].ext.ideal_embed(xi[p.b].rows[vv]), f);
            auto target = p.ext.ideal_coords(p.ext.total.sub(da, db));
            std::vector<std::vector<Scalar>> rows(mo, std::vector<Scalar>(unknowns, Scalar::zero(f)));
            for (std::size_t j = 0; j < ma; ++j) {
                auto img = p.ext.ideal_coords(apply_map(p.res_a, cov.charts[p.a].ext.ideal_basis[j], f));
                for (std::size_t i = 0; i < mo; ++i) rows[i][offset[p.a] + vv * ma + j] += img[i];
            }
            for (std::size_t j = 0; j < mb; ++j) {
                auto img = p.ext.ideal_coords(apply_map(p.res_b, cov.charts[p.b].ext.ideal_basis[j], f));
                for (std::size_t i = 0; i < mo; ++i) rows[i][offset[p.b] + vv * mb + j] = rows[i][offset[p.b] + vv * mb + j] - img[i];
            }
            for (std::size_t i = 0; i < mo; ++i) {
                eq_rows.push_back(rows[i]);
                rhs.push_back(target[i]);
            }
        }
    }
    ScalarMat sys(eq_rows.size(), unknowns, Scalar::zero(f));
    for (std::size_t i = 0; i < eq_rows.size(); ++i)
        for (std::size_t j = 0; j < unknowns; ++j) sys.at(i, j) = eq_rows[i][j];
    SolveResult sol = rank_and_solve(sys, rhs, f);
    IsomorphismReport rep;
    rep.vanishes = sol.consistent;
    rep.note = sol.consistent ? "mismatch cochain is a coboundary: glued isomorphism exists"
                              : "mismatch cochain is not a coboundary for this chart datum";
    return rep;
}

std::uint64_t Rng::next() {
    // splitmix64
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

long Rng::next_small() {
    return static_cast<long>(next() % 9) - 4;
}

} // namespace fscheck
