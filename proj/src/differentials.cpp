#include "fscheck/differentials.hpp"

#include <functional>

namespace fscheck {

DifferentialPresentation omega_presentation(const AdicMorphism &f) {
    Diagnostics d = validate_morphism(f);
    if (!d.ok) throw std::invalid_argument("omega_presentation: invalid morphism: " + d.issues.front());
    const auto &A = *f.target;
    const auto &B = *f.source;
    MonomialOrder ord = A.default_order();

    DifferentialPresentation om;
    om.f = f;
    for (const auto &v : A.ring->vars) om.basis.push_back("d" + v);

    std::vector<std::vector<Polynomial>> rows;
    for (const auto &g : A.relations.generators()) {
        std::vector<Polynomial> row;
        for (std::size_t v = 0; v < A.nvars(); ++v)
            row.push_back(normal_form(g.derivative(v), A.relations, ord));
        rows.push_back(std::move(row));
        om.row_labels.push_back(g.str());
    }
    for (std::size_t b = 0; b < B.nvars(); ++b) {
        std::vector<Polynomial> row;
        for (std::size_t v = 0; v < A.nvars(); ++v)
            row.push_back(normal_form(-f.images[b].derivative(v), A.relations, ord));
        rows.push_back(std::move(row));
        om.row_labels.push_back(B.ring->vars[b]);
    }
    om.rows = PolyMat(rows.size(), A.nvars(), Polynomial::zero(A.ring));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < A.nvars(); ++j) om.rows.at(i, j) = rows[i][j];
    return om;
}

ScalarMat jacobian_at(const DifferentialPresentation &om, const RationalPoint &x) {
    if (x.on.get() != om.f.target.get()) throw std::invalid_argument("jacobian_at: point not on the target");
    Diagnostics d = validate_point(x);
    if (!d.ok) throw std::invalid_argument("jacobian_at: invalid point: " + d.issues.front());
    return eval_matrix(om.rows, x.coords, x.on->field);
}

ScalarMat jacobian_at(const AdicMorphism &f, const RationalPoint &x) {
    return jacobian_at(omega_presentation(f), x);
}

namespace {

void subsets_rec(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>> &out) {
    std::vector<std::size_t> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (cur.size() == k) {
            out.push_back(cur);
            return;
        }
        for (std::size_t i = start; i < n; ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
}

} // namespace

std::vector<Polynomial> fitting_generators(const PolyMat &rows, std::size_t nsym, std::size_t i,
                                           const PolyRingPtr &ring) {
    if (i >= nsym) return {Polynomial::constant(ring, Scalar::one(ring->field))};
    std::size_t k = nsym - i; // minor size
    if (k > rows.rows) return {}; // zero ideal
    std::vector<std::vector<std::size_t>> rsets, csets;
    subsets_rec(rows.rows, k, rsets);
    subsets_rec(nsym, k, csets);
    std::vector<Polynomial> out;
    for (const auto &rs : rsets)
        for (const auto &cs : csets) {
            Polynomial m = poly_minor(rows, rs, cs, ring);
            if (!m.is_zero()) out.push_back(m);
        }
    return out;
}

Ramification fitting_unramified_test(const AdicMorphism &f) {
    DifferentialPresentation om = omega_presentation(f);
    const auto &A = *f.target;
    std::size_t nsym = om.basis.size();
    if (nsym == 0) return Ramification::Unramified;
    if (om.rows.rows < nsym) return Ramification::Ramified;
    std::vector<Polynomial> minors = fitting_generators(om.rows, nsym, 0, A.ring);
    PolyIdeal test = ideal_sum(A.definition_ideal(), minors);
    return is_unit_ideal(test, A.default_order()) ? Ramification::Unramified : Ramification::Ramified;
}

namespace {

PolyIdeal bitruncation_ideal(const AdicPresentation &A, const std::vector<Polynomial> &extra,
                             std::uint32_t zlevel, std::uint32_t tdeg) {
    std::vector<Polynomial> gens = A.relations.generators();
    gens.insert(gens.end(), extra.begin(), extra.end());
    auto zp = power_generators(A.ring, A.z_indices(), zlevel + 1);
    gens.insert(gens.end(), zp.begin(), zp.end());
    std::vector<std::size_t> tidx;
    for (std::size_t i = 0; i < A.t_vars.size(); ++i) tidx.push_back(i);
    auto tp = power_generators(A.ring, tidx, tdeg + 1);
    gens.insert(gens.end(), tp.begin(), tp.end());
    return PolyIdeal(A.ring, std::move(gens));
}

struct QuotientModule {
    FreeModule free;
    Span rows;
    long dim() const { return static_cast<long>(free.kdim()) - static_cast<long>(rows.dim()); }
};

QuotientModule make_quotient(const FinDimAlgebra &R, std::size_t nsym,
                             const std::vector<std::vector<Polynomial>> &rows) {
    QuotientModule q{FreeModule{&R, nsym}, Span(nsym * R.dim(), R.field())};
    q.rows = q.free.row_space(rows);
    return q;
}

// rank of the induced map M1 -> M2 from images of the free generators
long induced_rank(const QuotientModule &m1, const QuotientModule &m2,
                  const std::vector<std::vector<Polynomial>> &gen_images) {
    Span extended(m2.free.kdim(), m2.free.R->field());
    for (const auto &r : m2.rows.rows()) extended.insert(r);
    std::size_t base = extended.dim();
    Span moved = m2.free.row_space(gen_images);
    for (const auto &r : moved.rows()) extended.insert(r);
    (void)m1;
    return static_cast<long>(extended.dim() - base);
}

} // namespace

FundamentalSequenceReport fundamental_sequence_first(const AdicMorphism &f, const AdicMorphism &g,
                                                     std::uint32_t levels, std::uint32_t tdeg) {
    if (g.target.get() != f.source.get() && !(g.target->ring->vars == f.source->ring->vars))
        throw std::invalid_argument("fundamental_sequence_first: morphisms are not composable");
    const auto &A = *f.target;
    const auto &B = *f.source;
    const auto &C = *g.source;
    AdicMorphism h = compose(f, g); // C -> A
    MonomialOrder ordA = A.default_order();

    FundamentalSequenceReport rep;
    for (std::uint32_t n = 0; n <= levels; ++n) {
        FinDimAlgebra R = make_findim(bitruncation_ideal(A, {}, n, tdeg));

        // left: free on B-symbols; Omega_{B/C} rows pushed through f
        std::vector<std::vector<Polynomial>> left_rows;
        for (const auto &gen : B.relations.generators()) {
            std::vector<Polynomial> row;
            for (std::size_t b = 0; b < B.nvars(); ++b)
                row.push_back(gen.derivative(b).substitute(A.ring, f.images));
            left_rows.push_back(std::move(row));
        }
        for (std::size_t c = 0; c < C.nvars(); ++c) {
            std::vector<Polynomial> row;
            for (std::size_t b = 0; b < B.nvars(); ++b)
                row.push_back(-g.images[c].derivative(b).substitute(A.ring, f.images));
            left_rows.push_back(std::move(row));
        }
        // middle: Omega_{A/C}
        std::vector<std::vector<Polynomial>> mid_rows;
        for (const auto &gen : A.relations.generators()) {
            std::vector<Polynomial> row;
            for (std::size_t v = 0; v < A.nvars(); ++v) row.push_back(gen.derivative(v));
            mid_rows.push_back(std::move(row));
        }
        for (std::size_t c = 0; c < C.nvars(); ++c) {
            std::vector<Polynomial> row;
            for (std::size_t v = 0; v < A.nvars(); ++v) row.push_back(-h.images[c].derivative(v));
            mid_rows.push_back(std::move(row));
        }
        // right: Omega_{A/B}
        std::vector<std::vector<Polynomial>> right_rows = mid_rows;
        right_rows.resize(A.relations.generators().size());
        for (std::size_t b = 0; b < B.nvars(); ++b) {
            std::vector<Polynomial> row;
            for (std::size_t v = 0; v < A.nvars(); ++v) row.push_back(-f.images[b].derivative(v));
            right_rows.push_back(std::move(row));
        }

        QuotientModule M1 = make_quotient(R, B.nvars(), left_rows);
        QuotientModule M2 = make_quotient(R, A.nvars(), mid_rows);
        QuotientModule M3 = make_quotient(R, A.nvars(), right_rows);

        // Phi: e_b -> sum_v d(im_f(b))/dv e_v ; Psi: identity on symbols
        std::vector<std::vector<Polynomial>> phi_images;
        for (std::size_t b = 0; b < B.nvars(); ++b) {
            std::vector<Polynomial> img;
            for (std::size_t v = 0; v < A.nvars(); ++v) img.push_back(f.images[b].derivative(v));
            phi_images.push_back(std::move(img));
        }
        std::vector<std::vector<Polynomial>> psi_images;
        for (std::size_t v = 0; v < A.nvars(); ++v) {
            std::vector<Polynomial> img(A.nvars(), Polynomial::zero(A.ring));
            img[v] = Polynomial::constant(A.ring, Scalar::one(A.field));
            psi_images.push_back(std::move(img));
        }

        SequenceStage st;
        st.level = n;
        st.dim_left = M1.dim();
        st.dim_middle = M2.dim();
        st.dim_right = M3.dim();
        st.rank_first = induced_rank(M1, M2, phi_images);
        st.rank_second = induced_rank(M2, M3, psi_images);
        st.second_surjective = st.rank_second == st.dim_right;
        // composite Psi o Phi lands in the right rows
        st.composite_zero = true;
        for (std::size_t b = 0; b < B.nvars() && st.composite_zero; ++b) {
            for (std::size_t k = 0; k < R.dim() && st.composite_zero; ++k) {
                Polynomial m = Polynomial::monomial(R.ring, R.basis[k], Scalar::one(R.field()));
                std::vector<Polynomial> vec;
                for (std::size_t v = 0; v < A.nvars(); ++v) vec.push_back(R.reduce(m * phi_images[b][v]));
                if (!M3.rows.contains(M3.free.flatten(vec))) st.composite_zero = false;
            }
        }
        st.exact_middle = st.composite_zero && (st.rank_first == st.dim_middle - st.rank_second);
        if (!st.exact_middle || !st.second_surjective) {
            rep.exact = false;
            if (rep.failure.empty())
                rep.failure = std::string(!st.second_surjective ? "right surjectivity" : "exactness at middle") +
                              " fails at level " + std::to_string(n);
        }
        rep.stages.push_back(st);
        (void)ordA;
    }
    return rep;
}

FundamentalSequenceReport fundamental_sequence_second(const AdicMorphism &f, const std::vector<Polynomial> &iprime,
                                                      std::uint32_t levels, std::uint32_t tdeg) {
    const auto &A = *f.target;
    const auto &B = *f.source;
    for (const auto &g : iprime)
        if (!same_ring(g.ring(), A.ring))
            throw std::invalid_argument("fundamental_sequence_second: I' must live in the target ring");

    FundamentalSequenceReport rep;
    for (std::uint32_t n = 0; n <= levels; ++n) {
        FinDimAlgebra R = make_findim(bitruncation_ideal(A, iprime, n, tdeg));

        // middle: Omega_{A/B} (x) A'
        std::vector<std::vector<Polynomial>> mid_rows;
        for (const auto &gen : A.relations.generators()) {
            std::vector<Polynomial> row;
            for (std::size_t v = 0; v < A.nvars(); ++v) row.push_back(gen.derivative(v));
            mid_rows.push_back(std::move(row));
        }
        for (std::size_t b = 0; b < B.nvars(); ++b) {
            std::vector<Polynomial> row;
            for (std::size_t v = 0; v < A.nvars(); ++v) row.push_back(-f.images[b].derivative(v));
            mid_rows.push_back(std::move(row));
        }
        // right: Omega_{A'/B} adds the I' gradients
        std::vector<std::vector<Polynomial>> right_rows = mid_rows;
        std::vector<std::vector<Polynomial>> delta_rows;
        for (const auto &gen : iprime) {
            std::vector<Polynomial> row;
            for (std::size_t v = 0; v < A.nvars(); ++v) row.push_back(gen.derivative(v));
            right_rows.push_back(row);
            delta_rows.push_back(std::move(row));
        }

        QuotientModule M2 = make_quotient(R, A.nvars(), mid_rows);
        QuotientModule M3 = make_quotient(R, A.nvars(), right_rows);

        std::vector<std::vector<Polynomial>> psi_images;
        for (std::size_t v = 0; v < A.nvars(); ++v) {
            std::vector<Polynomial> img(A.nvars(), Polynomial::zero(A.ring));
            img[v] = Polynomial::constant(A.ring, Scalar::one(A.field));
            psi_images.push_back(std::move(img));
        }

        SequenceStage st;
        st.level = n;
        st.dim_left = static_cast<long>(delta_rows.size()); // conormal generator count
        st.dim_middle = M2.dim();
        st.dim_right = M3.dim();
        st.rank_first = induced_rank(M2, M2, delta_rows); // image of delta inside the middle
        st.rank_second = induced_rank(M2, M3, psi_images);
        st.second_surjective = st.rank_second == st.dim_right;
        st.composite_zero = true;
        for (const auto &row : delta_rows) {
            for (std::size_t k = 0; k < R.dim() && st.composite_zero; ++k) {
                Polynomial m = Polynomial::monomial(R.ring, R.basis[k], Scalar::one(R.field()));
                std::vector<Polynomial> vec;
                for (std::size_t v = 0; v < A.nvars(); ++v) vec.push_back(R.reduce(m * row[v]));
                if (!M3.rows.contains(M3.free.flatten(vec))) st.composite_zero = false;
            }
        }
        st.exact_middle = st.composite_zero && (st.rank_first == st.dim_middle - st.rank_second);
        if (!st.exact_middle || !st.second_surjective) {
            rep.exact = false;
            if (rep.failure.empty())
                rep.failure = std::string(!st.second_surjective ? "right surjectivity" : "exactness at middle") +
                              " fails at level " + std::to_string(n);
        }
        rep.stages.push_back(st);
    }
    return rep;
}

TruncationOracleReport truncation_oracle(const AdicMorphism &f, std::uint32_t level) {
    const auto &A = *f.target;
    const auto &B = *f.source;
    MonomialOrder ord = A.default_order();
    PolyIdeal trunc = A.truncation_ideal(level + 1);

    DifferentialPresentation om = omega_presentation(f);
    std::size_t nsym = A.nvars();

    // ordinary Kaehler rows for B_n -> A_n: include the Z^{n+1} power generators
    auto zpows = power_generators(A.ring, A.z_indices(), level + 1);
    std::vector<std::vector<Polynomial>> oracle_rows;
    std::vector<std::vector<Polynomial>> adjusted_rows;
    for (std::size_t i = 0; i < om.rows.rows; ++i) {
        std::vector<Polynomial> row;
        for (std::size_t j = 0; j < nsym; ++j) row.push_back(om.rows.at(i, j));
        oracle_rows.push_back(row);
        adjusted_rows.push_back(row);
    }
    for (const auto &zp : zpows) {
        std::vector<Polynomial> row;
        for (std::size_t v = 0; v < nsym; ++v) row.push_back(zp.derivative(v));
        oracle_rows.push_back(row);
        adjusted_rows.push_back(row);
    }
    (void)B;

    auto to_mat = [&](const std::vector<std::vector<Polynomial>> &rows) {
        PolyMat m(rows.size(), nsym, Polynomial::zero(A.ring));
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < nsym; ++j) m.at(i, j) = rows[i][j];
        return m;
    };
    PolyMat oracle_mat = to_mat(oracle_rows);
    PolyMat direct_mat = om.rows;
    PolyMat adjusted_mat = to_mat(adjusted_rows);

    TruncationOracleReport rep;
    rep.level = level;
    rep.discrete = A.z_vars.empty();
    for (std::size_t i = 0; i <= nsym; ++i) {
        PolyIdeal fo = ideal_sum(trunc, fitting_generators(oracle_mat, nsym, i, A.ring));
        PolyIdeal fd = ideal_sum(trunc, fitting_generators(direct_mat, nsym, i, A.ring));
        PolyIdeal fa = ideal_sum(trunc, fitting_generators(adjusted_mat, nsym, i, A.ring));
        OracleEntry e;
        e.fitt_index = i;
        e.equal_direct = ideal_equal(fo, fd, ord);
        e.equal_adjusted = ideal_equal(fo, fa, ord);
        rep.agrees_directly = rep.agrees_directly && e.equal_direct;
        rep.agrees_adjusted = rep.agrees_adjusted && e.equal_adjusted;
        rep.table.push_back(e);
    }
    rep.expected_divergence = !rep.discrete && !rep.agrees_directly && rep.agrees_adjusted;
    return rep;
}

} // namespace fscheck
