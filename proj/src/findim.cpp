#include "fscheck/findim.hpp"

namespace fscheck {

std::vector<Scalar> FinDimAlgebra::coords(const Polynomial &p) const {
    Polynomial nf = reduce(p);
    std::vector<Scalar> c(dim(), Scalar::zero(field()));
    for (auto &[e, s] : nf.terms()) {
        auto it = index.find(e);
        if (it == index.end()) throw std::logic_error("findim: normal form outside the staircase");
        c[it->second] = s;
    }
    return c;
}

Polynomial FinDimAlgebra::from_coords(const std::vector<Scalar> &c) const {
    Polynomial p = Polynomial::zero(ring);
    for (std::size_t i = 0; i < c.size(); ++i)
        if (!c[i].is_zero()) p.add_term(basis[i], c[i]);
    return p;
}

ScalarMat FinDimAlgebra::mult_operator(const Polynomial &q) const {
    ScalarMat m(dim(), dim(), Scalar::zero(field()));
    for (std::size_t j = 0; j < dim(); ++j) {
        Polynomial bj = Polynomial::monomial(ring, basis[j], Scalar::one(field()));
        auto col = coords(q * bj);
        for (std::size_t i = 0; i < dim(); ++i) m.at(i, j) = col[i];
    }
    return m;
}

FinDimAlgebra make_findim(const PolyIdeal &ideal) {
    FinDimAlgebra a;
    a.ring = ideal.ring();
    a.gb = ideal.groebner(a.ord);
    auto qb = quotient_basis(ideal);
    if (!qb) throw std::invalid_argument("findim: quotient is not finite dimensional");
    a.basis = *qb;
    for (std::size_t i = 0; i < a.basis.size(); ++i) a.index.emplace(a.basis[i], i);
    return a;
}

std::vector<Scalar> Span::reduce(std::vector<Scalar> v) const {
    for (std::size_t k = 0; k < rows_.size(); ++k) {
        const Scalar &x = v[pivots_[k]];
        if (x.is_zero()) continue;
        Scalar f = x; // rows are normalized with pivot 1
        for (std::size_t j = 0; j < width_; ++j) v[j] = v[j] - f * rows_[k][j];
    }
    return v;
}

bool Span::insert(std::vector<Scalar> v) {
    v = reduce(std::move(v));
    std::size_t piv = width_;
    for (std::size_t j = 0; j < width_; ++j)
        if (!v[j].is_zero()) {
            piv = j;
            break;
        }
    if (piv == width_) return false;
    Scalar inv = v[piv].inv();
    for (auto &x : v) x = x * inv;
    rows_.push_back(std::move(v));
    pivots_.push_back(piv);
    return true;
}

bool Span::contains(std::vector<Scalar> v) const {
    v = reduce(std::move(v));
    for (const auto &x : v)
        if (!x.is_zero()) return false;
    return true;
}

void Span::insert_all(const std::vector<std::vector<Scalar>> &vs) {
    for (const auto &v : vs) insert(v);
}

std::vector<Scalar> FreeModule::flatten(const std::vector<Polynomial> &row) const {
    if (row.size() != nsym) throw std::invalid_argument("module row arity mismatch");
    std::vector<Scalar> out;
    out.reserve(kdim());
    for (const auto &p : row) {
        auto c = R->coords(p);
        out.insert(out.end(), c.begin(), c.end());
    }
    return out;
}

Span FreeModule::row_space(const std::vector<std::vector<Polynomial>> &rows) const {
    Span span(kdim(), R->field());
    for (const auto &row : rows) {
        for (std::size_t b = 0; b < R->dim(); ++b) {
            Polynomial m = Polynomial::monomial(R->ring, R->basis[b], Scalar::one(R->field()));
            std::vector<Polynomial> scaled;
            scaled.reserve(nsym);
            for (const auto &p : row) scaled.push_back(R->reduce(m * p));
            span.insert(flatten(scaled));
        }
    }
    return span;
}

} // namespace fscheck
