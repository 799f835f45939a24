#include "fscheck/matrix.hpp"

#include <algorithm>
#include <functional>

namespace fscheck {

SolveResult rank_and_solve(const ScalarMat &m, const std::optional<std::vector<Scalar>> &b, Field field) {
    if (b && b->size() != m.rows) throw std::invalid_argument("rank_and_solve: rhs dimension mismatch");
    std::size_t rows = m.rows, cols = m.cols;
    // working copy augmented with rhs
    std::vector<std::vector<Scalar>> a(rows, std::vector<Scalar>(cols + (b ? 1 : 0), Scalar::zero(field)));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) a[i][j] = m.at(i, j);
        if (b) a[i][cols] = (*b)[i];
    }

    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t sel = r;
        while (sel < rows && a[sel][c].is_zero()) ++sel;
        if (sel == rows) continue;
        std::swap(a[sel], a[r]);
        Scalar inv = a[r][c].inv();
        for (auto &x : a[r]) x = x * inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c].is_zero()) continue;
            Scalar f = a[i][c];
            for (std::size_t j = c; j < a[i].size(); ++j) a[i][j] = a[i][j] - f * a[r][j];
        }
        pivot_col.push_back(c);
        ++r;
    }

    SolveResult res;
    res.rank = r;
    if (b) {
        for (std::size_t i = r; i < rows; ++i)
            if (!a[i][cols].is_zero()) res.consistent = false;
        if (res.consistent) {
            std::vector<Scalar> x(cols, Scalar::zero(field));
            for (std::size_t k = 0; k < pivot_col.size(); ++k) x[pivot_col[k]] = a[k][cols];
            res.particular = std::move(x);
        }
    }
    // nullspace basis from the free columns
    std::vector<char> is_pivot(cols, 0);
    for (auto c : pivot_col) is_pivot[c] = 1;
    for (std::size_t c = 0; c < cols; ++c) {
        if (is_pivot[c]) continue;
        std::vector<Scalar> v(cols, Scalar::zero(field));
        v[c] = Scalar::one(field);
        for (std::size_t k = 0; k < pivot_col.size(); ++k) v[pivot_col[k]] = -a[k][c];
        res.nullspace.push_back(std::move(v));
    }
    return res;
}

std::size_t rank_of(const ScalarMat &m, Field field) {
    return rank_and_solve(m, std::nullopt, field).rank;
}

namespace {

Scalar det_of(const ScalarMat &m, const std::vector<std::size_t> &rows, const std::vector<std::size_t> &cols,
              Field field) {
    std::size_t n = rows.size();
    if (n == 0) return Scalar::one(field);
    if (n == 1) return m.at(rows[0], cols[0]);
    Scalar acc = Scalar::zero(field);
    std::vector<std::size_t> sub_rows(rows.begin() + 1, rows.end());
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<std::size_t> sub_cols;
        for (std::size_t j = 0; j < n; ++j)
            if (j != k) sub_cols.push_back(cols[j]);
        Scalar term = m.at(rows[0], cols[k]) * det_of(m, sub_rows, sub_cols, field);
        acc = (k % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

void subsets_of(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>> &out) {
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

std::size_t rank_by_minors(const ScalarMat &m, Field field) {
    std::size_t maxk = std::min(m.rows, m.cols);
    for (std::size_t k = maxk; k >= 1; --k) {
        std::vector<std::vector<std::size_t>> rsets, csets;
        subsets_of(m.rows, k, rsets);
        subsets_of(m.cols, k, csets);
        for (const auto &rs : rsets)
            for (const auto &cs : csets)
                if (!det_of(m, rs, cs, field).is_zero()) return k;
    }
    return 0;
}

Polynomial poly_minor(const PolyMat &m, const std::vector<std::size_t> &rows,
                      const std::vector<std::size_t> &cols, const PolyRingPtr &ring) {
    std::size_t n = rows.size();
    if (n == 0) return Polynomial::constant(ring, Scalar::one(ring->field));
    if (n == 1) return m.at(rows[0], cols[0]);
    Polynomial acc = Polynomial::zero(ring);
    std::vector<std::size_t> sub_rows(rows.begin() + 1, rows.end());
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<std::size_t> sub_cols;
        for (std::size_t j = 0; j < n; ++j)
            if (j != k) sub_cols.push_back(cols[j]);
        Polynomial term = m.at(rows[0], cols[k]) * poly_minor(m, sub_rows, sub_cols, ring);
        acc = (k % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

ScalarMat eval_matrix(const PolyMat &m, const std::vector<Scalar> &point, Field field) {
    ScalarMat out(m.rows, m.cols, Scalar::zero(field));
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) out.at(i, j) = m.at(i, j).eval(point);
    return out;
}

} // namespace fscheck
