#ifndef FSCHECK_MATRIX_HPP
#define FSCHECK_MATRIX_HPP

#include "fscheck/polynomial.hpp"

#include <optional>
#include <vector>

namespace fscheck {

template <class T> struct Dense {
    std::size_t rows = 0, cols = 0;
    std::vector<T> data;

    Dense() = default;
    Dense(std::size_t r, std::size_t c, T fill) : rows(r), cols(c), data(r * c, fill) {}

    T &at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const T &at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

using ScalarMat = Dense<Scalar>;
using PolyMat = Dense<Polynomial>;

struct SolveResult {
    std::size_t rank = 0;
    bool consistent = true;                      // meaningful when a rhs was given
    std::optional<std::vector<Scalar>> particular;
    std::vector<std::vector<Scalar>> nullspace;  // basis of the homogeneous solutions
};

// Exact Gaussian elimination; when `b` is given also reports one particular
// solution of Mx=b (or inconsistency) and a nullspace basis.
SolveResult rank_and_solve(const ScalarMat &m, const std::optional<std::vector<Scalar>> &b, Field field);

std::size_t rank_of(const ScalarMat &m, Field field);

// Rank by exhaustive minor expansion; test oracle for small matrices.
std::size_t rank_by_minors(const ScalarMat &m, Field field);

// Sub-determinant of the given rows/columns of a polynomial matrix.
Polynomial poly_minor(const PolyMat &m, const std::vector<std::size_t> &rows,
                      const std::vector<std::size_t> &cols, const PolyRingPtr &ring);

ScalarMat eval_matrix(const PolyMat &m, const std::vector<Scalar> &point, Field field);

} // namespace fscheck

#endif
