#ifndef FSCHECK_FINDIM_HPP
#define FSCHECK_FINDIM_HPP

#include "fscheck/groebner.hpp"
#include "fscheck/matrix.hpp"

#include <map>

namespace fscheck {

// A finite dimensional quotient k[vars]/I with its staircase basis; elements
// are handled through normal forms and coordinate vectors.
struct FinDimAlgebra {
    PolyRingPtr ring;
    MonomialOrder ord = MonomialOrder::degrevlex();
    std::vector<Polynomial> gb;
    std::vector<Expo> basis;
    std::map<Expo, std::size_t> index;

    Field field() const { return ring->field; }
    std::size_t dim() const { return basis.size(); }

    Polynomial reduce(const Polynomial &p) const { return normal_form(p, gb, ord); }
    std::vector<Scalar> coords(const Polynomial &p) const;
    Polynomial from_coords(const std::vector<Scalar> &c) const;
    // matrix of multiplication by q on the quotient
    ScalarMat mult_operator(const Polynomial &q) const;
};

// Throws std::invalid_argument when the quotient is infinite dimensional.
FinDimAlgebra make_findim(const PolyIdeal &ideal);

// k-linear span utilities ------------------------------------------------

// Row space tracker with exact Gauss; used for all module rank counting.
class Span {
public:
    explicit Span(std::size_t width, Field f) : width_(width), field_(f) {}

    std::size_t dim() const { return rows_.size(); }
    std::size_t width() const { return width_; }

    bool insert(std::vector<Scalar> v);      // false when already in span
    bool contains(std::vector<Scalar> v) const;
    void insert_all(const std::vector<std::vector<Scalar>> &vs);

    const std::vector<std::vector<Scalar>> &rows() const { return rows_; }

private:
    std::vector<Scalar> reduce(std::vector<Scalar> v) const;
    std::size_t width_;
    Field field_;
    std::vector<std::vector<Scalar>> rows_;     // echelonized
    std::vector<std::size_t> pivots_;
};

// Quotient module R^nsym / <rows> over a finite dimensional algebra, flattened
// to k-coordinates (symbol-major blocks of size dim R).
struct FreeModule {
    const FinDimAlgebra *R;
    std::size_t nsym;

    std::size_t kdim() const { return nsym * R->dim(); }
    std::vector<Scalar> flatten(const std::vector<Polynomial> &row) const;
    // expanded row space of an R-module generating set
    Span row_space(const std::vector<std::vector<Polynomial>> &rows) const;
};

} // namespace fscheck

#endif
