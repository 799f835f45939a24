#ifndef FSCHECK_PRESENTATION_HPP
#define FSCHECK_PRESENTATION_HPP

#include "fscheck/groebner.hpp"
#include "fscheck/matrix.hpp"

#include <functional>
#include <memory>

namespace fscheck {

// Finitely presented adic algebra A = k{T}[[Z]]/I with polynomial relations.
// The ideal of definition is (Z) + I; the T-block is restricted, the Z-block
// topologically nilpotent.
struct AdicPresentation {
    std::string name; // workspace label, informational
    Field field;
    std::vector<std::string> t_vars;
    std::vector<std::string> z_vars;
    PolyRingPtr ring;    // variables: t_vars then z_vars
    PolyIdeal relations; // ideal I in `ring`

    std::size_t nvars() const { return ring->nvars(); }
    bool is_z_var(std::size_t i) const { return i >= t_vars.size(); }
    std::vector<char> z_mask() const;
    std::vector<std::size_t> z_indices() const;

    // block order putting the Z-variables first
    MonomialOrder default_order() const;
    // I + (Z), the polynomial model of the ideal of definition
    PolyIdeal definition_ideal() const;
    // I + (Z)^deg
    PolyIdeal truncation_ideal(std::uint32_t deg) const;
};

using PresentationPtr = std::shared_ptr<const AdicPresentation>;

PresentationPtr make_presentation(Field field, std::vector<std::string> t_vars, std::vector<std::string> z_vars,
                                  std::vector<Polynomial> relations, std::string name = "");
// as above, but relation polynomials given as builders over the fresh ring
PresentationPtr make_presentation_with(Field field, std::vector<std::string> t_vars, std::vector<std::string> z_vars,
                                       const std::function<std::vector<Polynomial>(const PolyRingPtr &)> &rels,
                                       std::string name = "");

struct Diagnostics {
    bool ok = true;
    std::vector<std::string> issues;

    void fail(std::string msg) {
        ok = false;
        issues.push_back(std::move(msg));
    }
};

Diagnostics validate(const AdicPresentation &p);

// A_n = k[T,Z]/(I + (Z)^{n+1})
struct TruncatedAlgebra {
    PresentationPtr base;
    std::uint32_t level = 0;
    PolyIdeal ideal;
};

TruncatedAlgebra truncate(const PresentationPtr &p, std::uint32_t level);

// (algebraic, topological) dimension
std::pair<int, int> dimensions(const AdicPresentation &p);

// Rational point with all Z-coordinates zero.
struct RationalPoint {
    PresentationPtr on;
    std::vector<Scalar> coords; // indexed like on->ring vars
};

RationalPoint make_point(const PresentationPtr &p, const std::vector<std::pair<std::string, Scalar>> &assignments);
Diagnostics validate_point(const RationalPoint &x);

// generators of the maximal ideal m_x = (v - x_v)
std::vector<Polynomial> maximal_ideal_gens(const RationalPoint &x);

} // namespace fscheck

#endif
