#ifndef FSCHECK_DEFORMATION_HPP
#define FSCHECK_DEFORMATION_HPP

#include "fscheck/classifier.hpp"

#include <map>

namespace fscheck {

// Commutative finite dimensional algebra with an explicit multiplication
// table; the first basis element is the unit.
struct TableAlgebra {
    Field field;
    std::vector<std::string> basis_names;
    std::vector<std::vector<std::vector<Scalar>>> mult; // mult[i][j] = coords of e_i e_j

    std::size_t dim() const { return basis_names.size(); }
    std::vector<Scalar> zero() const { return std::vector<Scalar>(dim(), Scalar::zero(field)); }
    std::vector<Scalar> unit() const;
    std::vector<Scalar> embed(const Scalar &c) const;
    std::vector<Scalar> add(const std::vector<Scalar> &a, const std::vector<Scalar> &b) const;
    std::vector<Scalar> sub(const std::vector<Scalar> &a, const std::vector<Scalar> &b) const;
    std::vector<Scalar> mul(const std::vector<Scalar> &a, const std::vector<Scalar> &b) const;
    std::vector<Scalar> scale(const Scalar &c, const std::vector<Scalar> &a) const;
    bool is_zero(const std::vector<Scalar> &a) const;

    // value of a scalar-coefficient polynomial on algebra elements
    std::vector<Scalar> eval_poly(const Polynomial &p, const std::vector<std::vector<Scalar>> &args) const;

    Diagnostics validate() const; // unit, commutativity, associativity
};

// Square-zero extension C ->> C/I: the total algebra together with a k-basis
// of the square-zero ideal I. Quotient elements are carried in reduced
// coordinates (the non-pivot columns of the echelonized ideal).
struct SquareZeroExtension {
    std::string name;
    TableAlgebra total;
    std::vector<std::vector<Scalar>> ideal_basis; // echelonized on construction

    std::size_t ideal_dim() const { return ideal_basis.size(); }
    std::size_t quotient_dim() const { return total.dim() - ideal_basis.size(); }

    std::vector<Scalar> reduce_mod_ideal(std::vector<Scalar> v) const;
    std::vector<Scalar> project(const std::vector<Scalar> &total_coords) const; // quotient coords
    std::vector<Scalar> section(const std::vector<Scalar> &quotient_coords) const;
    bool in_ideal(const std::vector<Scalar> &total_coords) const;
    std::vector<Scalar> ideal_coords(const std::vector<Scalar> &total_coords) const;
    std::vector<Scalar> ideal_embed(const std::vector<Scalar> &coords) const;

    Diagnostics validate() const;

private:
    friend SquareZeroExtension make_extension(std::string, TableAlgebra, std::vector<std::vector<Scalar>>);
    std::vector<std::size_t> pivots_;
    std::vector<std::size_t> free_cols_;
    void recompute();
};

SquareZeroExtension make_extension(std::string name, TableAlgebra total,
                                   std::vector<std::vector<Scalar>> ideal_basis);

// Lifting problem for a smooth affine source: structure morphism f : B -> A,
// base map B -> C (total coordinates) and u0 : A -> C/I (quotient coordinates).
struct LiftingProblem {
    AdicMorphism f;
    SquareZeroExtension ext;
    std::vector<std::vector<Scalar>> base_images; // per B-variable
    std::vector<std::vector<Scalar>> u0;          // per A-variable
};

using Lifting = std::vector<std::vector<Scalar>>; // per A-variable, total coords

// Hom(u0^* Omega, I) element: one ideal-coordinate row per basis symbol dv.
struct HomElement {
    std::vector<std::vector<Scalar>> rows;
};

Diagnostics validate_problem(const LiftingProblem &pb);

Lifting lift_affine(const LiftingProblem &pb);
bool is_lifting(const LiftingProblem &pb, const Lifting &u);

HomElement lifting_difference(const LiftingProblem &pb, const Lifting &u, const Lifting &v);
Lifting apply_difference(const LiftingProblem &pb, const Lifting &u, const HomElement &phi);
// the Hom element annihilates every gradient row of the relative presentation
bool annihilates_gradients(const LiftingProblem &pb, const HomElement &phi);

// --- Cech data on an explicit nerve -------------------------------------

struct CechChart {
    SquareZeroExtension ext;
    std::vector<std::vector<Scalar>> base_images;
    std::vector<std::vector<Scalar>> u0;
};

struct CechPair {
    std::size_t a = 0, b = 0;
    SquareZeroExtension ext;   // overlap algebra
    ScalarMat res_a, res_b;    // restriction maps C_a -> C_ab, C_b -> C_ab (total coords)
};

struct CechTriple {
    std::size_t a = 0, b = 0, c = 0;
    SquareZeroExtension ext;
    ScalarMat from_ab, from_ac, from_bc; // restrictions from the pair overlaps
};

struct CechDatum {
    std::string name;
    AdicMorphism f; // chart structure morphism (same presentation on all charts)
    std::vector<CechChart> charts;
    std::vector<CechPair> pairs;
    std::vector<CechTriple> triples;

    const CechPair *pair(std::size_t a, std::size_t b) const;
};

Diagnostics validate_cover(const CechDatum &cov);

struct ObstructionReport {
    bool cocycle_ok = true;
    bool vanishes = false;
    std::vector<HomElement> cochain;            // indexed like pairs (or triples)
    std::vector<HomElement> primitive;          // indexed by charts (or pairs)
    std::vector<Lifting> glued;                 // corrected chart liftings (morphism case)
    std::string note;
};

// 1-cocycle obstruction for lifting a morphism chartwise; when it is a
// coboundary the chart liftings are corrected to agree on overlaps.
ObstructionReport obstruction_to_morphism_lift(const CechDatum &cov,
                                               const std::vector<Lifting> *chart_liftings = nullptr);

// coboundary decision for an explicitly given pair cochain (one HomElement per
// declared overlap); used by synthetic linear-algebra instances
ObstructionReport coboundary_probe(const CechDatum &cov, const std::vector<HomElement> &cochain);

// transition datum 1 + delta with delta an ideal-coefficient polynomial per variable
struct Transition {
    // per A-variable: monomial -> ideal coordinates in the pair overlap
    std::vector<std::map<Expo, std::vector<Scalar>>> delta;
};

struct SchemeObstructionReport {
    bool cocycle_ok = true;
    bool vanishes = false;
    bool corrected_strict = false; // corrected transitions satisfy the strict cocycle rule
    std::string note;
};

// 2-cocycle obstruction for gluing chartwise smooth liftings along the given
// transitions (which reduce to the identity modulo I).
SchemeObstructionReport obstruction_to_scheme_lift(const CechDatum &cov, const std::vector<Transition> &transitions);

struct IsomorphismReport {
    bool vanishes = false;
    std::string note;
};

// compare two chartwise lifting families of the same reduced datum
IsomorphismReport classify_lifting_isomorphisms(const CechDatum &cov, const std::vector<Lifting> &u,
                                                const std::vector<Lifting> &v);

// deterministic PRNG for the seeded perturbation properties
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed + 0x9e3779b97f4a7c15ull) {}
    std::uint64_t next();
    long next_small(); // in [-4, 4]
};

} // namespace fscheck

#endif
