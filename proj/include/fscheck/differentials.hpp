#ifndef FSCHECK_DIFFERENTIALS_HPP
#define FSCHECK_DIFFERENTIALS_HPP

#include "fscheck/findim.hpp"
#include "fscheck/morphism.hpp"

namespace fscheck {

// Presentation of the completed module of differentials of f : B -> A.
// Basis symbols are the differentials of A's own variables; one relation row
// per generator of I_A (its gradient) and one per B-variable b (the gradient
// of d(b - image(b)), i.e. minus the gradient of the image). Entries live in
// A's ring, reduced modulo I_A.
struct DifferentialPresentation {
    AdicMorphism f;
    std::vector<std::string> basis;      // "d<var>" per A-variable
    std::vector<std::string> row_labels; // relation generator or source variable
    PolyMat rows;                        // |labels| x |basis|
};

DifferentialPresentation omega_presentation(const AdicMorphism &f);

ScalarMat jacobian_at(const DifferentialPresentation &om, const RationalPoint &x);
ScalarMat jacobian_at(const AdicMorphism &f, const RationalPoint &x);

enum class Ramification { Unramified, Ramified };

// Fitt_0(Omega) = A detected through the complete-ring unit test: the maximal
// minors generate the unit ideal modulo I_A + (Z_A).
Ramification fitting_unramified_test(const AdicMorphism &f);

// generators of Fitt_i(M) for the presentation `rows` of a module on `nsym`
// symbols: the (nsym - i)-minors
std::vector<Polynomial> fitting_generators(const PolyMat &rows, std::size_t nsym, std::size_t i,
                                           const PolyRingPtr &ring);

struct SequenceStage {
    std::uint32_t level = 0;
    long dim_left = 0, dim_middle = 0, dim_right = 0;
    long rank_first = 0, rank_second = 0;
    bool composite_zero = true;
    bool second_surjective = true;
    bool exact_middle = true;
};

struct FundamentalSequenceReport {
    std::vector<SequenceStage> stages;
    bool exact = true;
    std::string failure; // empty when exact
};

// First fundamental sequence f*(Omega_{B/C}) -> Omega_{A/C} -> Omega_{A/B} -> 0
// for C -g-> B -f-> A, checked by rank counting at bi-truncation levels
// n = 0..levels on the Z-block and total degree `tdeg` on the T-block.
FundamentalSequenceReport fundamental_sequence_first(const AdicMorphism &f, const AdicMorphism &g,
                                                     std::uint32_t levels, std::uint32_t tdeg);

// Second fundamental sequence I'/I'^2 -> Omega_{A/B} (x) A' -> Omega_{A'/B} -> 0
// for the closed immersion A ->> A' = A/I'.
FundamentalSequenceReport fundamental_sequence_second(const AdicMorphism &f, const std::vector<Polynomial> &iprime,
                                                      std::uint32_t levels, std::uint32_t tdeg);

struct OracleEntry {
    std::size_t fitt_index = 0;
    bool equal_direct = false;   // Fitt_i(ordinary) == Fitt_i(completed (x) A_n)
    bool equal_adjusted = false; // equality after adding the Z^{n+1} gradient rows
};

struct TruncationOracleReport {
    std::uint32_t level = 0;
    bool discrete = false;           // target has no Z-block
    std::vector<OracleEntry> table;
    bool agrees_directly = true;     // all equal_direct
    bool agrees_adjusted = true;     // all equal_adjusted
    bool expected_divergence = false; // Z-case with direct inequality but adjusted equality
};

// Compares the ordinary Kaehler presentation of B_n -> A_n (computed from the
// truncated algebras, including the Z^{n+1} power generators) against the
// completed presentation tensored down, via Fitting-ideal equality in A_n.
TruncationOracleReport truncation_oracle(const AdicMorphism &f, std::uint32_t level);

} // namespace fscheck

#endif
