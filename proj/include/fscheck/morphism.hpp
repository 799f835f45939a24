#ifndef FSCHECK_MORPHISM_HPP
#define FSCHECK_MORPHISM_HPP

#include "fscheck/presentation.hpp"

namespace fscheck {

// Continuous k-algebra map B -> A given by polynomial images of B's
// variables; geometrically Spf(A) -> Spf(B).
struct AdicMorphism {
    std::string name;
    PresentationPtr source; // B
    PresentationPtr target; // A
    std::vector<Polynomial> images; // indexed by source ring vars, in target ring
};

Diagnostics validate_morphism(const AdicMorphism &f);

AdicMorphism identity_morphism(const PresentationPtr &p);
// h = f . g : C -> A for g : C -> B, f : B -> A
AdicMorphism compose(const AdicMorphism &f, const AdicMorphism &g);

// image point y = f(x) on the source presentation, for x on the target
RationalPoint image_point(const AdicMorphism &f, const RationalPoint &x);

enum class Trilean { Yes, No, Indeterminate };

struct AdicVerdict {
    Trilean value = Trilean::Indeterminate;
    int bound = 0;                 // exponent bound used
    std::vector<int> witnesses;    // per z-variable: smallest power found, -1 when none
    std::string note;
};

// Adic iff every Z-variable of the target has a power inside
// <images of source Z-vars> + I_target. Powers are searched up to
// `exponent_bound`; failures are settled by a radical-membership test.
AdicVerdict is_adic(const AdicMorphism &f, int exponent_bound = 8);

// Fiber of f at the rational point y on the source: target relations plus
// (image(v) - y(v)) for every source variable.
PresentationPtr fiber(const AdicMorphism &f, const RationalPoint &y);

struct Completion {
    PresentationPtr completed;
    AdicMorphism kappa; // P -> P^ canonical map
};

// Completion of P along V(center): adjoin one Z-variable per center
// generator g with relation (z_g - g).
Completion completion_along(const PresentationPtr &p, const std::vector<Polynomial> &center);

struct QuasiCoveringProbe {
    enum class Kind { QuasiCovering, NotQuasiCovering, Indeterminate } kind = Kind::Indeterminate;
    int bound = 0;                  // depth used
    long fiber_dimension = -1;      // k-dimension certificate on QuasiCovering
    std::vector<long> table;        // d_n = dim_k of the n-truncated fiber, -1 when infinite
    std::string note;
};

QuasiCoveringProbe quasi_covering_probe(const AdicMorphism &f, const RationalPoint &x, int depth = 6);

} // namespace fscheck

#endif
