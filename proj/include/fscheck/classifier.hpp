#ifndef FSCHECK_CLASSIFIER_HPP
#define FSCHECK_CLASSIFIER_HPP

#include "fscheck/differentials.hpp"

namespace fscheck {

enum class Verdict { Yes, No, Indeterminate };

std::string verdict_str(Verdict v);

struct SmoothCertificate {
    std::vector<std::size_t> generator_subset; // rows of the relative presentation
    std::vector<std::size_t> minor_columns;    // columns of an invertible minor at the point
    bool global_equality = false;
};

struct ClassificationReport {
    std::string property;
    Verdict verdict = Verdict::Indeterminate;
    std::optional<int> relative_dimension;
    std::optional<SmoothCertificate> cert;
    std::vector<std::string> notes;   // certificate / witness / reason lines
    std::vector<Polynomial> center;   // completion morphism: recovered center (source ring)
    int bound = 0;                    // level / depth bound used where relevant
};

// Relative model of f : B -> A over the big polynomial ring k[B-vars', A-vars]
// with B-variables renamed when they clash; ambient relations I_B, relative
// generators I_A followed by one (b' - image(b)) per B-variable.
struct RelativeModel {
    PolyRingPtr big;
    std::vector<Polynomial> ambient;
    std::vector<Polynomial> rel_gens; // ordering matches the omega presentation rows
    std::vector<std::size_t> a_cols;  // column index in `big` per A-variable
    std::vector<std::size_t> b_cols;  // column index per B-variable
};

RelativeModel relative_model(const AdicMorphism &f);

ClassificationReport classify_unramified_at(const AdicMorphism &f, const RationalPoint &x);
ClassificationReport classify_smooth_at(const AdicMorphism &f, const RationalPoint &x, int hilbert_depth = 4);
ClassificationReport classify_etale_at(const AdicMorphism &f, const RationalPoint &x, int depth = 6);

ClassificationReport detect_pseudo_closed_immersion(const AdicMorphism &f, int levels = 5);
ClassificationReport detect_completion_morphism(const AdicMorphism &f, int levels = 5);

struct SmoothFactorization {
    AdicMorphism first_leg;  // etale g : B{T_1..T_n} -> A (completion morphism in the tppall form)
    AdicMorphism second_leg; // projection B -> B{T_1..T_n}
    bool composes = false;          // legs compose to f modulo I_A
    bool first_leg_unramified = false;
    bool tppall_form = false;       // first leg certified as a completion morphism
    std::vector<Polynomial> completion_center;
    std::vector<std::string> notes;
};

SmoothFactorization factor_smooth(const AdicMorphism &f, const RationalPoint &x);

struct EtaleLifting {
    AdicMorphism lifting;        // A -> C
    bool unique = true;          // layer corrections had zero nullspace at every level
    std::uint32_t levels = 0;
};

// Unique lifting along a (formally) etale f : B -> A: given g : B -> C and a
// level-0 map h0 : A -> C_0, produce l : A -> C with l|0 = h0 and l o f = g,
// by solving the relative Jacobian layer by layer.
EtaleLifting lift_along_etale(const AdicMorphism &f, const AdicMorphism &g,
                              const std::vector<Polynomial> &h0_images, std::uint32_t levels);

struct FlatnessProbe {
    enum class Kind { Flat, NotFlat, Indeterminate } kind = Kind::Indeterminate;
    std::uint32_t level = 0;
    long tor_dimension = -1;
    std::string note;
};

// Local flatness criterion on Artinian truncations: f_0 flat plus
// Tor_1^{B_n}(A_n, B_0) = 0.
FlatnessProbe flatness_probe(const AdicMorphism &f, std::uint32_t level);

} // namespace fscheck

#endif
