#ifndef FSCHECK_GROEBNER_HPP
#define FSCHECK_GROEBNER_HPP

#include "fscheck/polynomial.hpp"

#include <optional>

namespace fscheck {

enum class OrderKind { Degrevlex, Lex, Block };

// Monomial order. Block orders compare the first block (degrevlex) before the
// rest, so they eliminate the first-block variables.
struct MonomialOrder {
    OrderKind kind = OrderKind::Degrevlex;
    std::vector<char> first_block; // used by Block; size = ring arity

    static MonomialOrder degrevlex() { return {OrderKind::Degrevlex, {}}; }
    static MonomialOrder lex() { return {OrderKind::Lex, {}}; }
    static MonomialOrder block(std::vector<char> first) { return {OrderKind::Block, std::move(first)}; }

    // three-way compare: <0, 0, >0 for a < b, a == b, a > b
    int compare(const Expo &a, const Expo &b) const;
    bool less(const Expo &a, const Expo &b) const { return compare(a, b) < 0; }

    std::string tag() const;
    bool operator==(const MonomialOrder &o) const { return kind == o.kind && first_block == o.first_block; }
};

MonomialOrder parse_order_tag(const std::string &tag, std::size_t nvars, const std::vector<char> &z_mask);

const std::pair<const Expo, Scalar> &leading_term(const Polynomial &p, const MonomialOrder &ord);

// Finitely generated ideal with a write-once cache of one reduced basis.
class PolyIdeal {
public:
    PolyIdeal() = default;
    PolyIdeal(PolyRingPtr ring, std::vector<Polynomial> gens);

    const PolyRingPtr &ring() const { return ring_; }
    const std::vector<Polynomial> &generators() const { return gens_; }

    const std::vector<Polynomial> &groebner(const MonomialOrder &ord) const;

private:
    PolyRingPtr ring_;
    std::vector<Polynomial> gens_;
    mutable std::optional<std::pair<MonomialOrder, std::vector<Polynomial>>> cache_;
};

std::vector<Polynomial> buchberger_reduced(const PolyRingPtr &ring, std::vector<Polynomial> gens,
                                           const MonomialOrder &ord);

Polynomial normal_form(const Polynomial &p, const std::vector<Polynomial> &basis, const MonomialOrder &ord);
Polynomial normal_form(const Polynomial &p, const PolyIdeal &ideal, const MonomialOrder &ord);

bool ideal_contains(const PolyIdeal &ideal, const Polynomial &p, const MonomialOrder &ord);
bool ideal_subset(const PolyIdeal &small, const PolyIdeal &big, const MonomialOrder &ord);
bool ideal_equal(const PolyIdeal &a, const PolyIdeal &b, const MonomialOrder &ord);
bool is_unit_ideal(const PolyIdeal &ideal, const MonomialOrder &ord);

PolyIdeal ideal_sum(const PolyIdeal &a, const PolyIdeal &b);
PolyIdeal ideal_sum(const PolyIdeal &a, const std::vector<Polynomial> &extra);

// All monomials of degree exactly `deg` in the selected variables.
std::vector<Polynomial> power_generators(const PolyRingPtr &ring, const std::vector<std::size_t> &vars,
                                         std::uint32_t deg);

// Krull dimension of ring/ideal via independent variable sets of the initial
// ideal; -1 for the unit ideal.
int krull_dimension(const PolyIdeal &ideal, const MonomialOrder &ord);
int krull_dimension(const PolyIdeal &ideal);

// Monomial basis of the quotient when the staircase is finite; nullopt = infinite.
std::optional<std::vector<Expo>> quotient_basis(const PolyIdeal &ideal);

// Elimination ideal: generators of (ideal intersected with k[kept vars]),
// expressed in `sub`.
std::vector<Polynomial> eliminate(const PolyIdeal &ideal, const std::vector<char> &drop_mask,
                                  const PolyRingPtr &sub);

// Radical membership: p in rad(ideal), decided with an auxiliary variable.
bool in_radical(const PolyIdeal &ideal, const Polynomial &p);

} // namespace fscheck

#endif
