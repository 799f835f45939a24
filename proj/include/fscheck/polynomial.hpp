#ifndef FSCHECK_POLYNOMIAL_HPP
#define FSCHECK_POLYNOMIAL_HPP

#include "fscheck/scalar.hpp"

#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace fscheck {

// Exponent vector; its length always matches the ring arity.
using Expo = std::vector<std::uint32_t>;

std::uint64_t expo_degree(const Expo &e);
bool expo_divides(const Expo &a, const Expo &b); // a | b
Expo expo_mul(const Expo &a, const Expo &b);
Expo expo_div(const Expo &b, const Expo &a); // b / a, requires a | b
Expo expo_lcm(const Expo &a, const Expo &b);
Expo expo_gcd(const Expo &a, const Expo &b);

struct PolyRing {
    Field field;
    std::vector<std::string> vars;

    std::size_t nvars() const { return vars.size(); }
    int var_index(const std::string &name) const; // -1 when absent
};

using PolyRingPtr = std::shared_ptr<const PolyRing>;

PolyRingPtr make_ring(Field f, std::vector<std::string> vars);
bool same_ring(const PolyRingPtr &a, const PolyRingPtr &b);

// Sparse multivariate polynomial in canonical form: no zero coefficients,
// terms keyed by exponent vector in a fixed container order.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(PolyRingPtr ring) : ring_(std::move(ring)) {}

    static Polynomial zero(PolyRingPtr ring) { return Polynomial(std::move(ring)); }
    static Polynomial constant(PolyRingPtr ring, const Scalar &c);
    static Polynomial variable(PolyRingPtr ring, std::size_t i, std::uint32_t e = 1);
    static Polynomial monomial(PolyRingPtr ring, Expo e, const Scalar &c);

    const PolyRingPtr &ring() const { return ring_; }
    const std::map<Expo, Scalar> &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    std::optional<Scalar> constant_value() const; // set when constant (zero included)
    std::uint64_t total_degree() const;           // 0 for the zero polynomial
    std::uint64_t degree_in(std::size_t var) const;

    void add_term(const Expo &e, const Scalar &c);

    Polynomial operator-() const;
    Polynomial operator+(const Polynomial &o) const;
    Polynomial operator-(const Polynomial &o) const;
    Polynomial operator*(const Polynomial &o) const;
    Polynomial operator*(const Scalar &c) const;
    Polynomial pow(std::uint32_t n) const;

    bool operator==(const Polynomial &o) const;
    bool operator!=(const Polynomial &o) const { return !(*this == o); }

    Polynomial derivative(std::size_t var) const;
    Scalar eval(const std::vector<Scalar> &point) const;
    // Substitute images[i] for variable i; images live in `target`.
    Polynomial substitute(const PolyRingPtr &target, const std::vector<Polynomial> &images) const;
    // Re-express in `target`, matching variables by name (all must exist there).
    Polynomial transport(const PolyRingPtr &target) const;

    std::string str() const; // deterministic: canonical term order, descending

private:
    void check_ring(const Polynomial &o) const;
    PolyRingPtr ring_;
    std::map<Expo, Scalar> terms_;
};

} // namespace fscheck

#endif
