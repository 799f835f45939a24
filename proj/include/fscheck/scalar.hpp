#ifndef FSCHECK_SCALAR_HPP
#define FSCHECK_SCALAR_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace fscheck {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Coefficient field: the rationals (p == 0) or a prime field F_p, p < 2^31.
struct Field {
    std::uint32_t p = 0;

    bool is_rational() const { return p == 0; }
    friend bool operator==(const Field &, const Field &) = default;
};

std::string field_to_string(const Field &f);

// Exact field element. Arithmetic never leaves the declared field and
// division by zero throws instead of producing a poisoned value.
class Scalar {
public:
    Scalar() = default;
    explicit Scalar(Field f) : field_(f) {}
    Scalar(Field f, Rational v);

    static Scalar zero(Field f) { return Scalar(f); }
    static Scalar one(Field f) { return Scalar(f, Rational(1)); }
    static Scalar from_int(Field f, long v) { return Scalar(f, Rational(v)); }

    const Field &field() const { return field_; }
    const Rational &value() const { return value_; }

    bool is_zero() const { return value_ == 0; }
    bool is_one() const { return value_ == 1; }

    Scalar operator-() const;
    Scalar operator+(const Scalar &o) const;
    Scalar operator-(const Scalar &o) const;
    Scalar operator*(const Scalar &o) const;
    Scalar operator/(const Scalar &o) const;
    Scalar inv() const;

    Scalar &operator+=(const Scalar &o) { return *this = *this + o; }
    Scalar &operator-=(const Scalar &o) { return *this = *this - o; }
    Scalar &operator*=(const Scalar &o) { return *this = *this * o; }

    bool operator==(const Scalar &o) const { return field_ == o.field_ && value_ == o.value_; }
    bool operator!=(const Scalar &o) const { return !(*this == o); }

    // Canonical text form: "p/q" for rationals with q != 1, else "p".
    std::string str() const;

private:
    void check_same(const Scalar &o) const;
    Field field_{};
    Rational value_{0};
};

} // namespace fscheck

#endif
