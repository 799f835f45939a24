#include "fscheck/scalar.hpp"

namespace fscheck {

std::string field_to_string(const Field &f) {
    if (f.is_rational()) return "Q";
    return "Fp(" + std::to_string(f.p) + ")";
}

namespace {

Rational reduce_mod(const Rational &v, std::uint32_t p) {
    // v must have denominator invertible mod p; returns representative in [0, p).
    BigInt num = numerator(v);
    BigInt den = denominator(v);
    BigInt mod(p);
    BigInt n = num % mod;
    if (n < 0) n += mod;
    BigInt d = den % mod;
    if (d < 0) d += mod;
    if (d == 0) throw std::domain_error("scalar: denominator not invertible mod p");
    // modular inverse by Fermat (p prime)
    BigInt inv = 1, base = d, e = p - 2;
    while (e > 0) {
        if (e % 2 == 1) inv = inv * base % mod;
        base = base * base % mod;
        e /= 2;
    }
    return Rational(n * inv % mod);
}

} // namespace

Scalar::Scalar(Field f, Rational v) : field_(f), value_(std::move(v)) {
    if (!field_.is_rational()) value_ = reduce_mod(value_, field_.p);
}

void Scalar::check_same(const Scalar &o) const {
    if (!(field_ == o.field_)) throw std::invalid_argument("scalar: mixed coefficient fields");
}

Scalar Scalar::operator-() const { return Scalar(field_, -value_); }

Scalar Scalar::operator+(const Scalar &o) const {
    check_same(o);
    return Scalar(field_, value_ + o.value_);
}

Scalar Scalar::operator-(const Scalar &o) const {
    check_same(o);
    return Scalar(field_, value_ - o.value_);
}

Scalar Scalar::operator*(const Scalar &o) const {
    check_same(o);
    return Scalar(field_, value_ * o.value_);
}

Scalar Scalar::inv() const {
    if (is_zero()) throw std::domain_error("scalar: division by zero");
    if (field_.is_rational()) return Scalar(field_, Rational(1) / value_);
    return Scalar(field_, Rational(denominator(value_), numerator(value_)));
}

Scalar Scalar::operator/(const Scalar &o) const {
    check_same(o);
    return *this * o.inv();
}

std::string Scalar::str() const {
    if (denominator(value_) == 1) return numerator(value_).str();
    return numerator(value_).str() + "/" + denominator(value_).str();
}

} // namespace fscheck
