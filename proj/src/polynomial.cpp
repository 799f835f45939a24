#include "fscheck/polynomial.hpp"

#include <algorithm>
#include <sstream>

namespace fscheck {

std::uint64_t expo_degree(const Expo &e) {
    std::uint64_t d = 0;
    for (auto x : e) d += x;
    return d;
}

bool expo_divides(const Expo &a, const Expo &b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

Expo expo_mul(const Expo &a, const Expo &b) {
    Expo r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Expo expo_div(const Expo &b, const Expo &a) {
    Expo r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = b[i] - a[i];
    return r;
}

Expo expo_lcm(const Expo &a, const Expo &b) {
    Expo r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
    return r;
}

Expo expo_gcd(const Expo &a, const Expo &b) {
    Expo r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::min(a[i], b[i]);
    return r;
}

int PolyRing::var_index(const std::string &name) const {
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (vars[i] == name) return static_cast<int>(i);
    return -1;
}

PolyRingPtr make_ring(Field f, std::vector<std::string> vars) {
    auto r = std::make_shared<PolyRing>();
    r->field = f;
    r->vars = std::move(vars);
    return r;
}

bool same_ring(const PolyRingPtr &a, const PolyRingPtr &b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return a->field == b->field && a->vars == b->vars;
}

Polynomial Polynomial::constant(PolyRingPtr ring, const Scalar &c) {
    Polynomial p(std::move(ring));
    if (!c.is_zero()) p.terms_.emplace(Expo(p.ring_->nvars(), 0), c);
    return p;
}

Polynomial Polynomial::variable(PolyRingPtr ring, std::size_t i, std::uint32_t e) {
    Polynomial p(std::move(ring));
    Expo ex(p.ring_->nvars(), 0);
    ex.at(i) = e;
    p.terms_.emplace(std::move(ex), Scalar::one(p.ring_->field));
    return p;
}

Polynomial Polynomial::monomial(PolyRingPtr ring, Expo e, const Scalar &c) {
    Polynomial p(std::move(ring));
    if (!c.is_zero()) p.terms_.emplace(std::move(e), c);
    return p;
}

bool Polynomial::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && expo_degree(terms_.begin()->first) == 0);
}

std::optional<Scalar> Polynomial::constant_value() const {
    if (terms_.empty()) return Scalar::zero(ring_->field);
    if (is_constant()) return terms_.begin()->second;
    return std::nullopt;
}

std::uint64_t Polynomial::total_degree() const {
    std::uint64_t d = 0;
    for (auto &[e, c] : terms_) d = std::max(d, expo_degree(e));
    return d;
}

std::uint64_t Polynomial::degree_in(std::size_t var) const {
    std::uint64_t d = 0;
    for (auto &[e, c] : terms_) d = std::max<std::uint64_t>(d, e[var]);
    return d;
}

void Polynomial::add_term(const Expo &e, const Scalar &c) {
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

void Polynomial::check_ring(const Polynomial &o) const {
    if (!same_ring(ring_, o.ring_)) throw std::invalid_argument("polynomial: ring mismatch");
}

Polynomial Polynomial::operator-() const {
    Polynomial r(ring_);
    for (auto &[e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

Polynomial Polynomial::operator+(const Polynomial &o) const {
    check_ring(o);
    Polynomial r = *this;
    for (auto &[e, c] : o.terms_) r.add_term(e, c);
    return r;
}

Polynomial Polynomial::operator-(const Polynomial &o) const {
    check_ring(o);
    Polynomial r = *this;
    for (auto &[e, c] : o.terms_) r.add_term(e, -c);
    return r;
}

Polynomial Polynomial::operator*(const Polynomial &o) const {
    check_ring(o);
    Polynomial r(ring_);
    for (auto &[ea, ca] : terms_)
        for (auto &[eb, cb] : o.terms_) r.add_term(expo_mul(ea, eb), ca * cb);
    return r;
}

Polynomial Polynomial::operator*(const Scalar &c) const {
    Polynomial r(ring_);
    if (c.is_zero()) return r;
    for (auto &[e, k] : terms_) r.terms_.emplace(e, k * c);
    return r;
}

Polynomial Polynomial::pow(std::uint32_t n) const {
    Polynomial r = Polynomial::constant(ring_, Scalar::one(ring_->field));
    for (std::uint32_t i = 0; i < n; ++i) r = r * *this;
    return r;
}

bool Polynomial::operator==(const Polynomial &o) const {
    return same_ring(ring_, o.ring_) && terms_ == o.terms_;
}

Polynomial Polynomial::derivative(std::size_t var) const {
    Polynomial r(ring_);
    for (auto &[e, c] : terms_) {
        if (e[var] == 0) continue;
        Expo d = e;
        d[var] -= 1;
        r.add_term(d, c * Scalar::from_int(ring_->field, static_cast<long>(e[var])));
    }
    return r;
}

Scalar Polynomial::eval(const std::vector<Scalar> &point) const {
    if (point.size() != ring_->nvars()) throw std::invalid_argument("polynomial: evaluation arity mismatch");
    Scalar acc = Scalar::zero(ring_->field);
    for (auto &[e, c] : terms_) {
        Scalar t = c;
        for (std::size_t i = 0; i < e.size(); ++i)
            for (std::uint32_t k = 0; k < e[i]; ++k) t *= point[i];
        acc += t;
    }
    return acc;
}

Polynomial Polynomial::substitute(const PolyRingPtr &target, const std::vector<Polynomial> &images) const {
    if (images.size() != ring_->nvars()) throw std::invalid_argument("polynomial: substitution arity mismatch");
    Polynomial acc = Polynomial::zero(target);
    for (auto &[e, c] : terms_) {
        Polynomial t = Polynomial::constant(target, c);
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0) t = t * images[i].pow(e[i]);
        acc = acc + t;
    }
    return acc;
}

Polynomial Polynomial::transport(const PolyRingPtr &target) const {
    std::vector<char> used(ring_->nvars(), 0);
    for (auto &[e, c] : terms_)
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0) used[i] = 1;
    std::vector<int> where(ring_->nvars(), -1);
    for (std::size_t i = 0; i < ring_->nvars(); ++i) {
        where[i] = target->var_index(ring_->vars[i]);
        if (where[i] < 0 && used[i])
            throw std::invalid_argument("polynomial: variable missing in target ring: " + ring_->vars[i]);
    }
    Polynomial r(target);
    for (auto &[e, c] : terms_) {
        Expo t(target->nvars(), 0);
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0) t[static_cast<std::size_t>(where[i])] = e[i];
        r.add_term(t, Scalar(target->field, c.value()));
    }
    return r;
}

std::string Polynomial::str() const {
    if (terms_.empty()) return "0";
    // print high-degree first: iterate the canonical map in reverse, then by map order
    std::vector<const std::pair<const Expo, Scalar> *> ts;
    for (auto &t : terms_) ts.push_back(&t);
    std::sort(ts.begin(), ts.end(), [](auto *a, auto *b) {
        auto da = expo_degree(a->first), db = expo_degree(b->first);
        if (da != db) return da > db;
        return a->first > b->first;
    });
    std::ostringstream out;
    bool first = true;
    for (auto *t : ts) {
        const auto &[e, c] = *t;
        Scalar cc = c;
        bool neg = false;
        if (ring_->field.is_rational() && c.value() < 0) {
            neg = true;
            cc = -c;
        }
        if (first) {
            if (neg) out << "-";
            first = false;
        } else {
            out << (neg ? " - " : " + ");
        }
        std::string mono;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += ring_->vars[i];
            if (e[i] > 1) mono += "^" + std::to_string(e[i]);
        }
        if (mono.empty()) {
            out << cc.str();
        } else if (cc.is_one()) {
            out << mono;
        } else {
            out << cc.str() << "*" << mono;
        }
    }
    return out.str();
}

} // namespace fscheck
