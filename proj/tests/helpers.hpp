#ifndef FSCHECK_TEST_HELPERS_HPP
#define FSCHECK_TEST_HELPERS_HPP

#include "fscheck/commands.hpp"

#include <fstream>
#include <sstream>

namespace th {

using namespace fscheck;

inline Polynomial P(const PolyRingPtr &r, const std::string &s) { return dsl::parse_polynomial(s, r); }

inline std::vector<Polynomial> Ps(const PolyRingPtr &r, const std::vector<std::string> &ss) {
    std::vector<Polynomial> out;
    for (const auto &s : ss) out.push_back(P(r, s));
    return out;
}

inline PolyRingPtr QR(const std::vector<std::string> &vars) { return make_ring(Field{}, vars); }

inline Scalar q(long num, long den = 1) { return Scalar(Field{}, Rational(num, den)); }

inline std::string slurp(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open fixture " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// brute-force vector-space dimension of k[vars]/I: monomials of degree <= D
// modulo the degree-<= D slice of the ideal, stabilized over D.
// Independent of the staircase machinery (only uses polynomial arithmetic
// and Gaussian elimination).
inline long brute_force_quotient_dim(const PolyIdeal &ideal) {
    const auto &ring = ideal.ring();
    Field f = ring->field;
    auto monomials_upto = [&](std::uint32_t D) {
        std::vector<Expo> out;
        Expo cur(ring->nvars(), 0);
        std::function<void(std::size_t, std::uint32_t)> rec = [&](std::size_t i, std::uint32_t left) {
            if (i == ring->nvars()) {
                out.push_back(cur);
                return;
            }
            for (std::uint32_t v = 0; v <= left; ++v) {
                cur[i] = v;
                rec(i + 1, left - v);
            }
            cur[i] = 0;
        };
        rec(0, D);
        return out;
    };
    long prev = -1;
    for (std::uint32_t D = 2; D <= 14; ++D) {
        auto monos = monomials_upto(D);
        std::map<Expo, std::size_t> index;
        for (std::size_t i = 0; i < monos.size(); ++i) index[monos[i]] = i;
        Span span(monos.size(), f);
        for (const auto &g : ideal.generators()) {
            if (g.is_zero()) continue;
            for (const auto &m : monos) {
                Polynomial prod = Polynomial::monomial(ring, m, Scalar::one(f)) * g;
                if (prod.total_degree() > D) continue;
                std::vector<Scalar> vec(monos.size(), Scalar::zero(f));
                for (auto &[e, c] : prod.terms()) vec[index.at(e)] = c;
                span.insert(vec);
            }
        }
        long dim = static_cast<long>(monos.size()) - static_cast<long>(span.dim());
        if (dim == prev) return dim;
        prev = dim;
    }
    return prev;
}

} // namespace th

#endif
