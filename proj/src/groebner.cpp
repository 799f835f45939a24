#include "fscheck/groebner.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace fscheck {

namespace {

int cmp_degrevlex(const Expo &a, const Expo &b) {
    auto da = expo_degree(a), db = expo_degree(b);
    if (da != db) return da < db ? -1 : 1;
    for (std::size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i]) return a[i] > b[i] ? -1 : 1; // smaller in last differing slot is larger
    }
    return 0;
}

int cmp_lex(const Expo &a, const Expo &b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    return 0;
}

} // namespace

int MonomialOrder::compare(const Expo &a, const Expo &b) const {
    switch (kind) {
    case OrderKind::Degrevlex:
        return cmp_degrevlex(a, b);
    case OrderKind::Lex:
        return cmp_lex(a, b);
    case OrderKind::Block: {
        Expo a1, b1, a2, b2;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i < first_block.size() && first_block[i]) {
                a1.push_back(a[i]);
                b1.push_back(b[i]);
            } else {
                a2.push_back(a[i]);
                b2.push_back(b[i]);
            }
        }
        if (int c = cmp_degrevlex(a1, b1)) return c;
        return cmp_degrevlex(a2, b2);
    }
    }
    return 0;
}

std::string MonomialOrder::tag() const {
    switch (kind) {
    case OrderKind::Degrevlex:
        return "degrevlex";
    case OrderKind::Lex:
        return "lex";
    case OrderKind::Block:
        return "block";
    }
    return "?";
}

MonomialOrder parse_order_tag(const std::string &tag, std::size_t nvars, const std::vector<char> &z_mask) {
    if (tag == "degrevlex") return MonomialOrder::degrevlex();
    if (tag == "lex") return MonomialOrder::lex();
    if (tag == "block") {
        std::vector<char> mask = z_mask;
        mask.resize(nvars, 0);
        return MonomialOrder::block(std::move(mask));
    }
    throw std::invalid_argument("unsupported monomial order tag: " + tag);
}

const std::pair<const Expo, Scalar> &leading_term(const Polynomial &p, const MonomialOrder &ord) {
    if (p.is_zero()) throw std::invalid_argument("leading term of zero polynomial");
    auto best = p.terms().begin();
    for (auto it = std::next(best); it != p.terms().end(); ++it)
        if (ord.less(best->first, it->first)) best = it;
    return *best;
}

PolyIdeal::PolyIdeal(PolyRingPtr ring, std::vector<Polynomial> gens) : ring_(std::move(ring)), gens_(std::move(gens)) {
    for (auto &g : gens_)
        if (!same_ring(g.ring(), ring_)) throw std::invalid_argument("ideal: generator ring mismatch");
}

const std::vector<Polynomial> &PolyIdeal::groebner(const MonomialOrder &ord) const {
    if (!cache_ || !(cache_->first == ord)) cache_ = {ord, buchberger_reduced(ring_, gens_, ord)};
    return cache_->second;
}

namespace {

Polynomial make_monic(Polynomial p, const MonomialOrder &ord) {
    if (p.is_zero()) return p;
    const auto &lt = leading_term(p, ord);
    if (lt.second.is_one()) return p;
    return p * lt.second.inv();
}

Polynomial reduce_full(const Polynomial &f, const std::vector<Polynomial> &basis, const MonomialOrder &ord) {
    Polynomial h = f;
    Polynomial rem(f.ring());
    while (!h.is_zero()) {
        const auto &lt = leading_term(h, ord);
        bool divided = false;
        for (const auto &g : basis) {
            if (g.is_zero()) continue;
            const auto &gl = leading_term(g, ord);
            if (expo_divides(gl.first, lt.first)) {
                Scalar c = lt.second / gl.second;
                Polynomial t = Polynomial::monomial(f.ring(), expo_div(lt.first, gl.first), c);
                h = h - t * g;
                divided = true;
                break;
            }
        }
        if (!divided) {
            rem.add_term(lt.first, lt.second);
            h.add_term(lt.first, -lt.second);
        }
    }
    return rem;
}

struct Pair {
    std::size_t i, j;
    Expo lcm;
};

} // namespace

std::vector<Polynomial> buchberger_reduced(const PolyRingPtr &ring, std::vector<Polynomial> gens,
                                           const MonomialOrder &ord) {
    std::vector<Polynomial> basis;
    for (auto &g : gens)
        if (!g.is_zero()) basis.push_back(make_monic(g, ord));
    std::sort(basis.begin(), basis.end(), [&](const Polynomial &a, const Polynomial &b) {
        return ord.less(leading_term(a, ord).first, leading_term(b, ord).first);
    });
    basis.erase(std::unique(basis.begin(), basis.end()), basis.end());

    std::deque<Pair> pairs;
    auto push_pairs = [&](std::size_t j) {
        for (std::size_t i = 0; i < j; ++i) {
            const Expo &a = leading_term(basis[i], ord).first;
            const Expo &b = leading_term(basis[j], ord).first;
            // product criterion
            if (expo_degree(expo_gcd(a, b)) == 0) continue;
            pairs.push_back({i, j, expo_lcm(a, b)});
        }
    };
    for (std::size_t j = 0; j < basis.size(); ++j) push_pairs(j);

    while (!pairs.empty()) {
        // normal selection: smallest lcm in the order, ties by indices
        auto sel = pairs.begin();
        for (auto it = std::next(pairs.begin()); it != pairs.end(); ++it) {
            int c = ord.compare(it->lcm, sel->lcm);
            if (c < 0 || (c == 0 && std::tie(it->i, it->j) < std::tie(sel->i, sel->j))) sel = it;
        }
        Pair pr = *sel;
        pairs.erase(sel);

        const Polynomial &f = basis[pr.i];
        const Polynomial &g = basis[pr.j];
        const auto &lf = leading_term(f, ord);
        const auto &lg = leading_term(g, ord);
        Polynomial sf = Polynomial::monomial(ring, expo_div(pr.lcm, lf.first), lf.second.inv());
        Polynomial sg = Polynomial::monomial(ring, expo_div(pr.lcm, lg.first), lg.second.inv());
        Polynomial s = sf * f - sg * g;
        Polynomial h = reduce_full(s, basis, ord);
        if (!h.is_zero()) {
            basis.push_back(make_monic(h, ord));
            push_pairs(basis.size() - 1);
        }
    }

    // interreduce: drop redundant leading terms, then tail-reduce
    std::vector<Polynomial> kept;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const Expo &lt = leading_term(basis[i], ord).first;
        bool redundant = false;
        for (std::size_t j = 0; j < basis.size(); ++j) {
            if (i == j) continue;
            const Expo &lj = leading_term(basis[j], ord).first;
            if (expo_divides(lj, lt) && !(lj == lt && j > i)) {
                redundant = true;
                break;
            }
        }
        if (!redundant) kept.push_back(basis[i]);
    }
    for (std::size_t i = 0; i < kept.size(); ++i) {
        std::vector<Polynomial> others;
        for (std::size_t j = 0; j < kept.size(); ++j)
            if (j != i) others.push_back(kept[j]);
        kept[i] = make_monic(reduce_full(kept[i], others, ord), ord);
    }
    std::sort(kept.begin(), kept.end(), [&](const Polynomial &a, const Polynomial &b) {
        return ord.less(leading_term(a, ord).first, leading_term(b, ord).first);
    });
    return kept;
}

Polynomial normal_form(const Polynomial &p, const std::vector<Polynomial> &basis, const MonomialOrder &ord) {
    return reduce_full(p, basis, ord);
}

Polynomial normal_form(const Polynomial &p, const PolyIdeal &ideal, const MonomialOrder &ord) {
    if (!same_ring(p.ring(), ideal.ring())) throw std::invalid_argument("normal_form: variable mismatch");
    return reduce_full(p, ideal.groebner(ord), ord);
}

bool ideal_contains(const PolyIdeal &ideal, const Polynomial &p, const MonomialOrder &ord) {
    return normal_form(p, ideal, ord).is_zero();
}

bool ideal_subset(const PolyIdeal &small, const PolyIdeal &big, const MonomialOrder &ord) {
    for (const auto &g : small.generators())
        if (!ideal_contains(big, g, ord)) return false;
    return true;
}

bool ideal_equal(const PolyIdeal &a, const PolyIdeal &b, const MonomialOrder &ord) {
    return ideal_subset(a, b, ord) && ideal_subset(b, a, ord);
}

bool is_unit_ideal(const PolyIdeal &ideal, const MonomialOrder &ord) {
    const auto &gb = ideal.groebner(ord);
    return gb.size() == 1 && gb[0].is_constant() && !gb[0].is_zero();
}

PolyIdeal ideal_sum(const PolyIdeal &a, const PolyIdeal &b) {
    return ideal_sum(a, b.generators());
}

PolyIdeal ideal_sum(const PolyIdeal &a, const std::vector<Polynomial> &extra) {
    std::vector<Polynomial> gens = a.generators();
    gens.insert(gens.end(), extra.begin(), extra.end());
    return PolyIdeal(a.ring(), std::move(gens));
}

std::vector<Polynomial> power_generators(const PolyRingPtr &ring, const std::vector<std::size_t> &vars,
                                         std::uint32_t deg) {
    std::vector<Polynomial> out;
    if (vars.empty() || deg == 0) return out;
    // enumerate all exponent splits of `deg` over `vars`
    std::vector<std::uint32_t> split(vars.size(), 0);
    std::function<void(std::size_t, std::uint32_t)> rec = [&](std::size_t i, std::uint32_t left) {
        if (i + 1 == vars.size()) {
            split[i] = left;
            Expo m(ring->nvars(), 0);
            for (std::size_t k = 0; k < vars.size(); ++k) m[vars[k]] = split[k];
            out.push_back(Polynomial::monomial(ring, m, Scalar::one(ring->field)));
            return;
        }
        for (std::uint32_t v = 0; v <= left; ++v) {
            split[i] = v;
            rec(i + 1, left - v);
        }
    };
    rec(0, deg);
    return out;
}

int krull_dimension(const PolyIdeal &ideal, const MonomialOrder &ord) {
    const auto &gb = ideal.groebner(ord);
    if (gb.size() == 1 && gb[0].is_constant() && !gb[0].is_zero()) return -1;
    std::size_t n = ideal.ring()->nvars();
    std::vector<Expo> lts;
    for (const auto &g : gb) lts.push_back(leading_term(g, ord).first);
    int best = 0;
    for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
        int size = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1) ++size;
        if (size <= best && mask != 0) continue;
        bool independent = true;
        for (const auto &e : lts) {
            bool inside = true;
            for (std::size_t i = 0; i < n; ++i)
                if (e[i] > 0 && !(mask >> i & 1)) {
                    inside = false;
                    break;
                }
            if (inside) {
                independent = false;
                break;
            }
        }
        if (independent) best = std::max(best, size);
    }
    return best;
}

int krull_dimension(const PolyIdeal &ideal) {
    return krull_dimension(ideal, MonomialOrder::degrevlex());
}

std::optional<std::vector<Expo>> quotient_basis(const PolyIdeal &ideal) {
    MonomialOrder ord = MonomialOrder::degrevlex();
    const auto &gb = ideal.groebner(ord);
    std::size_t n = ideal.ring()->nvars();
    if (gb.size() == 1 && gb[0].is_constant() && !gb[0].is_zero()) return std::vector<Expo>{};
    std::vector<Expo> lts;
    for (const auto &g : gb) lts.push_back(leading_term(g, ord).first);
    // finite staircase iff every variable has a pure power among the leading terms
    std::vector<std::uint32_t> bound(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        bool found = false;
        for (const auto &e : lts) {
            bool pure = e[i] > 0;
            for (std::size_t j = 0; j < n && pure; ++j)
                if (j != i && e[j] > 0) pure = false;
            if (pure) {
                bound[i] = found ? std::min(bound[i], e[i]) : e[i];
                found = true;
            }
        }
        if (!found) return std::nullopt;
    }
    std::vector<Expo> basis;
    Expo cur(n, 0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == n) {
            for (const auto &e : lts)
                if (expo_divides(e, cur)) return;
            basis.push_back(cur);
            return;
        }
        for (std::uint32_t v = 0; v < bound[i]; ++v) {
            cur[i] = v;
            rec(i + 1);
        }
        cur[i] = 0;
    };
    rec(0);
    std::sort(basis.begin(), basis.end(), [&](const Expo &a, const Expo &b) { return ord.less(a, b); });
    return basis;
}

std::vector<Polynomial> eliminate(const PolyIdeal &ideal, const std::vector<char> &drop_mask,
                                  const PolyRingPtr &sub) {
    MonomialOrder ord = MonomialOrder::block(drop_mask);
    const auto &gb = ideal.groebner(ord);
    std::vector<Polynomial> out;
    for (const auto &g : gb) {
        bool keep = true;
        for (auto &[e, c] : g.terms())
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i] > 0 && drop_mask[i]) keep = false;
        if (keep) out.push_back(g.transport(sub));
    }
    return out;
}

bool in_radical(const PolyIdeal &ideal, const Polynomial &p) {
    if (p.is_zero()) return true;
    const auto &ring = ideal.ring();
    std::vector<std::string> vars = ring->vars;
    std::string aux = "_rab";
    while (ring->var_index(aux) >= 0) aux += "_";
    vars.push_back(aux);
    PolyRingPtr big = make_ring(ring->field, vars);
    std::vector<Polynomial> gens;
    for (const auto &g : ideal.generators()) gens.push_back(g.transport(big));
    Polynomial t = Polynomial::variable(big, big->nvars() - 1);
    Polynomial one = Polynomial::constant(big, Scalar::one(big->field));
    gens.push_back(one - t * p.transport(big));
    PolyIdeal witness(big, std::move(gens));
    return is_unit_ideal(witness, MonomialOrder::degrevlex());
}

} // namespace fscheck
