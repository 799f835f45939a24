#include "fscheck/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace fscheck::dsl {

std::string ParseError::str() const {
    std::ostringstream out;
    out << kind << " error at " << line << ":" << col << ": " << message;
    if (!expected.empty()) out << " (expected " << expected << ")";
    return out.str();
}

namespace {

struct Token {
    enum class Kind { Ident, Int, Punct, End } kind = Kind::End;
    std::string text;
    int line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string &src) : src_(src) { advance(); }

    const Token &peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '#') { // comment to end of line
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
                continue;
            }
            if (c == '\n') {
                ++line_;
                col_ = 1;
                ++pos_;
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++col_;
                ++pos_;
                continue;
            }
            break;
        }
        tok_ = Token{};
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= src_.size()) {
            tok_.kind = Token::Kind::End;
            return;
        }
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string s;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' || src_[pos_] == '\'')) {
                s += src_[pos_++];
                ++col_;
            }
            tok_.kind = Token::Kind::Ident;
            tok_.text = s;
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string s;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                s += src_[pos_++];
                ++col_;
            }
            tok_.kind = Token::Kind::Int;
            tok_.text = s;
            return;
        }
        auto two = src_.substr(pos_, 2);
        auto three = src_.substr(pos_, 3);
        tok_.kind = Token::Kind::Punct;
        if (three == "|->") {
            tok_.text = three;
            pos_ += 3;
            col_ += 3;
            return;
        }
        if (two == "->" || two == "[[" || two == "]]") {
            tok_.text = two;
            pos_ += 2;
            col_ += 2;
            return;
        }
        tok_.text = std::string(1, c);
        ++pos_;
        ++col_;
    }

    const std::string &src_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

[[noreturn]] void fail(const Token &t, const std::string &msg, const std::string &expected = "",
                       const std::string &kind = "syntactic") {
    throw ParseError{t.line, t.col, msg, expected, kind};
}

class Parser {
public:
    explicit Parser(const std::string &src) : lex_(src) {}

    Workspace parse_workspace() {
        Workspace ws;
        while (lex_.peek().kind != Token::Kind::End) {
            Token head = lex_.take();
            if (head.kind != Token::Kind::Ident) fail(head, "statement keyword expected", "ring/map/point/extension/cover");
            if (head.text == "ring") parse_ring(ws);
            else if (head.text == "map") parse_map(ws);
            else if (head.text == "point") parse_point(ws);
            else if (head.text == "extension") parse_extension(ws);
            else if (head.text == "cover") parse_cover(ws);
            else fail(head, "unknown statement '" + head.text + "'", "ring/map/point/extension/cover");
        }
        return ws;
    }

    // fragment entry points -------------------------------------------------
    Polynomial parse_poly_fragment(const PolyRingPtr &ring) {
        Polynomial p = poly_expr(ring);
        expect_end();
        return p;
    }

    std::vector<std::pair<std::string, Polynomial>> parse_map_block_fragment(const PolyRingPtr &ring) {
        auto out = map_block(ring);
        expect_end();
        return out;
    }

    std::vector<Polynomial> parse_poly_list_fragment(const PolyRingPtr &ring) {
        expect_punct("(");
        std::vector<Polynomial> out;
        if (!try_punct(")")) {
            out.push_back(poly_expr(ring));
            while (try_punct(",")) out.push_back(poly_expr(ring));
            expect_punct(")");
        }
        expect_end();
        return out;
    }

private:
    Lexer lex_;

    void expect_end() {
        if (lex_.peek().kind != Token::Kind::End) fail(lex_.peek(), "trailing input");
    }

    Token expect_ident(const std::string &what = "identifier") {
        Token t = lex_.take();
        if (t.kind != Token::Kind::Ident) fail(t, "identifier expected", what);
        return t;
    }

    Token expect_int() {
        Token t = lex_.take();
        if (t.kind != Token::Kind::Int) fail(t, "integer expected", "integer");
        return t;
    }

    void expect_punct(const std::string &p) {
        Token t = lex_.take();
        if (t.kind != Token::Kind::Punct || t.text != p) fail(t, "unexpected token '" + t.text + "'", "'" + p + "'");
    }

    bool try_punct(const std::string &p) {
        if (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == p) {
            lex_.take();
            return true;
        }
        return false;
    }

    bool try_keyword(const std::string &k) {
        if (lex_.peek().kind == Token::Kind::Ident && lex_.peek().text == k) {
            lex_.take();
            return true;
        }
        return false;
    }

    Rational rational_literal() {
        bool neg = try_punct("-");
        Token n = expect_int();
        Rational v(BigInt(n.text));
        if (try_punct("/")) {
            Token d = expect_int();
            v /= Rational(BigInt(d.text));
        }
        return neg ? -v : v;
    }

    // polynomial expressions ------------------------------------------------
    Polynomial poly_expr(const PolyRingPtr &ring) {
        Polynomial acc = poly_term(ring, try_punct("-"));
        for (;;) {
            if (try_punct("+")) acc = acc + poly_term(ring, false);
            else if (try_punct("-")) acc = acc + poly_term(ring, true);
            else return acc;
        }
    }

    Polynomial poly_term(const PolyRingPtr &ring, bool neg) {
        Polynomial acc = poly_factor(ring);
        while (try_punct("*")) acc = acc * poly_factor(ring);
        if (neg) acc = -acc;
        return acc;
    }

    Polynomial poly_factor(const PolyRingPtr &ring) {
        Polynomial base = poly_base(ring);
        if (try_punct("^")) {
            Token e = expect_int();
            base = base.pow(static_cast<std::uint32_t>(std::stoul(e.text)));
        }
        return base;
    }

    Polynomial poly_base(const PolyRingPtr &ring) {
        Token t = lex_.peek();
        if (t.kind == Token::Kind::Punct && t.text == "(") {
            lex_.take();
            Polynomial p = poly_expr(ring);
            expect_punct(")");
            return p;
        }
        if (t.kind == Token::Kind::Int) {
            lex_.take();
            Rational v(BigInt(t.text));
            if (try_punct("/")) {
                Token d = expect_int();
                v /= Rational(BigInt(d.text));
            }
            return Polynomial::constant(ring, Scalar(ring->field, v));
        }
        if (t.kind == Token::Kind::Ident) {
            lex_.take();
            int i = ring->var_index(t.text);
            if (i < 0) fail(t, "unresolved: " + t.text, "variable", "semantic");
            return Polynomial::variable(ring, static_cast<std::size_t>(i));
        }
        fail(t, "polynomial expected");
    }

    std::vector<std::pair<std::string, Polynomial>> map_block(const PolyRingPtr &ring) {
        expect_punct("{");
        std::vector<std::pair<std::string, Polynomial>> out;
        if (!try_punct("}")) {
            do {
                Token v = expect_ident("variable");
                expect_punct("|->");
                out.emplace_back(v.text, poly_expr(ring));
            } while (try_punct(","));
            expect_punct("}");
        }
        return out;
    }

    // statements ------------------------------------------------------------
    void parse_ring(Workspace &ws) {
        Token name = expect_ident("ring name");
        if (ws.has(name.text)) fail(name, "duplicate binding '" + name.text + "'", "", "semantic");
        expect_punct("=");
        Token fieldTok = expect_ident("field");
        Field field;
        if (fieldTok.text == "Q") {
            field.p = 0;
        } else if (fieldTok.text == "Fp") {
            expect_punct("(");
            Token p = expect_int();
            field.p = static_cast<std::uint32_t>(std::stoul(p.text));
            expect_punct(")");
        } else {
            fail(fieldTok, "unknown field '" + fieldTok.text + "'", "Q or Fp(prime)");
        }
        std::vector<std::string> t_vars, z_vars;
        if (try_punct("{")) {
            if (!try_punct("}")) {
                do t_vars.push_back(expect_ident("T variable").text);
                while (try_punct(","));
                expect_punct("}");
            }
        }
        if (try_punct("[[")) {
            if (!try_punct("]]")) {
                do z_vars.push_back(expect_ident("Z variable").text);
                while (try_punct(","));
                expect_punct("]]");
            }
        }
        std::vector<std::string> vars = t_vars;
        vars.insert(vars.end(), z_vars.begin(), z_vars.end());
        {
            auto sorted = vars;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                fail(name, "name clash among ring variables", "", "semantic");
        }
        PolyRingPtr ring = make_ring(field, vars);
        std::vector<Polynomial> rels;
        if (try_punct("/")) {
            expect_punct("(");
            if (!try_punct(")")) {
                rels.push_back(poly_expr(ring));
                while (try_punct(",")) rels.push_back(poly_expr(ring));
                expect_punct(")");
            }
        }
        expect_punct(";");
        ws.rings[name.text] = make_presentation(field, t_vars, z_vars, rels, name.text);
        ws.order.emplace_back("ring", name.text);
    }

    void parse_map(Workspace &ws) {
        Token name = expect_ident("map name");
        if (ws.has(name.text)) fail(name, "duplicate binding '" + name.text + "'", "", "semantic");
        expect_punct(":");
        Token src = expect_ident("source ring");
        expect_punct("->");
        Token dst = expect_ident("target ring");
        auto si = ws.rings.find(src.text);
        if (si == ws.rings.end()) fail(src, "unresolved: " + src.text, "ring name", "semantic");
        auto di = ws.rings.find(dst.text);
        if (di == ws.rings.end()) fail(dst, "unresolved: " + dst.text, "ring name", "semantic");
        auto assignments = map_block(di->second->ring);
        expect_punct(";");
        AdicMorphism f;
        f.name = name.text;
        f.source = si->second;
        f.target = di->second;
        f.images.assign(f.source->nvars(), Polynomial::zero(f.target->ring));
        std::vector<char> seen(f.source->nvars(), 0);
        for (auto &[var, poly] : assignments) {
            int i = f.source->ring->var_index(var);
            if (i < 0) fail(name, "unresolved: " + var + " (not a variable of " + src.text + ")", "", "semantic");
            f.images[static_cast<std::size_t>(i)] = poly;
            seen[static_cast<std::size_t>(i)] = 1;
        }
        for (std::size_t i = 0; i < seen.size(); ++i)
            if (!seen[i]) fail(name, "missing image for variable '" + f.source->ring->vars[i] + "'", "", "semantic");
        Diagnostics d = validate_morphism(f);
        if (!d.ok) fail(name, "invalid morphism: " + d.issues.front(), "", "semantic");
        ws.maps[name.text] = std::move(f);
        ws.order.emplace_back("map", name.text);
    }

    void parse_point(Workspace &ws) {
        Token name = expect_ident("point name");
        if (ws.has(name.text)) fail(name, "duplicate binding '" + name.text + "'", "", "semantic");
        if (!try_keyword("on")) fail(lex_.peek(), "'on' expected", "on");
        Token ring = expect_ident("ring name");
        auto ri = ws.rings.find(ring.text);
        if (ri == ws.rings.end()) fail(ring, "unresolved: " + ring.text, "ring name", "semantic");
        expect_punct("{");
        std::vector<std::pair<std::string, Scalar>> assignments;
        if (!try_punct("}")) {
            do {
                Token v = expect_ident("variable");
                expect_punct("=");
                assignments.emplace_back(v.text, Scalar(ri->second->field, rational_literal()));
            } while (try_punct(","));
            expect_punct("}");
        }
        expect_punct(";");
        RationalPoint x;
        try {
            x = make_point(ri->second, assignments);
        } catch (const std::invalid_argument &e) {
            fail(name, e.what(), "", "semantic");
        }
        Diagnostics d = validate_point(x);
        if (!d.ok) fail(name, "point rejected: " + d.issues.front(), "", "semantic");
        ws.points[name.text] = std::move(x);
        ws.order.emplace_back("point", name.text);
    }

    // linear combination of extension basis names
    std::vector<Scalar> lincomb(const TableAlgebra &alg) {
        std::vector<Scalar> v(alg.dim(), Scalar::zero(alg.field));
        bool first = true;
        for (;;) {
            bool neg = false;
            if (try_punct("-")) neg = true;
            else if (try_punct("+")) neg = false;
            else if (!first) return v;
            Rational coeff(1);
            bool have_coeff = false;
            if (lex_.peek().kind == Token::Kind::Int) {
                Token n = lex_.take();
                coeff = Rational(BigInt(n.text));
                if (try_punct("/")) coeff /= Rational(BigInt(expect_int().text));
                have_coeff = true;
                if (!try_punct("*")) {
                    // bare constant: multiple of the unit
                    Scalar c(alg.field, neg ? -coeff : coeff);
                    v[0] += c;
                    first = false;
                    continue;
                }
            }
            Token e = expect_ident("basis element");
            auto it = std::find(alg.basis_names.begin(), alg.basis_names.end(), e.text);
            if (it == alg.basis_names.end()) fail(e, "unresolved: " + e.text, "extension basis element", "semantic");
            (void)have_coeff;
            Scalar c(alg.field, neg ? -coeff : coeff);
            v[static_cast<std::size_t>(it - alg.basis_names.begin())] += c;
            first = false;
        }
    }

    void parse_extension(Workspace &ws) {
        Token name = expect_ident("extension name");
        if (ws.has(name.text)) fail(name, "duplicate binding '" + name.text + "'", "", "semantic");
        expect_punct("=");
        if (!try_keyword("artinian")) fail(lex_.peek(), "'artinian' expected", "artinian");
        if (!try_keyword("basis")) fail(lex_.peek(), "'basis' expected", "basis");
        expect_punct("[");
        TableAlgebra alg;
        alg.field = Field{}; // extensions are over Q; Fp tables are built through covers of Fp rings
        do alg.basis_names.push_back(expect_ident("basis element").text);
        while (try_punct(","));
        expect_punct("]");
        std::size_t d = alg.dim();
        // default table: unit laws for e0, all other products zero
        alg.mult.assign(d, std::vector<std::vector<Scalar>>(d, std::vector<Scalar>(d, Scalar::zero(alg.field))));
        for (std::size_t i = 0; i < d; ++i) {
            alg.mult[0][i][i] = Scalar::one(alg.field);
            alg.mult[i][0][i] = Scalar::one(alg.field);
        }
        if (try_keyword("mult")) {
            expect_punct("[");
            if (!try_punct("]")) {
                do {
                    Token a = expect_ident("basis element");
                    expect_punct("*");
                    Token b = expect_ident("basis element");
                    expect_punct("=");
                    auto ia = std::find(alg.basis_names.begin(), alg.basis_names.end(), a.text);
                    auto ib = std::find(alg.basis_names.begin(), alg.basis_names.end(), b.text);
                    if (ia == alg.basis_names.end()) fail(a, "unresolved: " + a.text, "", "semantic");
                    if (ib == alg.basis_names.end()) fail(b, "unresolved: " + b.text, "", "semantic");
                    auto v = lincomb(alg);
                    std::size_t i = static_cast<std::size_t>(ia - alg.basis_names.begin());
                    std::size_t j = static_cast<std::size_t>(ib - alg.basis_names.begin());
                    alg.mult[i][j] = v;
                    alg.mult[j][i] = v;
                } while (try_punct(","));
                expect_punct("]");
            }
        }
        std::vector<std::vector<Scalar>> ideal;
        if (!try_keyword("ideal")) fail(lex_.peek(), "'ideal' expected", "ideal");
        expect_punct("[");
        if (!try_punct("]")) {
            do {
                auto v = lincomb(alg);
                ideal.push_back(v);
            } while (try_punct(","));
            expect_punct("]");
        }
        expect_punct(";");
        SquareZeroExtension ext = make_extension(name.text, alg, ideal);
        Diagnostics dd = ext.validate();
        if (!dd.ok) fail(name, "extension rejected: " + dd.issues.front(), "", "semantic");
        ws.extensions[name.text] = std::move(ext);
        ws.order.emplace_back("extension", name.text);
    }

    // total-coordinates linear map given by images of basis elements
    ScalarMat map_matrix(const TableAlgebra &from, const TableAlgebra &to) {
        expect_punct("{");
        ScalarMat m(to.dim(), from.dim(), Scalar::zero(to.field));
        if (!try_punct("}")) {
            do {
                Token e = expect_ident("basis element");
                auto it = std::find(from.basis_names.begin(), from.basis_names.end(), e.text);
                if (it == from.basis_names.end()) fail(e, "unresolved: " + e.text, "", "semantic");
                expect_punct("->");
                auto img = lincomb(to);
                std::size_t j = static_cast<std::size_t>(it - from.basis_names.begin());
                for (std::size_t i = 0; i < to.dim(); ++i) m.at(i, j) = img[i];
            } while (try_punct(","));
            expect_punct("}");
        }
        return m;
    }

    void parse_cover(Workspace &ws) {
        Token name = expect_ident("cover name");
        if (ws.has(name.text)) fail(name, "duplicate binding '" + name.text + "'", "", "semantic");
        expect_punct("{");
        CoverBinding cb;
        cb.datum.name = name.text;
        bool have_map = false;
        std::map<std::pair<std::size_t, std::size_t>, std::size_t> pair_slot;
        while (!try_punct("}")) {
            Token head = expect_ident("cover item");
            if (head.text == "map") {
                Token m = expect_ident("map name");
                auto mi = ws.maps.find(m.text);
                if (mi == ws.maps.end()) fail(m, "unresolved: " + m.text, "map name", "semantic");
                cb.datum.f = mi->second;
                have_map = true;
                expect_punct(";");
            } else if (head.text == "chart") {
                if (!have_map) fail(head, "cover must declare its map before charts", "", "semantic");
                Token idx = expect_int();
                std::size_t want = std::stoul(idx.text);
                if (want != cb.datum.charts.size() + 1)
                    fail(idx, "charts must be declared in order 1,2,...", "", "semantic");
                if (!try_keyword("ext")) fail(lex_.peek(), "'ext' expected", "ext");
                Token e = expect_ident("extension name");
                auto ei = ws.extensions.find(e.text);
                if (ei == ws.extensions.end()) fail(e, "unresolved: " + e.text, "extension name", "semantic");
                CechChart chart;
                chart.ext = ei->second;
                if (try_keyword("base")) {
                    expect_punct("{");
                    std::map<std::string, std::vector<Scalar>> vals;
                    if (!try_punct("}")) {
                        do {
                            Token v = expect_ident("variable");
                            expect_punct("=");
                            vals[v.text] = lincomb(chart.ext.total);
                        } while (try_punct(","));
                        expect_punct("}");
                    }
                    for (const auto &bv : cb.datum.f.source->ring->vars) {
                        auto it = vals.find(bv);
                        chart.base_images.push_back(it == vals.end() ? chart.ext.total.zero() : it->second);
                    }
                } else {
                    chart.base_images.assign(cb.datum.f.source->nvars(), chart.ext.total.zero());
                }
                if (!try_keyword("u0")) fail(lex_.peek(), "'u0' expected", "u0");
                expect_punct("{");
                std::map<std::string, std::vector<Scalar>> vals;
                if (!try_punct("}")) {
                    do {
                        Token v = expect_ident("variable");
                        expect_punct("=");
                        vals[v.text] = lincomb(chart.ext.total);
                    } while (try_punct(","));
                    expect_punct("}");
                }
                for (const auto &av : cb.datum.f.target->ring->vars) {
                    auto it = vals.find(av);
                    chart.u0.push_back(chart.ext.project(it == vals.end() ? chart.ext.total.zero() : it->second));
                }
                cb.datum.charts.push_back(std::move(chart));
                expect_punct(";");
            } else if (head.text == "overlap") {
                expect_punct("(");
                std::size_t a = std::stoul(expect_int().text);
                expect_punct(",");
                std::size_t b = std::stoul(expect_int().text);
                expect_punct(")");
                if (a < 1 || b < 1 || a > cb.datum.charts.size() || b > cb.datum.charts.size() || a >= b)
                    fail(head, "overlap indexes must name declared charts with a < b", "", "semantic");
                if (!try_keyword("ext")) fail(lex_.peek(), "'ext' expected", "ext");
                Token e = expect_ident("extension name");
                auto ei = ws.extensions.find(e.text);
                if (ei == ws.extensions.end()) fail(e, "unresolved: " + e.text, "extension name", "semantic");
                CechPair p;
                p.a = a - 1;
                p.b = b - 1;
                p.ext = ei->second;
                if (!try_keyword("from")) fail(lex_.peek(), "'from' expected", "from");
                p.res_a = map_matrix(cb.datum.charts[p.a].ext.total, p.ext.total);
                if (!try_keyword("from")) fail(lex_.peek(), "'from' expected", "from");
                p.res_b = map_matrix(cb.datum.charts[p.b].ext.total, p.ext.total);
                expect_punct(";");
                pair_slot[{p.a, p.b}] = cb.datum.pairs.size();
                cb.datum.pairs.push_back(std::move(p));
                cb.transitions.emplace_back();
                cb.transitions.back().delta.resize(cb.datum.f.target->nvars());
            } else if (head.text == "triple") {
                expect_punct("(");
                std::size_t a = std::stoul(expect_int().text);
                expect_punct(",");
                std::size_t b = std::stoul(expect_int().text);
                expect_punct(",");
                std::size_t c = std::stoul(expect_int().text);
                expect_punct(")");
                CechTriple t;
                t.a = a - 1;
                t.b = b - 1;
                t.c = c - 1;
                if (!try_keyword("ext")) fail(lex_.peek(), "'ext' expected", "ext");
                Token e = expect_ident("extension name");
                auto ei = ws.extensions.find(e.text);
                if (ei == ws.extensions.end()) fail(e, "unresolved: " + e.text, "extension name", "semantic");
                t.ext = ei->second;
                auto need_pair = [&](std::size_t x, std::size_t y) -> const CechPair & {
                    auto it = pair_slot.find({x, y});
                    if (it == pair_slot.end()) fail(head, "triple requires its three overlaps first", "", "semantic");
                    return cb.datum.pairs[it->second];
                };
                const CechPair &ab = need_pair(t.a, t.b);
                const CechPair &ac = need_pair(t.a, t.c);
                const CechPair &bc = need_pair(t.b, t.c);
                if (!try_keyword("from")) fail(lex_.peek(), "'from' expected", "from");
                t.from_ab = map_matrix(ab.ext.total, t.ext.total);
                if (!try_keyword("from")) fail(lex_.peek(), "'from' expected", "from");
                t.from_ac = map_matrix(ac.ext.total, t.ext.total);
                if (!try_keyword("from")) fail(lex_.peek(), "'from' expected", "from");
                t.from_bc = map_matrix(bc.ext.total, t.ext.total);
                expect_punct(";");
                cb.datum.triples.push_back(std::move(t));
            } else if (head.text == "cochain") {
                expect_punct("(");
                std::size_t a = std::stoul(expect_int().text);
                expect_punct(",");
                std::size_t b = std::stoul(expect_int().text);
                expect_punct(")");
                auto it = pair_slot.find({a - 1, b - 1});
                if (it == pair_slot.end()) fail(head, "cochain requires its overlap first", "", "semantic");
                const CechPair &p = cb.datum.pairs[it->second];
                if (!cb.cochain) cb.cochain.emplace();
                while (cb.cochain->size() < cb.datum.pairs.size()) {
                    const auto &pp = cb.datum.pairs[cb.cochain->size()];
                    HomElement zero;
                    zero.rows.assign(cb.datum.f.target->nvars(),
                                     std::vector<Scalar>(pp.ext.ideal_dim(), Scalar::zero(pp.ext.total.field)));
                    cb.cochain->push_back(zero);
                }
                expect_punct("{");
                if (!try_punct("}")) {
                    do {
                        Token v = expect_ident("variable");
                        int vi = cb.datum.f.target->ring->var_index(v.text);
                        if (vi < 0) fail(v, "unresolved: " + v.text, "target variable", "semantic");
                        expect_punct("=");
                        auto total = lincomb(p.ext.total);
                        if (!p.ext.in_ideal(total)) fail(v, "cochain entry is not in the overlap ideal", "", "semantic");
                        (*cb.cochain)[it->second].rows[static_cast<std::size_t>(vi)] = p.ext.ideal_coords(total);
                    } while (try_punct(","));
                    expect_punct("}");
                }
                expect_punct(";");
            } else if (head.text == "transition") {
                expect_punct("(");
                std::size_t a = std::stoul(expect_int().text);
                expect_punct(",");
                std::size_t b = std::stoul(expect_int().text);
                expect_punct(")");
                auto it = pair_slot.find({a - 1, b - 1});
                if (it == pair_slot.end()) fail(head, "transition requires its overlap first", "", "semantic");
                const CechPair &p = cb.datum.pairs[it->second];
                Transition &tr = cb.transitions[it->second];
                // block of v |-> v + delta with ideal-coefficient delta
                expect_punct("{");
                if (!try_punct("}")) {
                    do {
                        Token v = expect_ident("variable");
                        int vi = cb.datum.f.target->ring->var_index(v.text);
                        if (vi < 0) fail(v, "unresolved: " + v.text, "target variable", "semantic");
                        expect_punct("|->");
                        auto terms = transition_poly(cb.datum.f.target->ring, p.ext);
                        // the pure part must be exactly the variable itself
                        Polynomial pure = terms.first;
                        Polynomial idvar = Polynomial::variable(cb.datum.f.target->ring, static_cast<std::size_t>(vi));
                        if (!(pure == idvar))
                            fail(v, "transition must reduce to the identity modulo the ideal", "", "semantic");
                        tr.delta[static_cast<std::size_t>(vi)] = std::move(terms.second);
                    } while (try_punct(","));
                    expect_punct("}");
                }
                expect_punct(";");
            } else {
                fail(head, "unknown cover item '" + head.text + "'", "map/chart/overlap/triple/transition/cochain");
            }
        }
        expect_punct(";");
        if (!have_map) fail(name, "cover must declare a map", "", "semantic");
        if (cb.cochain)
            while (cb.cochain->size() < cb.datum.pairs.size()) {
                const auto &pp = cb.datum.pairs[cb.cochain->size()];
                HomElement zero;
                zero.rows.assign(cb.datum.f.target->nvars(),
                                 std::vector<Scalar>(pp.ext.ideal_dim(), Scalar::zero(pp.ext.total.field)));
                cb.cochain->push_back(zero);
            }
        Diagnostics d = validate_cover(cb.datum);
        if (!d.ok) fail(name, "cover rejected: " + d.issues.front(), "", "semantic");
        ws.covers[name.text] = std::move(cb);
        ws.order.emplace_back("cover", name.text);
    }

    // polynomial whose coefficients may involve ideal basis names of an
    // extension; returns (scalar part, ideal-coefficient part per monomial)
    std::pair<Polynomial, std::map<Expo, std::vector<Scalar>>> transition_poly(const PolyRingPtr &ring,
                                                                               const SquareZeroExtension &ext) {
        Polynomial pure = Polynomial::zero(ring);
        std::map<Expo, std::vector<Scalar>> delta;
        bool first = true;
        for (;;) {
            bool neg = false;
            if (try_punct("-")) neg = true;
            else if (try_punct("+")) neg = false;
            else if (!first) break;
            first = false;
            // term: [rational] { '*' (ident | ident^k) }*
            Rational coeff(1);
            if (lex_.peek().kind == Token::Kind::Int) {
                Token n = lex_.take();
                coeff = Rational(BigInt(n.text));
                if (try_punct("/")) coeff /= Rational(BigInt(expect_int().text));
                if (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == "*") lex_.take();
            }
            Expo mono(ring->nvars(), 0);
            int ideal_index = -1;
            for (;;) {
                if (lex_.peek().kind != Token::Kind::Ident) break;
                Token id = lex_.take();
                std::uint32_t e = 1;
                if (try_punct("^")) e = static_cast<std::uint32_t>(std::stoul(expect_int().text));
                int vi = ring->var_index(id.text);
                if (vi >= 0) {
                    mono[static_cast<std::size_t>(vi)] += e;
                } else {
                    auto bi = std::find(ext.total.basis_names.begin(), ext.total.basis_names.end(), id.text);
                    if (bi == ext.total.basis_names.end())
                        fail(id, "unresolved: " + id.text, "variable or extension basis element", "semantic");
                    if (ideal_index >= 0 || e != 1)
                        fail(id, "transition coefficients must be linear in the ideal", "", "semantic");
                    ideal_index = static_cast<int>(bi - ext.total.basis_names.begin());
                }
                if (!try_punct("*")) break;
            }
            Scalar c(ring->field, neg ? -coeff : coeff);
            if (ideal_index < 0) {
                pure.add_term(mono, c);
            } else {
                auto unitvec = ext.total.zero();
                unitvec[static_cast<std::size_t>(ideal_index)] = c;
                if (!ext.in_ideal(unitvec)) fail(lex_.peek(), "transition coefficient is not in the ideal", "", "semantic");
                auto ic = ext.ideal_coords(unitvec);
                auto &slot = delta[mono];
                if (slot.empty()) slot.assign(ext.ideal_dim(), Scalar::zero(ring->field));
                for (std::size_t i = 0; i < ic.size(); ++i) slot[i] += ic[i];
            }
        }
        return {pure, delta};
    }
};

} // namespace

bool Workspace::has(const std::string &name) const {
    return rings.count(name) || maps.count(name) || points.count(name) || extensions.count(name) ||
           covers.count(name);
}

Workspace parse(const std::string &source) {
    Parser p(source);
    return p.parse_workspace();
}

Polynomial parse_polynomial(const std::string &text, const PolyRingPtr &ring) {
    Parser p(text);
    return p.parse_poly_fragment(ring);
}

std::vector<std::pair<std::string, Polynomial>> parse_map_block(const std::string &text, const PolyRingPtr &ring) {
    Parser p(text);
    return p.parse_map_block_fragment(ring);
}

std::vector<Polynomial> parse_poly_list(const std::string &text, const PolyRingPtr &ring) {
    Parser p(text);
    return p.parse_poly_list_fragment(ring);
}

// --- pretty printer --------------------------------------------------------

namespace {

std::string lincomb_str(const TableAlgebra &alg, const std::vector<Scalar> &v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i].is_zero()) continue;
        if (!out.empty()) out += " + ";
        if (v[i].is_one()) out += alg.basis_names[i];
        else out += v[i].str() + "*" + alg.basis_names[i];
    }
    return out.empty() ? "0" : out;
}

std::string matrix_block(const TableAlgebra &from, const TableAlgebra &to, const ScalarMat &m) {
    std::string out = "{ ";
    for (std::size_t j = 0; j < from.dim(); ++j) {
        std::vector<Scalar> col;
        for (std::size_t i = 0; i < to.dim(); ++i) col.push_back(m.at(i, j));
        if (j) out += ", ";
        out += from.basis_names[j] + " -> " + lincomb_str(to, col);
    }
    return out + " }";
}

} // namespace

std::string pretty_print(const Workspace &ws) {
    std::ostringstream out;
    for (const auto &[kind, name] : ws.order) {
        if (kind == "ring") {
            const auto &p = ws.rings.at(name);
            out << "ring " << name << " = " << field_to_string(p->field);
            if (!p->t_vars.empty()) {
                out << "{";
                for (std::size_t i = 0; i < p->t_vars.size(); ++i) out << (i ? "," : "") << p->t_vars[i];
                out << "}";
            }
            if (!p->z_vars.empty()) {
                out << "[[";
                for (std::size_t i = 0; i < p->z_vars.size(); ++i) out << (i ? "," : "") << p->z_vars[i];
                out << "]]";
            }
            const auto &gens = p->relations.generators();
            if (!gens.empty()) {
                out << " / (";
                for (std::size_t i = 0; i < gens.size(); ++i) out << (i ? ", " : "") << gens[i].str();
                out << ")";
            }
            out << ";\n";
        } else if (kind == "map") {
            const auto &f = ws.maps.at(name);
            std::string src, dst;
            for (const auto &[rn, rp] : ws.rings) {
                if (rp.get() == f.source.get()) src = rn;
                if (rp.get() == f.target.get()) dst = rn;
            }
            out << "map " << name << " : " << src << " -> " << dst << " { ";
            for (std::size_t i = 0; i < f.images.size(); ++i)
                out << (i ? ", " : "") << f.source->ring->vars[i] << " |-> " << f.images[i].str();
            out << " };\n";
        } else if (kind == "point") {
            const auto &x = ws.points.at(name);
            std::string ring;
            for (const auto &[rn, rp] : ws.rings)
                if (rp.get() == x.on.get()) ring = rn;
            out << "point " << name << " on " << ring << " { ";
            bool firstv = true;
            for (std::size_t i = 0; i < x.coords.size(); ++i) {
                if (x.coords[i].is_zero()) continue;
                out << (firstv ? "" : ", ") << x.on->ring->vars[i] << " = " << x.coords[i].str();
                firstv = false;
            }
            out << " };\n";
        } else if (kind == "extension") {
            const auto &e = ws.extensions.at(name);
            out << "extension " << name << " = artinian basis [";
            for (std::size_t i = 0; i < e.total.dim(); ++i) out << (i ? ", " : "") << e.total.basis_names[i];
            out << "] mult [";
            bool firstm = true;
            for (std::size_t i = 0; i < e.total.dim(); ++i)
                for (std::size_t j = i; j < e.total.dim(); ++j) {
                    if (i == 0) continue; // unit laws are implicit
                    out << (firstm ? "" : ", ") << e.total.basis_names[i] << "*" << e.total.basis_names[j] << " = "
                        << lincomb_str(e.total, e.total.mult[i][j]);
                    firstm = false;
                }
            out << "] ideal [";
            for (std::size_t i = 0; i < e.ideal_basis.size(); ++i)
                out << (i ? ", " : "") << lincomb_str(e.total, e.ideal_basis[i]);
            out << "];\n";
        } else if (kind == "cover") {
            const auto &cb = ws.covers.at(name);
            out << "cover " << name << " {\n";
            out << "  map " << cb.datum.f.name << ";\n";
            for (std::size_t a = 0; a < cb.datum.charts.size(); ++a) {
                const auto &ch = cb.datum.charts[a];
                out << "  chart " << (a + 1) << " ext " << ch.ext.name << " base { ";
                for (std::size_t i = 0; i < ch.base_images.size(); ++i)
                    out << (i ? ", " : "") << cb.datum.f.source->ring->vars[i] << " = "
                        << lincomb_str(ch.ext.total, ch.base_images[i]);
                out << " } u0 { ";
                for (std::size_t i = 0; i < ch.u0.size(); ++i)
                    out << (i ? ", " : "") << cb.datum.f.target->ring->vars[i] << " = "
                        << lincomb_str(ch.ext.total, ch.ext.section(ch.u0[i]));
                out << " };\n";
            }
            for (std::size_t pi = 0; pi < cb.datum.pairs.size(); ++pi) {
                const auto &p = cb.datum.pairs[pi];
                out << "  overlap (" << (p.a + 1) << "," << (p.b + 1) << ") ext " << p.ext.name << " from "
                    << matrix_block(cb.datum.charts[p.a].ext.total, p.ext.total, p.res_a) << " from "
                    << matrix_block(cb.datum.charts[p.b].ext.total, p.ext.total, p.res_b) << ";\n";
                if (cb.cochain) {
                    out << "  cochain (" << (p.a + 1) << "," << (p.b + 1) << ") { ";
                    for (std::size_t v = 0; v < (*cb.cochain)[pi].rows.size(); ++v)
                        out << (v ? ", " : "") << cb.datum.f.target->ring->vars[v] << " = "
                            << lincomb_str(p.ext.total, p.ext.ideal_embed((*cb.cochain)[pi].rows[v]));
                    out << " };\n";
                }
                const auto &tr = cb.transitions[pi];
                bool nontrivial = false;
                for (const auto &dv : tr.delta) nontrivial = nontrivial || !dv.empty();
                if (nontrivial) {
                    out << "  transition (" << (p.a + 1) << "," << (p.b + 1) << ") { ";
                    bool firstv = true;
                    for (std::size_t v = 0; v < tr.delta.size(); ++v) {
                        if (tr.delta[v].empty()) continue;
                        out << (firstv ? "" : ", ") << cb.datum.f.target->ring->vars[v] << " |-> "
                            << cb.datum.f.target->ring->vars[v];
                        for (const auto &[e, c] : tr.delta[v]) {
                            auto total = cb.datum.pairs[pi].ext.ideal_embed(c);
                            std::string mono;
                            for (std::size_t k = 0; k < e.size(); ++k)
                                if (e[k] > 0) {
                                    mono += "*" + cb.datum.f.target->ring->vars[k];
                                    if (e[k] > 1) mono += "^" + std::to_string(e[k]);
                                }
                            out << " + " << lincomb_str(p.ext.total, total) << mono;
                        }
                        firstv = false;
                    }
                    out << " };\n";
                }
            }
            for (const auto &t : cb.datum.triples) {
                out << "  triple (" << (t.a + 1) << "," << (t.b + 1) << "," << (t.c + 1) << ") ext " << t.ext.name
                    << " from " << matrix_block(cb.datum.pair(t.a, t.b)->ext.total, t.ext.total, t.from_ab) << " from "
                    << matrix_block(cb.datum.pair(t.a, t.c)->ext.total, t.ext.total, t.from_ac) << " from "
                    << matrix_block(cb.datum.pair(t.b, t.c)->ext.total, t.ext.total, t.from_bc) << ";\n";
            }
            out << "};\n";
        }
    }
    return out.str();
}

// --- structural equality ----------------------------------------------------

namespace {

bool presentation_equal(const PresentationPtr &a, const PresentationPtr &b) {
    return a->field == b->field && a->t_vars == b->t_vars && a->z_vars == b->z_vars &&
           a->relations.generators().size() == b->relations.generators().size() &&
           [&] {
               for (std::size_t i = 0; i < a->relations.generators().size(); ++i) {
                   Polynomial moved = b->relations.generators()[i].transport(a->ring);
                   if (!(a->relations.generators()[i] == moved)) return false;
               }
               return true;
           }();
}

} // namespace

bool workspace_equal(const Workspace &a, const Workspace &b) {
    if (a.order != b.order) return false;
    for (const auto &[k, n] : a.order) {
        if (k == "ring") {
            if (!presentation_equal(a.rings.at(n), b.rings.at(n))) return false;
        } else if (k == "map") {
            const auto &fa = a.maps.at(n);
            const auto &fb = b.maps.at(n);
            if (fa.images.size() != fb.images.size()) return false;
            for (std::size_t i = 0; i < fa.images.size(); ++i)
                if (!(fa.images[i] == fb.images[i].transport(fa.target->ring))) return false;
        } else if (k == "point") {
            if (a.points.at(n).coords != b.points.at(n).coords) return false;
        } else if (k == "extension") {
            const auto &ea = a.extensions.at(n);
            const auto &eb = b.extensions.at(n);
            if (ea.total.basis_names != eb.total.basis_names || ea.total.mult != eb.total.mult ||
                ea.ideal_basis != eb.ideal_basis)
                return false;
        } else if (k == "cover") {
            const auto &ca = a.covers.at(n);
            const auto &cb = b.covers.at(n);
            if (ca.datum.charts.size() != cb.datum.charts.size() || ca.datum.pairs.size() != cb.datum.pairs.size())
                return false;
            for (std::size_t i = 0; i < ca.datum.charts.size(); ++i)
                if (ca.datum.charts[i].u0 != cb.datum.charts[i].u0 ||
                    ca.datum.charts[i].base_images != cb.datum.charts[i].base_images)
                    return false;
            for (std::size_t i = 0; i < ca.transitions.size(); ++i)
                if (ca.transitions[i].delta != cb.transitions[i].delta) return false;
            if (ca.cochain.has_value() != cb.cochain.has_value()) return false;
            if (ca.cochain)
                for (std::size_t i = 0; i < ca.cochain->size(); ++i)
                    if ((*ca.cochain)[i].rows != (*cb.cochain)[i].rows) return false;
        }
    }
    return true;
}

} // namespace fscheck::dsl
