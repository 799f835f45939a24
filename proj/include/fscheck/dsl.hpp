#ifndef FSCHECK_DSL_HPP
#define FSCHECK_DSL_HPP

#include "fscheck/deformation.hpp"

#include <map>
#include <string>

namespace fscheck::dsl {

struct ParseError {
    int line = 0, col = 0;
    std::string message;
    std::string expected; // expected-token hint
    std::string kind;     // lexical | syntactic | semantic

    std::string str() const;
};

struct CoverBinding {
    CechDatum datum;
    std::vector<Transition> transitions;               // aligned with datum.pairs
    std::optional<std::vector<HomElement>> cochain;    // explicit 1-cochain, aligned with datum.pairs
};

struct Workspace {
    std::map<std::string, PresentationPtr> rings;
    std::map<std::string, AdicMorphism> maps;
    std::map<std::string, RationalPoint> points;
    std::map<std::string, SquareZeroExtension> extensions;
    std::map<std::string, CoverBinding> covers;
    std::vector<std::pair<std::string, std::string>> order; // (kind, name) in binding order

    bool has(const std::string &name) const;
};

// Recursive-descent parse of the workspace DSL; throws ParseError.
Workspace parse(const std::string &source);

// Canonical source text; parse(pretty_print(parse(s))) is structurally equal.
std::string pretty_print(const Workspace &ws);

// fragment helpers used by the command dispatcher
Polynomial parse_polynomial(const std::string &text, const PolyRingPtr &ring);
std::vector<std::pair<std::string, Polynomial>> parse_map_block(const std::string &text, const PolyRingPtr &ring);
std::vector<Polynomial> parse_poly_list(const std::string &text, const PolyRingPtr &ring);

bool workspace_equal(const Workspace &a, const Workspace &b);

} // namespace fscheck::dsl

#endif
