#include "fscheck/commands.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace fscheck;

namespace {

PolyRingPtr ring_from(const std::vector<std::string> &vars) {
    return make_ring(Field{}, vars);
}

std::vector<Polynomial> polys_from(const PolyRingPtr &ring, const std::vector<std::string> &texts) {
    std::vector<Polynomial> out;
    for (const auto &t : texts) out.push_back(dsl::parse_polynomial(t, ring));
    return out;
}

} // namespace

PYBIND11_MODULE(_fscheck, m) {
    m.doc() = "exact checks for infinitesimal lifting properties of formal-scheme presentations";

    m.def(
        "run",
        [](const std::string &source, const std::string &command, int depth, int levels, int tdeg,
           std::uint64_t seed, int perturb) {
            RunOptions opts;
            opts.depth = depth;
            opts.levels = levels;
            opts.tdeg = tdeg;
            opts.seed = seed;
            opts.perturb = perturb;
            RunResult res = run_source(source, command, opts);
            return py::make_tuple(res.report.dump(2), res.exit_code);
        },
        py::arg("source"), py::arg("command"), py::arg("depth") = 8, py::arg("levels") = 3, py::arg("tdeg") = 3,
        py::arg("seed") = 0, py::arg("perturb") = 0,
        "Run one command against a workspace source; returns (report_json, exit_code).");

    m.def(
        "parse_summary",
        [](const std::string &source) { return workspace_summary(dsl::parse(source)).dump(2); },
        py::arg("source"), "Parse a workspace and return a JSON summary.");

    m.def(
        "pretty",
        [](const std::string &source) { return dsl::pretty_print(dsl::parse(source)); },
        py::arg("source"), "Canonical printing of a workspace source.");

    m.def(
        "groebner",
        [](const std::vector<std::string> &vars, const std::vector<std::string> &polys, const std::string &order) {
            auto ring = ring_from(vars);
            MonomialOrder ord = parse_order_tag(order, ring->nvars(), {});
            PolyIdeal ideal(ring, polys_from(ring, polys));
            std::vector<std::string> out;
            for (const auto &g : ideal.groebner(ord)) out.push_back(g.str());
            return out;
        },
        py::arg("vars"), py::arg("polys"), py::arg("order") = "degrevlex",
        "Reduced Groebner basis over Q.");

    m.def(
        "normal_form",
        [](const std::vector<std::string> &vars, const std::string &poly, const std::vector<std::string> &ideal) {
            auto ring = ring_from(vars);
            PolyIdeal I(ring, polys_from(ring, ideal));
            return normal_form(dsl::parse_polynomial(poly, ring), I, MonomialOrder::degrevlex()).str();
        },
        py::arg("vars"), py::arg("poly"), py::arg("ideal"), "Unique remainder modulo the reduced basis.");

    m.def(
        "krull_dimension",
        [](const std::vector<std::string> &vars, const std::vector<std::string> &polys) {
            auto ring = ring_from(vars);
            return krull_dimension(PolyIdeal(ring, polys_from(ring, polys)));
        },
        py::arg("vars"), py::arg("polys"), "Krull dimension of Q[vars]/ideal; -1 for the unit ideal.");

    m.def(
        "quotient_basis",
        [](const std::vector<std::string> &vars, const std::vector<std::string> &polys) -> py::object {
            auto ring = ring_from(vars);
            auto qb = quotient_basis(PolyIdeal(ring, polys_from(ring, polys)));
            if (!qb) return py::none();
            std::vector<std::string> out;
            for (const auto &e : *qb)
                out.push_back(Polynomial::monomial(ring, e, Scalar::one(ring->field)).str());
            return py::cast(out);
        },
        py::arg("vars"), py::arg("polys"),
        "Monomial basis of the quotient when finite, None when the staircase is infinite.");

#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "dev";
#endif
}
