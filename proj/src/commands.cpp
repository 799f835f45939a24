#include "fscheck/commands.hpp"

#include <cctype>
#include <chrono>
#include <sstream>

namespace fscheck {

using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split_words(const std::string &cmd) {
    // split on whitespace, keeping {...} and (...) groups intact
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : cmd) {
        if (c == '{' || c == '(') ++depth;
        if (c == '}' || c == ')') --depth;
        if (depth == 0 && std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

json poly_json(const Polynomial &p) { return p.str(); }

json poly_list_json(const std::vector<Polynomial> &ps) {
    json a = json::array();
    for (const auto &p : ps) a.push_back(poly_json(p));
    return a;
}

json matrix_json(const ScalarMat &m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols; ++j) row.push_back(m.at(i, j).str());
        rows.push_back(row);
    }
    return rows;
}

json pmatrix_json(const PolyMat &m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols; ++j) row.push_back(m.at(i, j).str());
        rows.push_back(row);
    }
    return rows;
}

json presentation_json(const AdicPresentation &p) {
    json j;
    j["field"] = field_to_string(p.field);
    j["t_vars"] = p.t_vars;
    j["z_vars"] = p.z_vars;
    j["relations"] = poly_list_json(p.relations.generators());
    return j;
}

json diag_json(const Diagnostics &d) {
    json j;
    j["ok"] = d.ok;
    j["issues"] = d.issues;
    return j;
}

json seq_report_json(const FundamentalSequenceReport &rep) {
    json stages = json::array();
    for (const auto &s : rep.stages) {
        json st;
        st["level"] = s.level;
        st["dim_left"] = s.dim_left;
        st["dim_middle"] = s.dim_middle;
        st["dim_right"] = s.dim_right;
        st["rank_first"] = s.rank_first;
        st["rank_second"] = s.rank_second;
        st["composite_zero"] = s.composite_zero;
        st["second_surjective"] = s.second_surjective;
        st["exact_middle"] = s.exact_middle;
        stages.push_back(st);
    }
    json j;
    j["stages"] = stages;
    j["exact"] = rep.exact;
    if (!rep.failure.empty()) j["failure"] = rep.failure;
    return j;
}

json class_report_json(const ClassificationReport &rep) {
    json j;
    j["property"] = rep.property;
    j["verdict"] = verdict_str(rep.verdict);
    if (rep.relative_dimension) j["relative_dimension"] = *rep.relative_dimension;
    if (rep.cert) {
        json c;
        c["generator_subset"] = rep.cert->generator_subset;
        c["minor_columns"] = rep.cert->minor_columns;
        c["global_equality"] = rep.cert->global_equality;
        j["certificate"] = c;
    }
    if (!rep.center.empty()) j["center"] = poly_list_json(rep.center);
    j["notes"] = rep.notes;
    return j;
}

const PresentationPtr &need_ring(const dsl::Workspace &ws, const std::string &name) {
    auto it = ws.rings.find(name);
    if (it == ws.rings.end()) throw UsageError("unknown ring '" + name + "'");
    return it->second;
}

const AdicMorphism &need_map(const dsl::Workspace &ws, const std::string &name) {
    auto it = ws.maps.find(name);
    if (it == ws.maps.end()) throw UsageError("unknown map '" + name + "'");
    return it->second;
}

const RationalPoint &need_point(const dsl::Workspace &ws, const std::string &name) {
    auto it = ws.points.find(name);
    if (it == ws.points.end()) throw UsageError("unknown point '" + name + "'");
    return it->second;
}

const dsl::CoverBinding &need_cover(const dsl::Workspace &ws, const std::string &name) {
    auto it = ws.covers.find(name);
    if (it == ws.covers.end()) throw UsageError("unknown cover '" + name + "'");
    return it->second;
}

std::string opt_value(const std::vector<std::string> &words, const std::string &key) {
    for (const auto &w : words) {
        if (w.rfind(key + "=", 0) == 0) return w.substr(key.size() + 1);
    }
    return "";
}

HomElement random_hom(const LiftingProblem &pb, Rng &rng) {
    // random element of Hom(u0* Omega, I): solve the annihilation constraints
    // and take a random combination of a nullspace basis
    std::size_t nA = pb.f.target->nvars();
    std::size_t m = pb.ext.ideal_dim();
    HomElement phi;
    phi.rows.assign(nA, std::vector<Scalar>(m, Scalar::zero(pb.ext.total.field)));
    if (m == 0) return phi;
    Lifting naive;
    for (const auto &q : pb.u0) naive.push_back(pb.ext.section(q));
    std::vector<Polynomial> gens = pb.f.target->relations.generators();
    for (std::size_t b = 0; b < pb.f.source->nvars(); ++b) gens.push_back(pb.f.images[b]);
    ScalarMat sys(gens.size() * m, nA * m, Scalar::zero(pb.ext.total.field));
    for (std::size_t gi = 0; gi < gens.size(); ++gi)
        for (std::size_t v = 0; v < nA; ++v) {
            auto q = pb.ext.total.eval_poly(gens[gi].derivative(v), naive);
            // action on ideal coordinates
            for (std::size_t j = 0; j < m; ++j) {
                auto prod = pb.ext.total.mul(q, pb.ext.ideal_basis[j]);
                auto c = pb.ext.ideal_coords(prod);
                for (std::size_t i = 0; i < m; ++i) sys.at(gi * m + i, v * m + j) = c[i];
            }
        }
    auto null = rank_and_solve(sys, std::nullopt, pb.ext.total.field).nullspace;
    for (const auto &vec : null) {
        Scalar lam = Scalar::from_int(pb.ext.total.field, rng.next_small());
        for (std::size_t v = 0; v < nA; ++v)
            for (std::size_t j = 0; j < m; ++j) phi.rows[v][j] += lam * vec[v * m + j];
    }
    return phi;
}

json hom_json(const HomElement &phi) {
    json rows = json::array();
    for (const auto &r : phi.rows) {
        json row = json::array();
        for (const auto &x : r) row.push_back(x.str());
        rows.push_back(row);
    }
    return rows;
}

json do_run(const dsl::Workspace &ws, const std::string &command, const RunOptions &base_opts, int &exit_code) {
    auto words = split_words(command);
    if (words.empty()) throw UsageError("empty command");
    // inline key=value options override the flags
    RunOptions opts = base_opts;
    for (const auto &w : words) {
        auto eq = w.find('=');
        if (eq == std::string::npos) continue;
        std::string key = w.substr(0, eq), val = w.substr(eq + 1);
        try {
            if (key == "depth") opts.depth = std::stoi(val);
            else if (key == "levels") opts.levels = std::stoi(val);
            else if (key == "tdeg") opts.tdeg = std::stoi(val);
            else if (key == "perturb") opts.perturb = std::stoi(val);
            else if (key == "seed") opts.seed = std::stoull(val);
        } catch (const std::exception &) {
            throw UsageError("bad option value '" + w + "'");
        }
    }
    json verdict, certificate, witness;
    json caveats = json::array();
    exit_code = 0;

    auto indeterminate = [&](const std::string &reason_code, int bound) {
        json c;
        c["reason"] = reason_code;
        c["bound"] = bound;
        caveats.push_back(c);
        exit_code = 3;
    };
    auto dimension_caveat = [&] {
        caveats.push_back("algebraic dimension computed on the polynomial model; exactness for components "
                          "missing the definition locus is not asserted");
    };

    const std::string &op = words[0];
    if (op == "validate") {
        if (words.size() < 2) throw UsageError("usage: validate NAME");
        const std::string &n = words[1];
        Diagnostics d;
        if (ws.rings.count(n)) d = validate(*ws.rings.at(n));
        else if (ws.maps.count(n)) d = validate_morphism(ws.maps.at(n));
        else if (ws.points.count(n)) d = validate_point(ws.points.at(n));
        else if (ws.extensions.count(n)) d = ws.extensions.at(n).validate();
        else if (ws.covers.count(n)) d = validate_cover(ws.covers.at(n).datum);
        else throw UsageError("unknown binding '" + n + "'");
        verdict = d.ok ? "ok" : "diagnostics";
        witness = diag_json(d);
        if (!d.ok) exit_code = 2;
    } else if (op == "truncate") {
        if (words.size() < 3) throw UsageError("usage: truncate RING n");
        auto p = need_ring(ws, words[1]);
        std::uint32_t n = static_cast<std::uint32_t>(std::stoul(words[2]));
        TruncatedAlgebra t = truncate(p, n);
        verdict = "ok";
        certificate["level"] = t.level;
        certificate["ideal"] = poly_list_json(t.ideal.generators());
        auto qb = quotient_basis(t.ideal);
        if (qb) {
            certificate["dimension"] = qb->size();
        } else {
            certificate["dimension"] = "infinite";
        }
    } else if (op == "dimensions") {
        if (words.size() < 2) throw UsageError("usage: dimensions RING");
        auto [alg, top] = dimensions(*need_ring(ws, words[1]));
        verdict["algebraic"] = alg;
        verdict["topological"] = top;
        dimension_caveat();
    } else if (op == "is-adic") {
        if (words.size() < 2) throw UsageError("usage: is-adic MAP");
        AdicVerdict v = is_adic(need_map(ws, words[1]), opts.depth);
        verdict = v.value == Trilean::Yes ? "Adic" : (v.value == Trilean::No ? "NotAdic" : "IndeterminateUpTo");
        certificate["witnesses"] = v.witnesses;
        certificate["bound"] = v.bound;
        if (!v.note.empty()) witness = v.note;
        if (v.value == Trilean::Indeterminate) indeterminate("adic_power_search_exhausted", v.bound);
    } else if (op == "fiber") {
        if (words.size() < 4 || words[2] != "at") throw UsageError("usage: fiber MAP at POINT");
        const auto &f = need_map(ws, words[1]);
        PresentationPtr fib = fiber(f, need_point(ws, words[3]));
        verdict = "ok";
        certificate = presentation_json(*fib);
    } else if (op == "complete") {
        if (words.size() < 4 || words[2] != "by") throw UsageError("usage: complete RING by (polys)");
        auto p = need_ring(ws, words[1]);
        auto center = dsl::parse_poly_list(words[3], p->ring);
        Completion c = completion_along(p, center);
        verdict = "ok";
        certificate["completed"] = presentation_json(*c.completed);
        certificate["kappa_valid"] = validate_morphism(c.kappa).ok;
    } else if (op == "quasi-covering") {
        if (words.size() < 4 || words[2] != "at") throw UsageError("usage: quasi-covering MAP at POINT");
        QuasiCoveringProbe pr = quasi_covering_probe(need_map(ws, words[1]), need_point(ws, words[3]), opts.depth);
        verdict = pr.kind == QuasiCoveringProbe::Kind::QuasiCovering
                      ? "QuasiCovering"
                      : (pr.kind == QuasiCoveringProbe::Kind::NotQuasiCovering ? "NotQuasiCovering"
                                                                               : "IndeterminateUpTo");
        certificate["table"] = pr.table;
        if (pr.fiber_dimension >= 0) certificate["fiber_dimension"] = pr.fiber_dimension;
        witness = pr.note;
        if (pr.kind == QuasiCoveringProbe::Kind::Indeterminate) indeterminate("quasi_covering_probe_exhausted", pr.bound);
    } else if (op == "omega") {
        if (words.size() < 2) throw UsageError("usage: omega MAP");
        DifferentialPresentation om = omega_presentation(need_map(ws, words[1]));
        verdict = "ok";
        certificate["basis"] = om.basis;
        certificate["row_labels"] = om.row_labels;
        certificate["relations"] = pmatrix_json(om.rows);
    } else if (op == "jacobian") {
        if (words.size() < 4 || words[2] != "at") throw UsageError("usage: jacobian MAP at POINT");
        const auto &f = need_map(ws, words[1]);
        ScalarMat j = jacobian_at(f, need_point(ws, words[3]));
        verdict = "ok";
        certificate["matrix"] = matrix_json(j);
        certificate["rank"] = rank_of(j, f.target->field);
    } else if (op == "unramified") {
        if (words.size() < 2) throw UsageError("usage: unramified MAP");
        verdict = fitting_unramified_test(need_map(ws, words[1])) == Ramification::Unramified ? "Unramified"
                                                                                              : "Ramified";
    } else if (op == "classify") {
        if (words.size() < 5 || words[3] != "at") throw UsageError("usage: classify PROPERTY MAP at POINT");
        const auto &f = need_map(ws, words[2]);
        const auto &x = need_point(ws, words[4]);
        ClassificationReport rep;
        if (words[1] == "unramified") rep = classify_unramified_at(f, x);
        else if (words[1] == "smooth") rep = classify_smooth_at(f, x, opts.levels + 1);
        else if (words[1] == "etale") rep = classify_etale_at(f, x, opts.depth);
        else throw UsageError("unknown property '" + words[1] + "'");
        verdict = verdict_str(rep.verdict);
        certificate = class_report_json(rep);
        if (rep.verdict == Verdict::Indeterminate) indeterminate("classification_certificate_missing", rep.bound);
    } else if (op == "classify-global") {
        if (words.size() < 3) throw UsageError("usage: classify-global PROPERTY MAP");
        const auto &f = need_map(ws, words[2]);
        const auto &A = *f.target;
        std::vector<RationalPoint> points;
        if (A.field.is_rational()) {
            // over Q: quantify over the workspace-supplied points on this target
            for (const auto &[pn, pt] : ws.points)
                if (pt.on.get() == f.target.get()) points.push_back(pt);
            if (points.empty()) throw UsageError("classify-global over Q needs bound points on the target");
        } else {
            std::size_t nt = A.t_vars.size();
            double total = 1;
            for (std::size_t i = 0; i < nt; ++i) total *= A.field.p;
            if (A.nvars() > 6 || total > 200000) {
                verdict = "Indeterminate";
                indeterminate("point_enumeration_bound_exceeded", 6);
            } else {
                std::vector<std::uint32_t> tup(nt, 0);
                for (;;) {
                    RationalPoint x;
                    x.on = f.target;
                    x.coords.assign(A.nvars(), Scalar::zero(A.field));
                    for (std::size_t i = 0; i < nt; ++i)
                        x.coords[i] = Scalar(A.field, Rational(tup[i]));
                    if (validate_point(x).ok) points.push_back(x);
                    // advance the odometer over the T-coordinates
                    std::size_t i = 0;
                    while (i < nt && ++tup[i] == A.field.p) tup[i++] = 0;
                    if (i == nt) break;
                }
            }
        }
        if (!points.empty()) {
            int yes = 0, no = 0, ind = 0;
            std::string witness_note;
            for (const auto &x : points) {
                ClassificationReport rep;
                if (words[1] == "unramified") rep = classify_unramified_at(f, x);
                else if (words[1] == "smooth") rep = classify_smooth_at(f, x, opts.levels + 1);
                else if (words[1] == "etale") rep = classify_etale_at(f, x, opts.depth);
                else throw UsageError("unknown property '" + words[1] + "'");
                if (rep.verdict == Verdict::Yes) ++yes;
                else if (rep.verdict == Verdict::No) {
                    ++no;
                    if (witness_note.empty() && !rep.notes.empty()) witness_note = rep.notes.front();
                } else ++ind;
            }
            certificate["points_checked"] = points.size();
            certificate["yes"] = yes;
            certificate["no"] = no;
            certificate["indeterminate"] = ind;
            if (no > 0) {
                verdict = "No";
                witness = witness_note;
            } else if (ind > 0) {
                verdict = "Indeterminate";
                indeterminate("pointwise_certificate_missing", static_cast<int>(points.size()));
            } else {
                verdict = "Yes";
            }
        }
    } else if (op == "pci") {
        if (words.size() < 2) throw UsageError("usage: pci MAP");
        ClassificationReport rep = detect_pseudo_closed_immersion(need_map(ws, words[1]), opts.levels);
        verdict = verdict_str(rep.verdict);
        certificate = class_report_json(rep);
        if (rep.verdict == Verdict::Indeterminate) indeterminate("pci_levels_exhausted", opts.levels);
    } else if (op == "completion-morphism") {
        if (words.size() < 2) throw UsageError("usage: completion-morphism MAP");
        ClassificationReport rep = detect_completion_morphism(need_map(ws, words[1]), opts.levels);
        verdict = verdict_str(rep.verdict);
        certificate = class_report_json(rep);
        if (rep.verdict == Verdict::Indeterminate) indeterminate("completion_levels_exhausted", opts.levels);
    } else if (op == "factor-smooth") {
        if (words.size() < 4 || words[2] != "at") throw UsageError("usage: factor-smooth MAP at POINT");
        const auto &f = need_map(ws, words[1]);
        SmoothFactorization fac = factor_smooth(f, need_point(ws, words[3]));
        verdict = "ok";
        certificate["first_leg_source"] = presentation_json(*fac.first_leg.source);
        certificate["first_leg_images"] = poly_list_json(fac.first_leg.images);
        certificate["second_leg_images"] = poly_list_json(fac.second_leg.images);
        certificate["composes"] = fac.composes;
        certificate["first_leg_unramified"] = fac.first_leg_unramified;
        certificate["tppall_form"] = fac.tppall_form;
        if (!fac.completion_center.empty()) certificate["completion_center"] = poly_list_json(fac.completion_center);
        witness = fac.notes;
    } else if (op == "lift-etale") {
        if (words.size() < 4) throw UsageError("usage: lift-etale MAP GMAP {h0 block}");
        const auto &f = need_map(ws, words[1]);
        const auto &g = need_map(ws, words[2]);
        auto block = dsl::parse_map_block(words[3], g.target->ring);
        std::vector<Polynomial> h0(f.target->nvars(), Polynomial::zero(g.target->ring));
        for (auto &[v, p] : block) {
            int i = f.target->ring->var_index(v);
            if (i < 0) throw UsageError("h0: unknown variable '" + v + "'");
            h0[static_cast<std::size_t>(i)] = p;
        }
        EtaleLifting lift = lift_along_etale(f, g, h0, static_cast<std::uint32_t>(opts.levels));
        verdict = "ok";
        certificate["images"] = poly_list_json(lift.lifting.images);
        certificate["unique"] = lift.unique;
        certificate["levels"] = lift.levels;
    } else if (op == "flatness") {
        if (words.size() < 2) throw UsageError("usage: flatness MAP");
        FlatnessProbe pr = flatness_probe(need_map(ws, words[1]), static_cast<std::uint32_t>(opts.levels));
        verdict = pr.kind == FlatnessProbe::Kind::Flat ? "Flat"
                                                       : (pr.kind == FlatnessProbe::Kind::NotFlat ? "NotFlat"
                                                                                                  : "Indeterminate");
        certificate["level"] = pr.level;
        if (pr.tor_dimension >= 0) certificate["tor_dimension"] = pr.tor_dimension;
        witness = pr.note;
        if (pr.kind == FlatnessProbe::Kind::Indeterminate) indeterminate("flatness_probe_out_of_domain", opts.levels);
    } else if (op == "fseq1") {
        if (words.size() < 3) throw UsageError("usage: fseq1 FMAP GMAP  (for C -g-> B -f-> A)");
        FundamentalSequenceReport rep =
            fundamental_sequence_first(need_map(ws, words[1]), need_map(ws, words[2]),
                                       static_cast<std::uint32_t>(opts.levels), static_cast<std::uint32_t>(opts.tdeg));
        verdict = rep.exact ? "exact" : "not_exact";
        certificate = seq_report_json(rep);
    } else if (op == "fseq2") {
        if (words.size() < 4 || words[2] != "by") throw UsageError("usage: fseq2 MAP by (polys)");
        const auto &f = need_map(ws, words[1]);
        auto iprime = dsl::parse_poly_list(words[3], f.target->ring);
        FundamentalSequenceReport rep = fundamental_sequence_second(
            f, iprime, static_cast<std::uint32_t>(opts.levels), static_cast<std::uint32_t>(opts.tdeg));
        verdict = rep.exact ? "exact" : "not_exact";
        certificate = seq_report_json(rep);
    } else if (op == "oracle") {
        if (words.size() < 2) throw UsageError("usage: oracle MAP");
        json table = json::array();
        bool ok = true;
        for (int n = 0; n <= opts.levels; ++n) {
            TruncationOracleReport rep = truncation_oracle(need_map(ws, words[1]), static_cast<std::uint32_t>(n));
            json jt;
            jt["level"] = rep.level;
            jt["discrete"] = rep.discrete;
            jt["agrees_directly"] = rep.agrees_directly;
            jt["agrees_adjusted"] = rep.agrees_adjusted;
            jt["expected_divergence"] = rep.expected_divergence;
            json entries = json::array();
            for (const auto &e : rep.table) {
                json je;
                je["fitt"] = e.fitt_index;
                je["equal_direct"] = e.equal_direct;
                je["equal_adjusted"] = e.equal_adjusted;
                entries.push_back(je);
            }
            jt["entries"] = entries;
            table.push_back(jt);
            ok = ok && rep.agrees_adjusted && (rep.discrete ? rep.agrees_directly : true);
        }
        verdict = ok ? "convergent" : "divergent";
        certificate["table"] = table;
        caveats.push_back("ordinary and completed modules genuinely differ at finite levels through the "
                          "Z^{n+1} gradients; the adjusted comparison is the stated proxy");
    } else if (op == "deform") {
        if (words.size() < 2) throw UsageError("usage: deform SUBCOMMAND ...");
        const std::string &sub = words[1];
        std::string cover_name = opt_value(words, "cover");
        if (cover_name.empty()) throw UsageError("deform: cover=NAME required");
        const auto &cb = need_cover(ws, cover_name);
        if (sub == "lift-affine") {
            std::string chart = opt_value(words, "chart");
            std::size_t idx = chart.empty() ? 0 : std::stoul(chart) - 1;
            if (idx >= cb.datum.charts.size()) throw UsageError("deform: chart index out of range");
            LiftingProblem pb;
            pb.f = cb.datum.f;
            pb.ext = cb.datum.charts[idx].ext;
            pb.base_images = cb.datum.charts[idx].base_images;
            pb.u0 = cb.datum.charts[idx].u0;
            Lifting u = lift_affine(pb);
            verdict = "ok";
            json imgs = json::array();
            for (const auto &vv : u) {
                json row = json::array();
                for (const auto &x : vv) row.push_back(x.str());
                imgs.push_back(row);
            }
            certificate["images"] = imgs;
        } else if (sub == "obstruct-morphism") {
            ObstructionReport rep = cb.cochain ? coboundary_probe(cb.datum, *cb.cochain)
                                               : obstruction_to_morphism_lift(cb.datum);
            verdict["cocycle_ok"] = rep.cocycle_ok;
            verdict["vanishes"] = rep.vanishes;
            json chain = json::array();
            for (const auto &phi : rep.cochain) chain.push_back(hom_json(phi));
            certificate["cochain"] = chain;
            if (rep.vanishes) {
                json prim = json::array();
                for (const auto &psi : rep.primitive) prim.push_back(hom_json(psi));
                certificate["primitive"] = prim;
            }
            if (!rep.note.empty()) witness = rep.note;
            if (opts.perturb > 0 && !cb.cochain) {
                Rng rng(opts.seed);
                int stable = 0;
                for (int k = 0; k < opts.perturb; ++k) {
                    std::vector<Lifting> lifts;
                    for (std::size_t a = 0; a < cb.datum.charts.size(); ++a) {
                        LiftingProblem pb;
                        pb.f = cb.datum.f;
                        pb.ext = cb.datum.charts[a].ext;
                        pb.base_images = cb.datum.charts[a].base_images;
                        pb.u0 = cb.datum.charts[a].u0;
                        Lifting u = lift_affine(pb);
                        HomElement phi = random_hom(pb, rng);
                        lifts.push_back(apply_difference(pb, u, phi));
                    }
                    ObstructionReport rp = obstruction_to_morphism_lift(cb.datum, &lifts);
                    if (rp.vanishes == rep.vanishes && rp.cocycle_ok) ++stable;
                }
                certificate["perturbations"] = opts.perturb;
                certificate["perturbations_stable"] = stable;
            }
        } else if (sub == "obstruct-scheme") {
            SchemeObstructionReport rep = obstruction_to_scheme_lift(cb.datum, cb.transitions);
            verdict["cocycle_ok"] = rep.cocycle_ok;
            verdict["vanishes"] = rep.vanishes;
            verdict["corrected_strict"] = rep.corrected_strict;
            if (!rep.note.empty()) witness = rep.note;
        } else if (sub == "iso") {
            Rng rng(opts.seed);
            std::vector<Lifting> u, v;
            for (std::size_t a = 0; a < cb.datum.charts.size(); ++a) {
                LiftingProblem pb;
                pb.f = cb.datum.f;
                pb.ext = cb.datum.charts[a].ext;
                pb.base_images = cb.datum.charts[a].base_images;
                pb.u0 = cb.datum.charts[a].u0;
                Lifting base = lift_affine(pb);
                u.push_back(base);
                HomElement phi = random_hom(pb, rng);
                v.push_back(apply_difference(pb, base, phi));
            }
            IsomorphismReport rep = classify_lifting_isomorphisms(cb.datum, u, v);
            verdict = rep.vanishes ? "isomorphic" : "not_by_this_cochain";
            witness = rep.note;
        } else {
            throw UsageError("unknown deform subcommand '" + sub + "'");
        }
    } else {
        throw UsageError("unknown command '" + op + "'");
    }

    json report;
    report["command"] = command;
    report["verdict"] = verdict;
    report["certificate"] = certificate;
    report["witness"] = witness;
    report["caveats"] = caveats;
    return report;
}

} // namespace

RunResult run_command(const dsl::Workspace &ws, const std::string &command, const RunOptions &opts) {
    RunResult res;
    auto t0 = std::chrono::steady_clock::now();
    try {
        res.report = do_run(ws, command, opts, res.exit_code);
    } catch (const UsageError &e) {
        res.report["command"] = command;
        res.report["verdict"] = "usage_error";
        res.report["certificate"] = nullptr;
        res.report["witness"] = e.what();
        res.report["caveats"] = json::array();
        res.exit_code = 1;
    } catch (const dsl::ParseError &e) {
        res.report["command"] = command;
        res.report["verdict"] = "diagnostics";
        res.report["certificate"] = nullptr;
        res.report["witness"] = e.str();
        res.report["caveats"] = json::array();
        res.exit_code = 2;
    } catch (const std::exception &e) {
        res.report["command"] = command;
        res.report["verdict"] = "diagnostics";
        res.report["certificate"] = nullptr;
        res.report["witness"] = e.what();
        res.report["caveats"] = json::array();
        res.exit_code = 2;
    }
    auto t1 = std::chrono::steady_clock::now();
    res.report["timing_ms"] =
        opts.timing ? std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count() : 0;
    return res;
}

RunResult run_source(const std::string &source, const std::string &command, const RunOptions &opts) {
    try {
        dsl::Workspace ws = dsl::parse(source);
        return run_command(ws, command, opts);
    } catch (const dsl::ParseError &e) {
        RunResult res;
        res.report["command"] = command;
        res.report["verdict"] = "diagnostics";
        res.report["certificate"] = nullptr;
        res.report["witness"] = e.str();
        res.report["caveats"] = json::array();
        res.report["timing_ms"] = 0;
        res.exit_code = 2;
        return res;
    }
}

nlohmann::json workspace_summary(const dsl::Workspace &ws) {
    json j;
    json rings = json::array(), maps = json::array(), points = json::array(), exts = json::array(),
         covers = json::array();
    for (const auto &[kind, name] : ws.order) {
        if (kind == "ring") {
            json r = presentation_json(*ws.rings.at(name));
            r["name"] = name;
            rings.push_back(r);
        } else if (kind == "map") {
            const auto &f = ws.maps.at(name);
            json m;
            m["name"] = name;
            m["images"] = poly_list_json(f.images);
            maps.push_back(m);
        } else if (kind == "point") {
            const auto &x = ws.points.at(name);
            json p;
            p["name"] = name;
            json coords = json::array();
            for (const auto &c : x.coords) coords.push_back(c.str());
            p["coords"] = coords;
            points.push_back(p);
        } else if (kind == "extension") {
            json e;
            e["name"] = name;
            e["dim"] = ws.extensions.at(name).total.dim();
            e["ideal_dim"] = ws.extensions.at(name).ideal_dim();
            exts.push_back(e);
        } else if (kind == "cover") {
            json c;
            c["name"] = name;
            c["charts"] = ws.covers.at(name).datum.charts.size();
            c["overlaps"] = ws.covers.at(name).datum.pairs.size();
            covers.push_back(c);
        }
    }
    j["rings"] = rings;
    j["maps"] = maps;
    j["points"] = points;
    j["extensions"] = exts;
    j["covers"] = covers;
    return j;
}

} // namespace fscheck
