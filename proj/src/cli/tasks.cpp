#include "internal.hpp"

#include <cmath>
#include <fstream>
#include <random>

namespace kronweb::cli::detail {

namespace {

json flag_verdict(const std::string& name, bool pass, const std::string& note = {}) {
    json v;
    v["name"] = name;
    v["pass"] = pass;
    if (!note.empty()) v["note"] = note;
    return v;
}

void add(TaskOutcome& out, json v) {
    out.pass = out.pass && v["pass"].get<bool>();
    out.verdicts.push_back(std::move(v));
}

json strings(const std::vector<Scalar>& v) {
    json out = json::array();
    for (const auto& s : v) out.push_back(s.str());
    return out;
}

json strings(const RFMatrix& m) {
    json out = json::array();
    for (const auto& row : m) out.push_back(strings(row));
    return out;
}

json point_json(const std::vector<mpq_class>& x) {
    json out = json::array();
    for (const auto& v : x) out.push_back(v.get_str());
    return out;
}

json structure_json(const BlockStructure& s) {
    json out;
    out["blocks"] = s.str();
    out["kronecker_plus"] = s.kronecker_plus;
    out["kronecker_minus"] = s.kronecker_minus;
    out["jordan"] = json::array();
    for (const auto& j : s.jordan) out["jordan"].push_back({{"eigenvalue", j.eigenvalue.str()}, {"sizes", j.sizes}});
    auto c = classify(s);
    out["kind"] = kind_name(c.kind);
    out["generic_type"] = c.generic_type;
    return out;
}

std::string lowercase(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string task_name(const json& t, const std::string& at, const std::string& kind) {
    if (t.contains("name")) return get_string(t, "name", at);
    return kind + at.substr(at.find('['));
}

std::optional<std::string> expected_kind(const json& t, const std::string& at) {
    if (!t.contains("expect")) return std::nullopt;
    auto e = lowercase(get_string(t, "expect", at));
    if (e != "kronecker" && e != "jordan" && e != "mixed")
        throw ManifestError(sub(at, "expect"), "expected kronecker, jordan or mixed");
    return e;
}

Grid parse_grid(const json& g, const std::string& at, std::size_t dim) {
    check_fields(g, at, {"lo", "hi", "points"});
    auto bound = [&](const char* key) {
        const auto& v = g.at(key);
        std::vector<long double> out;
        if (v.is_number()) {
            out.assign(dim, static_cast<long double>(get_double(g, key, at)));
        } else if (v.is_array() && v.size() == dim) {
            for (std::size_t i = 0; i < dim; ++i) {
                if (!v[i].is_number()) throw ManifestError(sub(sub(at, key), i), "expected a number");
                out.push_back(static_cast<long double>(v[i].get<double>()));
            }
        } else {
            throw ManifestError(sub(at, key), "expected a number or " + std::to_string(dim) + " numbers");
        }
        return out;
    };
    Grid grid{bound("lo"), bound("hi"), static_cast<std::size_t>(get_int(g, "points", at, 5, 201))};
    for (std::size_t i = 0; i < dim; ++i)
        if (!(grid.lo[i] < grid.hi[i])) throw ManifestError(sub(at, "hi"), "upper bound must exceed the lower bound");
    return grid;
}

std::vector<std::vector<long double>> interior_points(const Grid& grid, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::vector<long double>> out;
    for (int t = 0; t < samples; ++t) {
        std::vector<long double> x;
        for (std::size_t i = 0; i < grid.dim(); ++i) {
            long double m = 2 * grid.spacing(i);
            std::uniform_real_distribution<long double> u(grid.lo[i] + m, grid.hi[i] - m);
            x.push_back(u(rng));
        }
        out.push_back(x);
    }
    return out;
}

std::vector<mpq_class> random_point(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<long> d(-9, 9), q(1, 4);
    std::vector<mpq_class> x;
    for (std::size_t i = 0; i < n; ++i) {
        mpq_class v(d(rng), q(rng));
        v.canonicalize();
        x.push_back(v);
    }
    return x;
}

EquationSpec parse_equation(const json& t, const std::string& at) {
    auto symbol = get_string(t, "equation", at);
    std::vector<mpq_class> params;
    if (t.contains("params")) params = parse_rationals(t.at("params"), sub(at, "params"));
    try {
        return make_equation(symbol, params);
    } catch (const PdeError& e) {
        throw ManifestError(sub(at, "equation"), e.what());
    }
}

SymbolicSolution parse_symbolic_solution(const EquationSpec& eq, const json& j, const std::string& at) {
    std::vector<std::string> texts;
    if (j.is_string()) {
        texts.push_back(j.get<std::string>());
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (!j[i].is_string()) throw ManifestError(sub(at, i), "expected an expression string");
            texts.push_back(j[i].get<std::string>());
        }
    } else {
        throw ManifestError(at, "expected an expression string or a list of them");
    }
    try {
        return parse_solution(eq, texts);
    } catch (const std::exception& e) {
        throw ManifestError(at, e.what());
    }
}

// ---- jk

PreparedTask prepare_jk(const json& t, const std::string& at) {
    check_fields(t, at, {"kind", "S1", "S2"}, {"name", "expect"});
    auto pencil = parse_pencil_json(t.at("S1"), t.at("S2"), at);
    std::optional<std::string> expect;
    if (t.contains("expect")) expect = get_string(t, "expect", at);
    PreparedTask p;
    p.run = [pencil, expect](const ZeroPolicy&) {
        TaskOutcome out;
        auto s = block_structure(pencil);
        out.results = structure_json(s);
        json ex = json::array();
        for (const auto& e : exceptional_set(pencil)) ex.push_back(e.projective());
        out.results["exceptional_set"] = ex;
        add(out, flag_verdict("dimensions", s.dim_v() == pencil.dimV && s.dim_w() == pencil.dimW));
        if (expect) add(out, flag_verdict("expected blocks", s.str() == *expect, "expected " + *expect));
        return out;
    };
    return p;
}

// ---- pno-check

json pno_result(const PnoVerdict& v) {
    json r;
    r["ok"] = v.ok;
    if (!v.reason.empty()) r["reason"] = v.reason;
    if (v.witness) r["witness_pair"] = {v.witness->first + 1, v.witness->second + 1};
    return r;
}

PreparedTask prepare_pno_check(const json& t, const std::string& at) {
    check_fields(t, at, {"kind", "pno"}, {"name", "expect"});
    auto pno = parse_pno_json(t.at("pno"), sub(at, "pno"));
    bool expect = t.contains("expect") ? get_bool(t, "expect", at) : true;
    PreparedTask p;
    p.run = [pno, expect](const ZeroPolicy& policy) {
        TaskOutcome out;
        PnoVerdict v;
        try {
            v = is_geometric_pno(pno, policy);
        } catch (const NijenhuisError& e) {
            v.ok = false;
            v.reason = e.what();
        }
        out.results = pno_result(v);
        out.results["membership"] = verdict_to_json("membership", v.membership);
        out.results["torsion"] = verdict_to_json("torsion", v.torsion);
        add(out, flag_verdict("partial Nijenhuis", v.ok == expect, expect ? "" : "expected to fail"));
        return out;
    };
    return p;
}

// ---- web-check

PreparedTask prepare_web_check(const json& t, const std::string& at) {
    check_fields(t, at, {"kind", "web"}, {"name", "mode", "samples", "expect"});
    auto web = parse_web_json(t.at("web"), sub(at, "web"));
    WebMode mode = WebMode::full();
    if (t.contains("mode")) {
        auto m = get_string(t, "mode", at);
        if (m == "sampled")
            mode = WebMode::sampled();
        else if (m != "full")
            throw ManifestError(sub(at, "mode"), "expected full or sampled");
    }
    if (t.contains("samples")) {
        if (mode.kind != WebMode::Kind::Sampled) throw ManifestError(sub(at, "samples"), "only valid in sampled mode");
        mode.samples = static_cast<int>(get_int(t, "samples", at, 1, 1000));
    }
    bool expect = t.contains("expect") ? get_bool(t, "expect", at) : true;
    PreparedTask p;
    p.run = [web, mode, expect](const ZeroPolicy& policy) {
        TaskOutcome out;
        auto r = web_integrability(web, mode, policy);
        auto v = verdict_to_json("integrability", r.verdict);
        v["pass"] = r.verdict.zero() == expect;
        add(out, v);
        out.results["parts"] = json::array();
        for (std::size_t i = 0; i < r.parts.size(); ++i) {
            auto pj = verdict_to_json("part " + std::to_string(i), r.parts[i]);
            if (!r.s_values.empty()) pj["s"] = r.s_values[i].get_str();
            out.results["parts"].push_back(pj);
        }
        auto det = small_determinant(coefficient_matrix(web));
        auto d = zero_test(det, policy);
        add(out, flag_verdict("nondegenerate", !d.zero(), "determinant " + det.str()));
        return out;
    };
    return p;
}

// ---- pde-residual

PreparedTask prepare_pde_residual(const json& t, const std::string& at, const std::filesystem::path& base) {
    check_fields(t, at, {"kind", "equation"}, {"name", "params", "solution", "grid", "threshold", "expect"});
    auto eq = parse_equation(t, at);
    if (t.contains("solution") == t.contains("grid")) throw ManifestError(at, "give exactly one of solution and grid");
    PreparedTask p;
    if (t.contains("solution")) {
        if (t.contains("threshold")) throw ManifestError(sub(at, "threshold"), "only valid with a grid");
        auto s = parse_symbolic_solution(eq, t.at("solution"), sub(at, "solution"));
        bool expect = t.contains("expect") ? get_bool(t, "expect", at) : true;
        p.run = [eq, s, expect](const ZeroPolicy& policy) {
            TaskOutcome out;
            out.results["residual"] = strings(residual(eq, s));
            auto v = verdict_to_json("residual vanishes", residual_verdict(eq, s, policy));
            v["pass"] = v["pass"].get<bool>() == expect;
            add(out, v);
            return out;
        };
        return p;
    }
    if (t.contains("expect")) throw ManifestError(sub(at, "expect"), "only valid with a symbolic solution");
    auto path = std::filesystem::path(get_string(t, "grid", at));
    if (path.is_relative()) path = base / path;
    std::ifstream in(path);
    if (!in) throw ManifestError(sub(at, "grid"), "cannot open " + path.string());
    GridSolution g;
    try {
        g = read_grid_csv(in, eq);
    } catch (const std::exception& e) {
        throw ManifestError(sub(at, "grid"), e.what());
    }
    std::optional<double> threshold;
    if (t.contains("threshold")) threshold = get_double(t, "threshold", at);
    p.run = [eq, g, threshold](const ZeroPolicy&) {
        TaskOutcome out;
        auto fields = residual_grid(eq, g);
        out.results["points"] = g.grid.points;
        out.results["max_residual"] = json::array();
        for (std::size_t i = 0; i < fields.size(); ++i) {
            auto m = interior_max(fields[i]);
            out.results["max_residual"].push_back(format_ld(m));
            if (threshold) add(out, bound_verdict("fd residual " + std::to_string(i + 1), m, *threshold));
        }
        return out;
    };
    return p;
}

// ---- web-from-solution

PreparedTask prepare_web_from_solution(const json& t, const std::string& at) {
    check_fields(t, at, {"kind", "equation", "solution"}, {"name", "params"});
    auto eq = parse_equation(t, at);
    auto s = parse_symbolic_solution(eq, t.at("solution"), sub(at, "solution"));
    PreparedTask p;
    p.run = [eq, s](const ZeroPolicy& policy) {
        TaskOutcome out;
        SolutionWeb web;
        try {
            web = web_from_solution(eq, s, policy);
        } catch (const PdeError& e) {
            add(out, flag_verdict("solution accepted", false, e.what()));
            return out;
        }
        if (const auto* w = std::get_if<VeroneseWeb>(&web)) {
            out.results["alpha"] = strings(coefficient_matrix(*w));
            add(out, verdict_to_json("integrability", web_integrability(*w, WebMode::full(), policy).verdict));
        } else {
            const auto& k = std::get<KroneckerWebData>(web);
            out.results["phi1"] = strings(k.phi1);
            out.results["phi2"] = strings(k.phi2);
            add(out, flag_verdict("surjective", kronecker_surjective(k, 10, policy.seed)));
            add(out, verdict_to_json("integrability", kronecker_integrability(k, 7, policy).verdict));
        }
        add(out, flag_verdict("nondegenerate", solution_nondegenerate(eq, s, policy)));
        add(out, verdict_to_json("distinguished foliations", check_distinguished_foliations(eq, s, policy)));
        return out;
    };
    return p;
}

// ---- self-propelled

PreparedTask prepare_self_propelled(const json& t, const std::string& at) {
    check_fields(t, at, {"kind", "web"},
                 {"name", "phi", "family", "level", "seed", "grid", "samples", "threshold", "parameter"});
    auto web = parse_web_json(t.at("web"), sub(at, "web"));
    PreparedTask p;
    if (t.contains("phi")) {
        for (const char* k : {"family", "level", "seed", "grid", "samples", "threshold", "parameter"})
            if (t.contains(k)) throw ManifestError(sub(at, k), "not used with a symbolic phi");
        auto phi = parse_scalar(web.chart, t.at("phi"), sub(at, "phi"));
        p.run = [web, phi](const ZeroPolicy& policy) {
            TaskOutcome out;
            auto r = selfpropelled_residual(web, phi, policy);
            out.results["residual"] = strings(r);
            ZeroVerdict acc;
            acc.seed = policy.seed;
            acc.tolerance = policy.tolerance;
            for (const auto& x : r) merge_verdict(acc, zero_test(x, policy));
            add(out, verdict_to_json("self-propelled", acc));
            return out;
        };
        return p;
    }
    for (const char* k : {"family", "level", "seed", "grid"})
        if (!t.contains(k)) throw ManifestError(sub(at, k), "missing required field for a numeric solve");
    std::string parameter = t.contains("parameter") ? get_string(t, "parameter", at) : "lambda";
    auto F = parse_scalar(web.chart, t.at("family"), sub(at, "family"), {parameter});
    auto level = parse_rational(t.at("level"), sub(at, "level"));
    auto seed = static_cast<long double>(get_double(t, "seed", at));
    auto grid = parse_grid(t.at("grid"), sub(at, "grid"), web.chart.dim());
    int samples = t.contains("samples") ? static_cast<int>(get_int(t, "samples", at, 1, 1000)) : 20;
    double threshold = t.contains("threshold") ? get_double(t, "threshold", at) : 1e-6;
    p.run = [=](const ZeroPolicy& policy) {
        TaskOutcome out;
        SelfPropelledSolver solver(web.chart, F, Scalar(level), parameter);
        auto phi = selfpropelled_function(solver, solve_selfpropelled(solver, grid, seed));
        auto pts = interior_points(grid, samples, policy.seed);
        add(out, bound_verdict("fd residual", selfpropelled_fd_residual(web, phi, pts), threshold));
        out.results["grid_points"] = grid.points;
        out.results["sample_points"] = samples;
        return out;
    };
    return p;
}

// ---- extend

PreparedTask prepare_extend(const json& t, const std::string& at) {
    check_fields(t, at, {"kind", "web"},
                 {"name", "phis", "family", "levels", "seeds", "grid", "samples", "residual_max", "torsion_max",
                  "jacobian_min", "parameter"});
    auto web = parse_web_json(t.at("web"), sub(at, "web"));
    if (web.chart.dim() != 3) throw ManifestError(sub(at, "web"), "the extension needs a 3D web");
    PreparedTask p;
    if (t.contains("phis")) {
        for (const char* k : {"family", "levels", "seeds", "grid", "samples", "residual_max", "torsion_max", "jacobian_min",
                              "parameter"})
            if (t.contains(k)) throw ManifestError(sub(at, k), "not used with symbolic phis");
        const auto& js = t.at("phis");
        if (!js.is_array() || js.size() != 3) throw ManifestError(sub(at, "phis"), "expected three expressions");
        std::vector<Scalar> phis;
        for (std::size_t i = 0; i < 3; ++i) phis.push_back(parse_scalar(web.chart, js[i], sub(sub(at, "phis"), i)));
        p.run = [web, phis](const ZeroPolicy& policy) {
            TaskOutcome out;
            Extension e;
            try {
                e = extension_from_selfpropelled(pno_from_web(web, policy), phis, policy);
            } catch (const NijenhuisError& err) {
                add(out, flag_verdict("self-propelled", false, err.what()));
                return out;
            }
            out.results["tensor"] = strings(e.tensor.matrix());
            add(out, verdict_to_json("self-propelled", e.selfpropelled));
            add(out, verdict_to_json("restriction", e.restriction));
            add(out, verdict_to_json("torsion", e.torsion));
            return out;
        };
        return p;
    }
    for (const char* k : {"family", "levels", "seeds", "grid"})
        if (!t.contains(k)) throw ManifestError(sub(at, k), "missing required field for a numeric extension");
    std::string parameter = t.contains("parameter") ? get_string(t, "parameter", at) : "lambda";
    auto F = parse_scalar(web.chart, t.at("family"), sub(at, "family"), {parameter});
    auto levels = parse_rationals(t.at("levels"), sub(at, "levels"));
    if (levels.size() != 3) throw ManifestError(sub(at, "levels"), "expected three levels");
    const auto& js = t.at("seeds");
    if (!js.is_array() || js.size() != 3) throw ManifestError(sub(at, "seeds"), "expected three seed values");
    std::vector<long double> seeds;
    for (std::size_t i = 0; i < 3; ++i) {
        if (!js[i].is_number()) throw ManifestError(sub(sub(at, "seeds"), i), "expected a number");
        seeds.push_back(static_cast<long double>(js[i].get<double>()));
    }
    auto grid = parse_grid(t.at("grid"), sub(at, "grid"), 3);
    int samples = t.contains("samples") ? static_cast<int>(get_int(t, "samples", at, 1, 1000)) : 20;
    double rmax = t.contains("residual_max") ? get_double(t, "residual_max", at) : 1e-6;
    double tmax = t.contains("torsion_max") ? get_double(t, "torsion_max", at) : 1e-9;
    double jmin = t.contains("jacobian_min") ? get_double(t, "jacobian_min", at) : 1e-6;
    p.run = [=](const ZeroPolicy& policy) {
        TaskOutcome out;
        auto run = numeric_extension_pipeline(web, F, levels, seeds, grid, samples, policy.seed, parameter);
        out.results["grid_points"] = grid.points;
        out.results["sample_points"] = run.points.size();
        add(out, bound_verdict("self-propelled fd residual", run.residual, rmax));
        add(out, bound_verdict("jacobian", run.min_jacobian, jmin, false));
        add(out, bound_verdict("torsion", run.torsion, tmax));
        return out;
    };
    return p;
}

// ---- up-construct

PreparedTask prepare_up_construct(const json& t, const std::string& at) {
    check_fields(t, at, {"kind"}, {"name", "pno", "web", "points", "expect"});
    if (t.contains("pno") == t.contains("web")) throw ManifestError(at, "give exactly one of pno and web");
    std::optional<GeometricPNO> pno;
    std::optional<VeroneseWeb> web;
    if (t.contains("pno"))
        pno = parse_pno_json(t.at("pno"), sub(at, "pno"));
    else
        web = parse_web_json(t.at("web"), sub(at, "web"));
    int points = t.contains("points") ? static_cast<int>(get_int(t, "points", at, 0, 1000)) : 10;
    auto expect = expected_kind(t, at);
    PreparedTask p;
    p.run = [pno, web, points, expect](const ZeroPolicy& policy) {
        TaskOutcome out;
        GeometricPNO g = pno ? *pno : pno_from_web(*web, policy);
        std::pair<PoissonBivector, PoissonBivector> pair;
        try {
            pair = up_construction(g, policy);
        } catch (const PoissonError& e) {
            add(out, flag_verdict("partial Nijenhuis", false, e.what()));
            return out;
        }
        const auto& [e1, e2] = pair;
        out.results["eta1"] = bivector_to_json(e1);
        out.results["eta2"] = bivector_to_json(e2);
        add(out, verdict_to_json("jacobi eta1", check_jacobi(e1, policy)));
        add(out, verdict_to_json("jacobi eta2", check_jacobi(e2, policy)));
        add(out, verdict_to_json("compatibility", check_compatibility(e1, e2, policy)));
        const std::size_t n = g.chart.dim(), r = g.rank();
        bool isotropic = true;
        for (const auto* e : {&e1, &e2})
            for (const auto& [ij, v] : e->components()) isotropic = isotropic && ij.second >= n;
        add(out, flag_verdict("fibers isotropic", isotropic));

        std::mt19937_64 rng(policy.seed);
        json pts = json::array();
        int matched = 0, fiber = 0, done = 0;
        for (int tries = 0; done < points && tries < 20 * points + 20; ++tries) {
            auto x = random_point(rng, n + r);
            BlockStructure s;
            std::vector<std::vector<mpq_class>> bl;
            try {
                s = pointwise_classification(e1, e2, x);
                bl = bilagrangian_at(e1, e2, x, policy.seed + static_cast<std::uint64_t>(tries));
            } catch (const PoissonError&) {
                continue;
            }
            ++done;
            auto kind = lowercase(kind_name(classify(s).kind));
            if (expect && kind == *expect) ++matched;
            // Fiber: exactly the span of the d/dxi directions.
            bool is_fiber = bl.size() == r;
            GMatrix m = zero_matrix(n + r, bl.size());
            for (std::size_t j = 0; j < bl.size(); ++j)
                for (std::size_t i = 0; i < n + r; ++i) {
                    m[i][j] = Gaussian(bl[j][i]);
                    if (i < n && bl[j][i] != 0) is_fiber = false;
                }
            if (is_fiber && exact_rank(m) != r) is_fiber = false;
            if (is_fiber) ++fiber;
            pts.push_back({{"point", point_json(x)}, {"blocks", s.str()}, {"kind", kind}, {"bilagrangian_is_fiber", is_fiber}});
        }
        out.results["pointwise"] = pts;
        if (expect) {
            add(out, flag_verdict("pointwise " + *expect, done == points && matched == done,
                                  std::to_string(matched) + "/" + std::to_string(done) + " points"));
            if (*expect == "kronecker")
                add(out, flag_verdict("bilagrangian is the fiber", fiber == done,
                                      std::to_string(fiber) + "/" + std::to_string(done) + " points"));
        }
        return out;
    };
    return p;
}

// ---- classify-pair

PreparedTask prepare_classify_pair(const json& t, const std::string& at) {
    check_fields(t, at, {"kind", "bivectors", "point"}, {"name", "expect"});
    const auto& bs = t.at("bivectors");
    if (!bs.is_array() || bs.size() != 2) throw ManifestError(sub(at, "bivectors"), "expected two bivectors");
    auto a = parse_bivector_json(bs[0], sub(sub(at, "bivectors"), std::size_t{0}));
    auto b = parse_bivector_json(bs[1], sub(sub(at, "bivectors"), std::size_t{1}));
    if (a.chart() != b.chart()) throw ManifestError(sub(at, "bivectors"), "the bivectors use different charts");
    auto point = parse_rationals(t.at("point"), sub(at, "point"));
    if (point.size() != a.dim()) throw ManifestError(sub(at, "point"), "expected " + std::to_string(a.dim()) + " coordinates");
    auto expect = expected_kind(t, at);
    PreparedTask p;
    p.run = [a, b, point, expect](const ZeroPolicy& policy) {
        TaskOutcome out;
        add(out, verdict_to_json("jacobi first", check_jacobi(a, policy)));
        add(out, verdict_to_json("jacobi second", check_jacobi(b, policy)));
        add(out, verdict_to_json("compatibility", check_compatibility(a, b, policy)));
        auto s = pointwise_classification(a, b, point);
        out.results = structure_json(s);
        json bl = json::array();
        for (const auto& v : bilagrangian_at(a, b, point, policy.seed)) bl.push_back(point_json(v));
        out.results["bilagrangian"] = bl;
        if (expect) add(out, flag_verdict("expected kind", lowercase(kind_name(classify(s).kind)) == *expect));
        return out;
    };
    return p;
}

}  // namespace

PreparedTask prepare_task(const json& t, const std::string& at, const std::filesystem::path& base) {
    if (!t.is_object()) throw ManifestError(at, "expected a task object");
    if (!t.contains("kind")) throw ManifestError(sub(at, "kind"), "missing required field");
    auto kind = get_string(t, "kind", at);
    PreparedTask p;
    if (kind == "jk")
        p = prepare_jk(t, at);
    else if (kind == "pno-check")
        p = prepare_pno_check(t, at);
    else if (kind == "web-check")
        p = prepare_web_check(t, at);
    else if (kind == "pde-residual")
        p = prepare_pde_residual(t, at, base);
    else if (kind == "web-from-solution")
        p = prepare_web_from_solution(t, at);
    else if (kind == "self-propelled")
        p = prepare_self_propelled(t, at);
    else if (kind == "extend")
        p = prepare_extend(t, at);
    else if (kind == "up-construct")
        p = prepare_up_construct(t, at);
    else if (kind == "classify-pair")
        p = prepare_classify_pair(t, at);
    else
        throw ManifestError(sub(at, "kind"), "unknown task kind " + kind);
    p.kind = kind;
    p.name = task_name(t, at, kind);
    p.echo = t;
    return p;
}

}  // namespace kronweb::cli::detail
