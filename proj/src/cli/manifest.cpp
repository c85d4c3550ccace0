#include "internal.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace kronweb::cli {

using namespace detail;

ManifestError::ManifestError(std::string f, const std::string& message)
    : std::runtime_error(f.empty() ? message : f + ": " + message), field(std::move(f)) {}

namespace detail {

std::string sub(const std::string& at, const char* key) { return at.empty() ? std::string(key) : at + "." + key; }
std::string sub(const std::string& at, std::size_t index) { return at + "[" + std::to_string(index) + "]"; }

void check_fields(const json& obj, const std::string& at, std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional) {
    if (!obj.is_object()) throw ManifestError(at, "expected an object");
    for (const char* k : required)
        if (!obj.contains(k)) throw ManifestError(sub(at, k), "missing required field");
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* k : required) known = known || key == k;
        for (const char* k : optional) known = known || key == k;
        if (!known) throw ManifestError(sub(at, key.c_str()), "unknown field");
    }
}

std::string get_string(const json& obj, const char* key, const std::string& at) {
    const auto& v = obj.at(key);
    if (!v.is_string()) throw ManifestError(sub(at, key), "expected a string");
    return v.get<std::string>();
}

long get_int(const json& obj, const char* key, const std::string& at, long lo, long hi) {
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) throw ManifestError(sub(at, key), "expected an integer");
    long x = v.get<long>();
    if (x < lo || x > hi)
        throw ManifestError(sub(at, key), "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return x;
}

double get_double(const json& obj, const char* key, const std::string& at) {
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ManifestError(sub(at, key), "expected a number");
    double x = v.get<double>();
    if (!std::isfinite(x)) throw ManifestError(sub(at, key), "must be finite");
    return x;
}

bool get_bool(const json& obj, const char* key, const std::string& at) {
    const auto& v = obj.at(key);
    if (!v.is_boolean()) throw ManifestError(sub(at, key), "expected true or false");
    return v.get<bool>();
}

Scalar parse_scalar(const Chart& chart, const json& j, const std::string& at, const VarList& extra) {
    std::string text;
    if (j.is_string())
        text = j.get<std::string>();
    else if (j.is_number_integer())
        text = std::to_string(j.get<long>());
    else
        throw ManifestError(at, "expected an expression string");
    try {
        return chart.parse(text, extra);
    } catch (const ParseError& e) {
        throw ManifestError(at, e.what());
    } catch (const std::exception& e) {
        throw ManifestError(at, std::string("cannot use expression: ") + e.what());
    }
}

std::vector<Scalar> parse_vector(const Chart& chart, const json& j, const std::string& at) {
    if (!j.is_array()) throw ManifestError(at, "expected a list of expressions");
    if (j.size() != chart.dim())
        throw ManifestError(at, "expected " + std::to_string(chart.dim()) + " components, got " + std::to_string(j.size()));
    std::vector<Scalar> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_scalar(chart, j[i], sub(at, i)));
    return out;
}

std::vector<std::vector<std::string>> parse_string_matrix(const json& j, const std::string& at) {
    if (!j.is_array()) throw ManifestError(at, "expected a list of rows");
    std::vector<std::vector<std::string>> out;
    for (std::size_t r = 0; r < j.size(); ++r) {
        const auto& row = j[r];
        if (!row.is_array()) throw ManifestError(sub(at, r), "expected a row");
        if (!out.empty() && row.size() != out[0].size()) throw ManifestError(sub(at, r), "rows differ in length");
        std::vector<std::string> cells;
        for (std::size_t c = 0; c < row.size(); ++c) {
            const auto& v = row[c];
            if (v.is_string())
                cells.push_back(v.get<std::string>());
            else if (v.is_number_integer())
                cells.push_back(std::to_string(v.get<long>()));
            else
                throw ManifestError(sub(sub(at, r), c), "expected a number string such as \"3/2\"");
        }
        out.push_back(cells);
    }
    return out;
}

std::string format_ld(long double v) {
    std::ostringstream os;
    os.precision(6);
    os << std::scientific << static_cast<double>(v);
    return os.str();
}

json bound_verdict(const std::string& name, long double value, long double bound, bool below) {
    bool pass = std::isfinite(static_cast<double>(value)) && (below ? value <= bound : value > bound);
    json v;
    v["name"] = name;
    v["pass"] = pass;
    v["value"] = format_ld(value);
    v[below ? "max" : "min"] = format_ld(bound);
    return v;
}

}  // namespace detail

Chart parse_chart(const json& j, const std::string& at) {
    if (j.is_number_integer()) {
        long n = j.get<long>();
        if (n < 1 || n > 12) throw ManifestError(at, "dimension must lie in [1, 12]");
        return Chart::standard(static_cast<std::size_t>(n));
    }
    if (!j.is_array() || j.empty()) throw ManifestError(at, "expected a list of coordinate names");
    VarList names;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_string()) throw ManifestError(sub(at, i), "expected a coordinate name");
        auto n = j[i].get<std::string>();
        bool ok = !n.empty() && std::isalpha(static_cast<unsigned char>(n[0]));
        for (char ch : n) ok = ok && (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_');
        if (!ok) throw ManifestError(sub(at, i), "not an identifier: " + n);
        if (!seen.insert(n).second) throw ManifestError(sub(at, i), "duplicate coordinate " + n);
        names.push_back(n);
    }
    return Chart(names);
}

mpq_class parse_rational(const json& j, const std::string& at) {
    if (j.is_number_integer()) return mpq_class(j.get<long>());
    if (!j.is_string()) throw ManifestError(at, "expected a rational such as \"3/2\"");
    try {
        auto g = parse_gaussian(j.get<std::string>());
        if (!g.is_real()) throw ManifestError(at, "expected a real rational");
        return g.re;
    } catch (const ManifestError&) {
        throw;
    } catch (const std::exception& e) {
        throw ManifestError(at, e.what());
    }
}

std::vector<mpq_class> parse_rationals(const json& j, const std::string& at) {
    if (!j.is_array()) throw ManifestError(at, "expected a list of rationals");
    std::vector<mpq_class> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_rational(j[i], sub(at, i)));
    return out;
}

Pencil parse_pencil_json(const json& s1, const json& s2, const std::string& at) {
    auto a = parse_string_matrix(s1, sub(at, "S1"));
    auto b = parse_string_matrix(s2, sub(at, "S2"));
    if (a.size() != b.size() || (!a.empty() && a[0].size() != b[0].size()))
        throw ManifestError(sub(at, "S2"), "S1 and S2 must have the same shape");
    for (const auto& [m, key] : {std::pair{&a, "S1"}, std::pair{&b, "S2"}})
        for (std::size_t r = 0; r < m->size(); ++r)
            for (std::size_t c = 0; c < (*m)[r].size(); ++c) try {
                    parse_gaussian((*m)[r][c]);
                } catch (const std::exception& e) {
                    throw ManifestError(sub(sub(sub(at, key), r), c), e.what());
                }
    try {
        return parse_pencil(a, b);
    } catch (const std::exception& e) {
        throw ManifestError(at, e.what());
    }
}

VeroneseWeb parse_web_json(const json& j, const std::string& at) {
    check_fields(j, at, {"chart", "alpha"});
    auto chart = parse_chart(j.at("chart"), sub(at, "chart"));
    const auto& rows = j.at("alpha");
    if (!rows.is_array() || rows.size() != chart.dim())
        throw ManifestError(sub(at, "alpha"), "expected " + std::to_string(chart.dim()) + " coframe rows");
    VeroneseWeb w{chart, {}};
    for (std::size_t k = 0; k < rows.size(); ++k)
        w.alpha.push_back(Form::one_form(chart, parse_vector(chart, rows[k], sub(sub(at, "alpha"), k))));
    return w;
}

GeometricPNO parse_pno_json(const json& j, const std::string& at) {
    check_fields(j, at, {"chart", "fields"}, {"images", "tensor"});
    if (j.contains("images") == j.contains("tensor")) throw ManifestError(at, "give exactly one of images and tensor");
    auto chart = parse_chart(j.at("chart"), sub(at, "chart"));
    GeometricPNO p{chart, {}, {}};
    const auto& fields = j.at("fields");
    if (!fields.is_array() || fields.empty()) throw ManifestError(sub(at, "fields"), "expected a list of vector fields");
    for (std::size_t k = 0; k < fields.size(); ++k)
        p.fields.emplace_back(chart, parse_vector(chart, fields[k], sub(sub(at, "fields"), k)));
    if (j.contains("images")) {
        const auto& images = j.at("images");
        if (!images.is_array() || images.size() != fields.size())
            throw ManifestError(sub(at, "images"), "expected one image per spanning field");
        for (std::size_t k = 0; k < images.size(); ++k)
            p.images.emplace_back(chart, parse_vector(chart, images[k], sub(sub(at, "images"), k)));
    } else {
        const auto& rows = j.at("tensor");
        if (!rows.is_array() || rows.size() != chart.dim())
            throw ManifestError(sub(at, "tensor"), "expected " + std::to_string(chart.dim()) + " rows");
        RFMatrix m;
        for (std::size_t r = 0; r < rows.size(); ++r) m.push_back(parse_vector(chart, rows[r], sub(sub(at, "tensor"), r)));
        OneOneTensor n(chart, m);
        for (const auto& z : p.fields) p.images.push_back(n.apply(z));
    }
    return p;
}

PoissonBivector parse_bivector_json(const json& j, const std::string& at) {
    check_fields(j, at, {"chart", "components"});
    auto chart = parse_chart(j.at("chart"), sub(at, "chart"));
    PoissonBivector p(chart);
    const auto& comps = j.at("components");
    if (!comps.is_array()) throw ManifestError(sub(at, "components"), "expected a list of components");
    std::set<std::pair<long, long>> seen;
    const long n = static_cast<long>(chart.dim());
    for (std::size_t k = 0; k < comps.size(); ++k) {
        auto here = sub(sub(at, "components"), k);
        const auto& c = comps[k];
        check_fields(c, here, {"i", "j", "expr"});
        long i = get_int(c, "i", here, 1, n), jj = get_int(c, "j", here, 1, n);
        if (i == jj) throw ManifestError(here, "diagonal components vanish");
        if (!seen.insert({std::min(i, jj), std::max(i, jj)}).second) throw ManifestError(here, "component given twice");
        p.set(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(jj - 1), parse_scalar(chart, c.at("expr"), sub(here, "expr")));
    }
    return p;
}

json bivector_to_json(const PoissonBivector& p) {
    json out;
    out["chart"] = p.chart().names();
    out["components"] = json::array();
    for (const auto& [ij, v] : p.components())
        out["components"].push_back({{"i", ij.first + 1}, {"j", ij.second + 1}, {"expr", v.str()}});
    return out;
}

json verdict_to_json(const std::string& name, const ZeroVerdict& v) {
    json out;
    out["name"] = name;
    out["pass"] = v.zero();
    out["tag"] = v.tag_name();
    if (v.tag != ZeroVerdict::Tag::ProvenZero) {
        out["samples"] = v.samples;
        out["tolerance"] = v.tolerance;
        out["seed"] = v.seed;
    }
    if (!v.witness.empty()) {
        json w = json::object();
        for (const auto& [var, value] : v.witness) w[var] = value;
        out["witness"] = w;
        out["value"] = format_ld(v.witness_value);
    }
    if (!v.note.empty()) out["note"] = v.note;
    return out;
}

const std::vector<std::string>& task_kinds() {
    static const std::vector<std::string> k{"jk",         "pno-check", "web-check",    "pde-residual", "web-from-solution",
                                            "self-propelled", "extend", "up-construct", "classify-pair"};
    return k;
}

Manifest parse_manifest(const json& doc, const Overrides& o, const std::filesystem::path& base_dir) {
    check_fields(doc, "", {"schema", "tasks"}, {"policy", "output"});
    if (!doc.at("schema").is_number_integer() || doc.at("schema").get<long>() != schema_version)
        throw ManifestError("schema", "unsupported schema (expected 1)");
    Manifest m;
    if (doc.contains("policy")) {
        const auto& p = doc.at("policy");
        check_fields(p, "policy", {}, {"seed", "tolerance", "samples"});
        if (p.contains("seed")) m.policy.seed = static_cast<std::uint64_t>(get_int(p, "seed", "policy", 0, 1L << 62));
        if (p.contains("tolerance")) {
            m.policy.tolerance = get_double(p, "tolerance", "policy");
            if (m.policy.tolerance <= 0) throw ManifestError("policy.tolerance", "must be positive");
        }
        if (p.contains("samples")) m.policy.samples = static_cast<int>(get_int(p, "samples", "policy", 1, 10000));
    }
    if (o.seed) m.policy.seed = *o.seed;
    if (o.tolerance) m.policy.tolerance = *o.tolerance;
    if (o.samples) m.policy.samples = *o.samples;
    if (doc.contains("output")) m.output = get_string(doc, "output", "");
    if (o.out) m.output = *o.out;
    m.timing = o.timing;
    const auto& tasks = doc.at("tasks");
    if (!tasks.is_array() || tasks.empty()) throw ManifestError("tasks", "expected a non-empty list of tasks");
    for (std::size_t i = 0; i < tasks.size(); ++i) m.tasks.push_back(prepare_task(tasks[i], sub("tasks", i), base_dir));
    return m;
}

Manifest load_manifest(const std::filesystem::path& path, const Overrides& o) {
    std::ifstream in(path);
    if (!in) throw ManifestError("", "cannot open manifest " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ManifestError("", std::string("malformed JSON: ") + e.what());
    }
    auto base = path.parent_path();
    return parse_manifest(doc, o, base.empty() ? std::filesystem::path(".") : base);
}

RunResult run_manifest(const Manifest& m) {
    RunResult r;
    r.report["schema"] = schema_version;
    r.report["toolkit"] = "kronweb";
    r.report["version"] = toolkit_version;
    r.report["policy"] = {{"seed", m.policy.seed}, {"tolerance", m.policy.tolerance}, {"samples", m.policy.samples}};
    r.report["tasks"] = json::array();
    bool all = true, internal = false;
    for (const auto& t : m.tasks) {
        json entry;
        entry["kind"] = t.kind;
        entry["name"] = t.name;
        entry["input"] = t.echo;
        auto start = std::chrono::steady_clock::now();
        try {
            auto out = t.run(m.policy);
            entry["verdicts"] = out.verdicts;
            entry["results"] = out.results;
            entry["pass"] = out.pass;
            all = all && out.pass;
            r.summary.push_back(std::string(out.pass ? "PASS " : "FAIL ") + t.kind + " " + t.name);
        } catch (const std::exception& e) {
            entry["pass"] = false;
            entry["error"] = e.what();
            internal = true;
            r.summary.push_back("ERROR " + t.kind + " " + t.name + ": " + e.what());
        }
        if (m.timing)
            entry["timing_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        r.report["tasks"].push_back(entry);
    }
    r.report["pass"] = all && !internal;
    r.exit_code = internal ? internal_error : (all ? ok : verdict_failure);
    std::size_t passed = 0;
    for (const auto& e : r.report["tasks"]) passed += e["pass"].get<bool>() ? 1 : 0;
    r.summary.push_back(std::to_string(passed) + "/" + std::to_string(m.tasks.size()) + " tasks passed");
    return r;
}

void write_report(const RunResult& r, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write report " + path.string());
    out << r.report.dump(2) << "\n";
}

}  // namespace kronweb::cli
