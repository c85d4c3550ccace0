#include "internal.hpp"

#include <random>

namespace kronweb::cli {

namespace {

json flat_web_json() {
    return {{"chart", {"x1", "x2", "x3"}}, {"alpha", {{"1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}}}};
}

// Web of the Hirota solution x1 x2 x3 with eigenvalues 1, 2, 3.
json hirota_web_json() {
    return {{"chart", {"x1", "x2", "x3"}},
            {"alpha", {{"6*x2*x3", "3*x1*x3", "2*x1*x2"}, {"-5*x2*x3", "-4*x1*x3", "-3*x1*x2"}, {"x2*x3", "x1*x3", "x1*x2"}}}};
}

json rank_one_pno_json() {
    return {{"chart", {"x1", "x2", "x3"}}, {"fields", {{"1", "0", "0"}}}, {"images", {{"0", "1", "0"}}}};
}

json hirota_demo() {
    json tasks = json::array();
    tasks.push_back({{"kind", "pde-residual"}, {"name", "hirota exp"}, {"equation", "A3"}, {"params", {1, 2, 3}},
                     {"solution", "exp(x1+x2+x3)"}});
    tasks.push_back({{"kind", "web-from-solution"}, {"name", "hirota exp web"}, {"equation", "A3"}, {"params", {1, 2, 3}},
                     {"solution", "exp(x1+x2+x3)"}});
    tasks.push_back({{"kind", "pde-residual"}, {"name", "coefficient form"}, {"equation", "H"}, {"params", {1, 2, -3}},
                     {"solution", "x1*x2*x3"}});
    tasks.push_back({{"kind", "web-from-solution"}, {"name", "hirota product web"}, {"equation", "A3"},
                     {"params", {1, 2, 3}}, {"solution", "x1*x2*x3"}});
    tasks.push_back({{"kind", "web-check"}, {"name", "hirota product web, sampled"}, {"web", hirota_web_json()},
                     {"mode", "sampled"}});
    tasks.push_back({{"kind", "pde-residual"}, {"name", "not a solution"}, {"equation", "A3"}, {"params", {1, 2, 3}},
                     {"solution", "x1^2*x2+x3"}, {"expect", false}});
    return {{"schema", schema_version}, {"tasks", tasks}};
}

json extension_demo() {
    json tasks = json::array();
    tasks.push_back({{"kind", "extend"},
                     {"name", "flat web"},
                     {"web", flat_web_json()},
                     {"family", "x1+lambda*x2+lambda^2*x3"},
                     {"levels", {3, 5, 4}},
                     {"seeds", {1.0, 1.56, -2.3}},
                     {"grid", {{"lo", 0.5}, {"hi", 1.5}, {"points", 21}}}});
    tasks.push_back({{"kind", "extend"},
                     {"name", "hirota web"},
                     {"web", hirota_web_json()},
                     {"family", "(lambda-2)*(lambda-3)*log(x1)+(lambda-1)*(lambda-3)*log(x2)+(lambda-1)*(lambda-2)*log(x3)"},
                     {"levels", {0, 1, 1}},
                     {"seeds", {2.58, 2.9, 1.1}},
                     {"grid", {{"lo", 1.5}, {"hi", 2.5}, {"points", 21}}}});
    tasks.push_back({{"kind", "extend"}, {"name", "flat web, constant phis"}, {"web", flat_web_json()}, {"phis", {"1", "2", "3"}}});
    return {{"schema", schema_version}, {"tasks", tasks}};
}

json up_construct_demo() {
    json tasks = json::array();
    tasks.push_back({{"kind", "up-construct"}, {"name", "rank-one d1 -> d2"}, {"pno", rank_one_pno_json()}, {"expect", "kronecker"}});
    tasks.push_back({{"kind", "up-construct"}, {"name", "flat web"}, {"web", flat_web_json()}, {"expect", "kronecker"}});
    json eta1 = {{"chart", {"x1", "x2", "x3", "xi1"}}, {"components", {{{"i", 1}, {"j", 4}, {"expr", "1"}}}}};
    json eta2 = {{"chart", {"x1", "x2", "x3", "xi1"}}, {"components", {{{"i", 2}, {"j", 4}, {"expr", "1"}}}}};
    tasks.push_back({{"kind", "classify-pair"},
                     {"name", "rank-one pair"},
                     {"bivectors", {eta1, eta2}},
                     {"point", {1, 2, 3, 4}},
                     {"expect", "kronecker"}});
    return {{"schema", schema_version}, {"tasks", tasks}};
}

json pencil_demo() {
    json tasks = json::array();
    std::mt19937_64 rng(2024);
    for (int k = 0; tasks.size() < 50 && k < 500; ++k) {
        auto s = random_block_structure(rng, 6);
        s.normalize();
        if (s.dim_v() == 0 || s.dim_w() == 0) continue;
        auto p = synthesize_pencil(s, static_cast<std::uint64_t>(k + 1));
        auto rows = [](const GMatrix& m) {
            json out = json::array();
            for (const auto& r : m) {
                json row = json::array();
                for (const auto& g : r) row.push_back(g.str());
                out.push_back(row);
            }
            return out;
        };
        tasks.push_back({{"kind", "jk"},
                         {"name", "synthesized " + std::to_string(tasks.size() + 1)},
                         {"S1", rows(p.S1)},
                         {"S2", rows(p.S2)},
                         {"expect", s.str()}});
    }
    return {{"schema", schema_version}, {"tasks", tasks}};
}

}  // namespace

const std::vector<std::string>& demo_names() {
    static const std::vector<std::string> n{"hirota", "extension", "up-construct", "pencil"};
    return n;
}

json demo_manifest(const std::string& name) {
    if (name == "hirota") return hirota_demo();
    if (name == "extension") return extension_demo();
    if (name == "up-construct") return up_construct_demo();
    if (name == "pencil") return pencil_demo();
    throw ManifestError("demo", "unknown demo " + name);
}

RunResult run_demo(const std::string& name, const Overrides& overrides) {
    return run_manifest(parse_manifest(demo_manifest(name), overrides));
}

}  // namespace kronweb::cli
