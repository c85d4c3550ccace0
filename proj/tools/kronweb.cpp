#include "kronweb/cli.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace kronweb;
using namespace kronweb::cli;

namespace {

void add_policy_flags(CLI::App* app, Overrides& o) {
    app->add_option("--seed", o.seed, "RNG seed for sampling and random points (default 1)");
    app->add_option("--tol", o.tolerance, "Relative tolerance of sampled zero tests (default 1e-9)")
        ->check(CLI::PositiveNumber);
    app->add_option("--samples", o.samples, "Sample count of probabilistic zero tests (default 12)")
        ->check(CLI::Range(1, 10000));
    app->add_option("--out", o.out, "Write the JSON report to this path");
    app->add_flag("--timing", o.timing, "Add per-task wall time to the report (makes reports non-reproducible)");
}

int finish(const RunResult& r, const std::optional<std::string>& out) {
    for (const auto& line : r.summary) std::cout << line << "\n";
    if (out) write_report(r, *out);
    return r.exit_code;
}

std::vector<mpq_class> parse_params(const std::string& text) {
    std::vector<mpq_class> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        auto g = parse_gaussian(item);
        if (!g.is_real()) throw ManifestError("--params", "expected real rationals");
        out.push_back(g.re);
    }
    return out;
}

json params_json(const std::string& text) {
    json out = json::array();
    for (const auto& q : parse_params(text)) out.push_back(q.get_str());
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Verification toolkit for Kronecker webs, partial Nijenhuis operators and bihamiltonian pairs"};
    app.require_subcommand(1);

    Overrides o;
    std::string manifest_path, demo_name, eq = "A3", params, grid_path, solution;
    std::optional<double> threshold;
    double lo = 0.5, hi = 1.5;
    std::size_t points = 11;

    auto* run = app.add_subcommand("run", "Run the tasks of a JSON manifest");
    run->add_option("manifest", manifest_path, "Manifest path")->required();
    add_policy_flags(run, o);

    auto* validate = app.add_subcommand("validate", "Check a manifest without running it");
    validate->add_option("manifest", manifest_path, "Manifest path")->required();

    auto* demo = app.add_subcommand("demo", "Run a bundled manifest");
    demo->add_option("name", demo_name, "Demo name")->required()->check(CLI::IsMember(demo_names()));
    add_policy_flags(demo, o);

    auto* residual = app.add_subcommand("residual", "Finite-difference residual of a gridded solution (CSV)");
    residual->add_option("grid", grid_path, "CSV with header x1,...,xd,f (f1,f2 in 4D)")->required();
    residual->add_option("--eq", eq, "Equation symbol")->capture_default_str();
    residual->add_option("--params", params, "Comma-separated constants, e.g. 1,2,3");
    residual->add_option("--threshold", threshold, "Fail when the interior residual exceeds this bound");
    residual->add_option("--out", o.out, "Write the JSON report to this path");

    auto* sample = app.add_subcommand("sample", "Write a symbolic solution sampled on a uniform grid as CSV");
    sample->add_option("--eq", eq, "Equation symbol")->capture_default_str();
    sample->add_option("--params", params, "Comma-separated constants, e.g. 1,2,3");
    sample->add_option("--solution", solution, "Solution expression(s), ';'-separated in 4D")->required();
    sample->add_option("--lo", lo, "Lower corner of the cube")->capture_default_str();
    sample->add_option("--hi", hi, "Upper corner of the cube")->capture_default_str();
    sample->add_option("--points", points, "Points per axis")->capture_default_str()->check(CLI::Range(3, 201));
    sample->add_option("--out", o.out, "CSV path (standard output when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? ok : validation_failure;
    }

    try {
        if (*run) {
            auto m = load_manifest(manifest_path, o);
            return finish(run_manifest(m), m.output);
        }
        if (*validate) {
            auto m = load_manifest(manifest_path);
            std::cout << "valid manifest, " << m.tasks.size() << " task(s)\n";
            return ok;
        }
        if (*demo) {
            auto m = parse_manifest(demo_manifest(demo_name), o);
            return finish(run_manifest(m), m.output);
        }
        if (*residual) {
            json task = {{"kind", "pde-residual"}, {"name", grid_path}, {"equation", eq}, {"params", params_json(params)},
                         {"grid", std::filesystem::absolute(grid_path).string()}};
            if (threshold) task["threshold"] = *threshold;
            auto m = parse_manifest({{"schema", schema_version}, {"tasks", {task}}}, o);
            auto r = run_manifest(m);
            for (const auto& v : r.report["tasks"][0]["results"]["max_residual"]) std::cout << "max residual " << v.get<std::string>() << "\n";
            return finish(r, m.output);
        }
        if (*sample) {
            EquationSpec spec;
            SymbolicSolution s;
            try {
                spec = make_equation(eq, parse_params(params));
                std::vector<std::string> texts;
                std::stringstream ss(solution);
                std::string item;
                while (std::getline(ss, item, ';')) texts.push_back(item);
                s = parse_solution(spec, texts);
            } catch (const ManifestError&) {
                throw;
            } catch (const std::exception& e) {
                throw ManifestError("", e.what());
            }
            auto g = sample_solution(spec, s, Grid::cube(spec.dim, lo, hi, points));
            if (o.out) {
                std::ofstream out(*o.out);
                if (!out) throw std::runtime_error("cannot write " + *o.out);
                write_grid_csv(out, g);
            } else {
                write_grid_csv(std::cout, g);
            }
            return ok;
        }
    } catch (const ManifestError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return validation_failure;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return internal_error;
    }
    return internal_error;
}
