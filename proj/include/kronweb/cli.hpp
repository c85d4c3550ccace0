#pragma once

#include "kronweb/pde.hpp"
#include "kronweb/poisson.hpp"

#include "json.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace kronweb::cli {

using json = nlohmann::ordered_json;

inline constexpr const char* toolkit_version = "0.1.0";
inline constexpr int schema_version = 1;

enum ExitCode : int { ok = 0, verdict_failure = 1, validation_failure = 2, internal_error = 3 };

// Validation failure at a JSON path such as "tasks[0].S1[1][2]".
struct ManifestError : std::runtime_error {
    std::string field;
    ManifestError(std::string field, const std::string& message);
};

// Command-line overrides of the manifest policy.
struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<double> tolerance;
    std::optional<int> samples;
    std::optional<std::string> out;
    bool timing = false;
};

struct TaskOutcome {
    json results = json::object();
    json verdicts = json::array();
    bool pass = true;
};

// A validated task: its parsed inputs are captured by the closure.
struct PreparedTask {
    std::string kind;
    std::string name;
    json echo;
    std::function<TaskOutcome(const ZeroPolicy&)> run;
};

struct Manifest {
    ZeroPolicy policy;
    std::optional<std::string> output;
    std::vector<PreparedTask> tasks;
    bool timing = false;
};

const std::vector<std::string>& task_kinds();

// Throws ManifestError; relative paths inside tasks resolve against base_dir.
Manifest parse_manifest(const json& doc, const Overrides& overrides = {}, const std::filesystem::path& base_dir = ".");
Manifest load_manifest(const std::filesystem::path& path, const Overrides& overrides = {});

struct RunResult {
    json report;
    int exit_code = ok;
    std::vector<std::string> summary;
};

RunResult run_manifest(const Manifest& m);

const std::vector<std::string>& demo_names();
json demo_manifest(const std::string& name);
RunResult run_demo(const std::string& name, const Overrides& overrides = {});

// Writes the report when the manifest or the overrides name an output path.
void write_report(const RunResult& r, const std::filesystem::path& path);

// Payload formats; `at` is the JSON path used in diagnostics.
Chart parse_chart(const json& j, const std::string& at);
mpq_class parse_rational(const json& j, const std::string& at);
std::vector<mpq_class> parse_rationals(const json& j, const std::string& at);
Pencil parse_pencil_json(const json& s1, const json& s2, const std::string& at);
VeroneseWeb parse_web_json(const json& j, const std::string& at);
GeometricPNO parse_pno_json(const json& j, const std::string& at);
PoissonBivector parse_bivector_json(const json& j, const std::string& at);
json bivector_to_json(const PoissonBivector& p);
json verdict_to_json(const std::string& name, const ZeroVerdict& v);

}  // namespace kronweb::cli
