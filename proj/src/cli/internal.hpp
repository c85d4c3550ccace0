#pragma once

#include "kronweb/cli.hpp"

#include <initializer_list>

namespace kronweb::cli::detail {

// Object check: required keys present, nothing outside required + optional.
void check_fields(const json& obj, const std::string& at, std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional = {});

std::string get_string(const json& obj, const char* key, const std::string& at);
long get_int(const json& obj, const char* key, const std::string& at, long lo, long hi);
double get_double(const json& obj, const char* key, const std::string& at);
bool get_bool(const json& obj, const char* key, const std::string& at);

Scalar parse_scalar(const Chart& chart, const json& j, const std::string& at, const VarList& extra = {});
std::vector<Scalar> parse_vector(const Chart& chart, const json& j, const std::string& at);
std::vector<std::vector<std::string>> parse_string_matrix(const json& j, const std::string& at);

std::string sub(const std::string& at, const char* key);
std::string sub(const std::string& at, std::size_t index);

PreparedTask prepare_task(const json& task, const std::string& at, const std::filesystem::path& base_dir);

// Pass/fail entry for a numeric quantity against a bound.
json bound_verdict(const std::string& name, long double value, long double bound, bool below = true);
std::string format_ld(long double v);

}  // namespace kronweb::cli::detail
