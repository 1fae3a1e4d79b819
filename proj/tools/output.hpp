#pragma once

// Deterministic text output shared by the subcommands.

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "stylo/gridsearch.hpp"

namespace stylo::cli {

using Json = nlohmann::ordered_json;

// Shortest text that round-trips the double.
std::string format_number(double v);

// Parses "1..10", "1,2,3" or a mix such as "0..3,6". Throws ConfigError.
std::vector<std::size_t> parse_range(const std::string& text);
std::string format_range(const std::vector<std::size_t>& values);

// Parses "1,2,3,1+2" into removal sets. Throws ConfigError.
std::vector<std::vector<std::size_t>> parse_removals(const std::string& text);

// Header "window,n1,n2,..."; one row per window width.
std::string matrix_csv(const Matrix& m, const std::vector<std::size_t>& windows,
                       const std::vector<std::size_t>& ngrams);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const Json& j);

}  // namespace stylo::cli
