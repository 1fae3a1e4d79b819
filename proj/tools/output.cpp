#include "output.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "stylo/error.hpp"

namespace stylo::cli {
namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

std::size_t parse_count(const std::string& text, const std::string& context) {
  std::size_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ConfigError("bad " + context + " \"" + text + "\"");
  }
  return v;
}

}  // namespace

std::string format_number(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::vector<std::size_t> parse_range(const std::string& text) {
  std::vector<std::size_t> out;
  if (text.empty()) throw ConfigError("empty range");
  for (const auto& part : split(text, ',')) {
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_count(part, "range element"));
      continue;
    }
    const auto lo = parse_count(part.substr(0, dots), "range bound");
    const auto hi = parse_count(part.substr(dots + 2), "range bound");
    if (lo > hi) throw ConfigError("empty range \"" + part + "\"");
    for (auto v = lo; v <= hi; ++v) out.push_back(v);
  }
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i] <= out[i - 1]) throw ConfigError("range \"" + text + "\" must be increasing");
  }
  return out;
}

std::string format_range(const std::vector<std::size_t>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(values[i]);
  }
  return s;
}

std::vector<std::vector<std::size_t>> parse_removals(const std::string& text) {
  std::vector<std::vector<std::size_t>> out;
  if (text.empty()) throw ConfigError("no block removals given");
  for (const auto& part : split(text, ',')) {
    std::vector<std::size_t> ranks;
    for (const auto& r : split(part, '+')) {
      const auto rank = parse_count(r, "block rank");
      if (rank == 0) throw ConfigError("block ranks start at 1");
      ranks.push_back(rank);
    }
    out.push_back(std::move(ranks));
  }
  return out;
}

std::string matrix_csv(const Matrix& m, const std::vector<std::size_t>& windows,
                       const std::vector<std::size_t>& ngrams) {
  std::string s = "window";
  for (const auto n : ngrams) s += ",n" + std::to_string(n);
  s += '\n';
  for (std::size_t r = 0; r < m.rows; ++r) {
    s += std::to_string(windows[r]);
    for (std::size_t c = 0; c < m.cols; ++c) s += ',' + format_number(m(r, c));
    s += '\n';
  }
  return s;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

void write_json(const std::filesystem::path& path, const Json& j) {
  write_text(path, j.dump(2) + "\n");
}

}  // namespace stylo::cli
