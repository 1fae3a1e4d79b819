#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stylo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or invariant-violating corpus input. line is 1-based, 0 if unknown.
class CorpusError : public Error {
 public:
  explicit CorpusError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Invalid parameters: empty ranges, infeasible subsampling, bad flags.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace stylo
