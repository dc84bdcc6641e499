#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bilinrank {

/// Bad arguments, malformed documents, violated invariants. CLI exit code 2.
class InvalidInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iteration budget exhausted or a numerical self-check failed. CLI exit code 3.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, std::size_t rows, std::size_t cols)
      : std::runtime_error(what + " (" + std::to_string(rows) + "x" + std::to_string(cols) + ")"),
        rows_(rows),
        cols_(cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
};

/// File system failures. CLI exit code 3.
class IoFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bilinrank
