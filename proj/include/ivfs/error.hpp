#ifndef IVFS_ERROR_HPP
#define IVFS_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ivfs {

/// Base of every error raised by the library. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed CSV input. Row and column are 1-based file coordinates (0 = unknown).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row, std::size_t column = 0)
      : Error(what), row_(row), column_(column) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

class InvalidSelection : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// A brute-force oracle was asked to enumerate more than it is allowed to.
class OracleTooLarge : public Error {
 public:
  using Error::Error;
};

class MissingLabels : public Error {
 public:
  using Error::Error;
};

/// A random train/test split left a class without training examples twice in a row.
class FoldError : public Error {
 public:
  using Error::Error;
};

}  // namespace ivfs

#endif  // IVFS_ERROR_HPP
