#ifndef SUBALIGN_ERRORS_HPP
#define SUBALIGN_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace subalign {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical / shape errors.
class DimensionError : public Error { using Error::Error; };
class DegenerateData : public Error { using Error::Error; };
class FiniteCheck : public Error { using Error::Error; };

// Category-subset errors.
class InsufficientSamples : public Error { using Error::Error; };
class UnknownCategory : public Error { using Error::Error; };
class DegenerateEvolution : public Error { using Error::Error; };
class IndexError : public Error { using Error::Error; };
class LengthMismatch : public Error { using Error::Error; };

// Multi-source errors.
class EmptyPool : public Error { using Error::Error; };
class UncoverableLabel : public Error { using Error::Error; };

// Synthetic data.
class InfeasibleGeometry : public Error { using Error::Error; };

/// Raised for anything that touches the filesystem or an on-disk format.
class IoError : public Error { using Error::Error; };

/// CSV parse failure with a 1-based location. column == 0 means "whole row".
class ParseError : public IoError {
 public:
  ParseError(const std::string& what, std::size_t row, std::size_t column)
      : IoError(what), row_(row), column_(column) {}
  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

class RaggedRows : public ParseError { using ParseError::ParseError; };
class NonNumericFeature : public ParseError { using ParseError::ParseError; };

// Binary container errors.
class BadMagic : public IoError { using IoError::IoError; };
class VersionUnsupported : public IoError { using IoError::IoError; };
class TruncatedFile : public IoError { using IoError::IoError; };

}  // namespace subalign

#endif  // SUBALIGN_ERRORS_HPP
