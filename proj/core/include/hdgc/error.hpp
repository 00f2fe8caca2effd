#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hdgc {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Sample length, lag order or matrix shapes do not fit together.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Invalid block map: overlapping, out-of-range or missing columns, unknown block.
class StructureError : public Error {
public:
    using Error::Error;
};

/// Invalid scalar or vector argument (non-finite weight, negative penalty, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// The estimator does not exist for this problem (too few rows, rank deficiency).
/// Reported as "NA" in tables.
class NotComputableError : public Error {
public:
    using Error::Error;
};

/// A column needed for prior scaling has zero variance.
class ScaleError : public Error {
public:
    using Error::Error;
};

/// Predictor panel has fewer than two positive principal-component eigenvalues.
class DegeneratePanelError : public Error {
public:
    using Error::Error;
};

/// Linear algebra failure that should be impossible for valid inputs.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Malformed input file. The message names the file and the 1-based line.
class ParseError : public Error {
public:
    ParseError(const std::string& file, std::size_t line, const std::string& what);

    [[nodiscard]] const std::string& file() const noexcept { return file_; }
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::string file_;
    std::size_t line_;
};

}  // namespace hdgc
