#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cefs {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FileNotFound : public Error {
public:
    explicit FileNotFound(const std::string& path)
        : Error("file not found: " + path), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

// row and column are 1-based as they appear in the file (header counts as a row).
class ParseError : public Error {
public:
    ParseError(std::size_t row, std::size_t column, const std::string& what)
        : Error("parse error at row " + std::to_string(row) + ", column " +
                std::to_string(column) + ": " + what),
          row_(row), column_(column) {}
    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

class EmptyDataset : public Error {
public:
    EmptyDataset() : Error("dataset has no complete rows") {}
};

class LabelColumnMissing : public Error {
public:
    explicit LabelColumnMissing(const std::string& label)
        : Error("label column not found: " + label) {}
};

class LengthMismatch : public Error {
public:
    LengthMismatch(std::size_t expected, std::size_t got)
        : Error("length mismatch: expected " + std::to_string(expected) + ", got " +
                std::to_string(got)) {}
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class InvalidFraction : public InvalidArgument {
public:
    explicit InvalidFraction(double f)
        : InvalidArgument("train fraction must lie in (0, 1], got " + std::to_string(f)) {}
};

class InvalidK : public InvalidArgument {
public:
    InvalidK(std::size_t k, std::size_t m)
        : InvalidArgument("k must lie in [1, " + std::to_string(m) + "], got " +
                          std::to_string(k)),
          k_(k), m_(m) {}
    std::size_t k() const noexcept { return k_; }
    std::size_t m() const noexcept { return m_; }

private:
    std::size_t k_;
    std::size_t m_;
};

class EmptyElite : public Error {
public:
    EmptyElite() : Error("probability update needs at least one elite mask") {}
};

// Raised when the pooled within-class covariance cannot be inverted.
class SingularCovariance : public Error {
public:
    SingularCovariance() : Error("pooled covariance is singular; classifier not evaluable") {}
};

class EmptyTestSet : public Error {
public:
    EmptyTestSet() : Error("misclassification error needs a non-empty test set") {}
};

}  // namespace cefs
