#pragma once

#include <stdexcept>
#include <string>

namespace hdr {

/// Precondition on a mathematical argument violated (negative concentration,
/// mismatched manifolds, empty set where a non-empty one is required, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid configuration (missing bounding box, grid too coarse, bad schedule).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed or out-of-range input data. Carries the offending data row when known.
class IngestError : public std::runtime_error {
public:
    IngestError(const std::string& what, long row = -1)
        : std::runtime_error(row >= 0 ? what + " (row " + std::to_string(row) + ")" : what),
          row_(row) {}

    long row() const { return row_; }

private:
    long row_;
};

/// Cross-validation could not rank any candidate.
class SelectionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hdr
