#pragma once

#include <stdexcept>
#include <string>

namespace imbreg {

// Errors are grouped by how a caller should react; the CLI maps each group to
// an exit code (usage 2, data 3, runtime/training 4).

/// Invalid arguments or configuration supplied by the caller.
class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Input data that violates a documented contract (bad CSV, unusable measure, ...).
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure during model training.
class TrainingError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace imbreg
