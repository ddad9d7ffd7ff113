#pragma once

#include <stdexcept>
#include <string>

namespace multiassoc {

/// Base class for all recoverable failures. The CLI maps these to exit
/// status 2 (bad input or usage).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A run that started but cannot produce a meaningful result, e.g. every
/// query was dropped during filtering. Exit status 1 in the CLI.
class EvalError : public Error {
 public:
  using Error::Error;
};

/// A combined query vector with zero norm; cosine distance is undefined.
/// Rankers catch this and record the query as failed.
class DegenerateCombination : public Error {
 public:
  using Error::Error;
};

}  // namespace multiassoc
