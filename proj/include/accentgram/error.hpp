#pragma once

#include <stdexcept>
#include <string>

namespace accentgram {

/// Malformed or unusable input data (bad files, bad manifests, too few speakers).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation hit a degenerate case: singular matrix, zero variance, etc.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace accentgram
