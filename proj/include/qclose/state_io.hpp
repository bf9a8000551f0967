// State-vector file format: a JSON array of [re, im] pairs of length 2^n.

#pragma once

#include "qclose/linalg.hpp"

#include <stdexcept>
#include <string>

namespace qclose {

/// Malformed or unreadable input file.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerically invalid content (bad norm, non-finite values).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LoadedState {
  StateVector state;
  // Set when the stored norm deviated from 1 by more than 1e-6 and the
  // amplitudes were renormalized on load.
  bool renormalized = false;
  double norm_deviation = 0.0;
};

LoadedState read_state_json(const std::string& path);
LoadedState parse_state_json(const std::string& text);

void write_state_json(const StateVector& state, const std::string& path);
std::string state_to_json(const StateVector& state);

}  // namespace qclose
