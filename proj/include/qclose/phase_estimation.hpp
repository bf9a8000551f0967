// Textbook quantum phase estimation with explicit ancilla sizing and exact
// query accounting: Hadamards on a t-qubit register, the controlled-Q^{2^j}
// ladder, an inverse Fourier transform on the register, and a measurement.
//
// Powers of Q are computed by repeated squaring but billed as 2^j controlled
// applications, so a run always charges (2^t - 1) applications of Q.

#pragma once

#include "qclose/linalg.hpp"
#include "qclose/oracles.hpp"

#include <cstdint>

namespace qclose {

struct PhaseEstimateConfig {
  double delta;         // phase resolution, in full turns
  double epsilon_fail;  // failure probability bound

  /// t = ceil(log2(1/delta)) + ceil(log2(2 + 1/(2*epsilon_fail))).
  int num_ancillas() const;
};

struct PhaseOutcome {
  double phi_tilde = 0.0;       // raw_index / 2^t, in [0,1)
  std::uint64_t raw_index = 0;  // measured register value
  int num_ancillas = 0;
};

/// Exact Born distribution of the phase register. Dispatches between the two
/// numerical routes below on problem size; both compute the same operator.
MeasurementDistribution outcome_distribution(const UnitaryOp& q,
                                             const StateVector& input,
                                             const PhaseEstimateConfig& cfg);

/// Literal circuit route: simulates the ladder column by column and applies
/// the dense inverse Fourier kernel to the register.
MeasurementDistribution outcome_distribution_circuit(
    const UnitaryOp& q, const StateVector& input,
    const PhaseEstimateConfig& cfg);

/// Spectral route: Schur-diagonalizes Q (unitary, hence normal) and sums the
/// closed-form register kernel over the input's eigencomponents. Exact for
/// any register size; used where the literal route would not fit in memory.
MeasurementDistribution outcome_distribution_spectral(
    const UnitaryOp& q, const StateVector& input,
    const PhaseEstimateConfig& cfg);

/// Runs the circuit once and samples the register. Bills (2^t - 1)
/// applications of q, i.e. 2*(2^t - 1) oracle queries when q is a Grover
/// iterate. Throws std::invalid_argument on dimension mismatch.
PhaseOutcome run_phase_estimation(const QueryOp& q, const StateVector& input,
                                  const PhaseEstimateConfig& cfg,
                                  std::uint64_t rng_seed);

/// min{|a - b|, 1 - |a - b|} for phases in turns.
double circular_distance(double a, double b);

}  // namespace qclose
