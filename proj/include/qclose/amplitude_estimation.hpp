// Amplitude estimation and square root amplitude estimation.
//
// For an oracle with the block form
//   U|0>_A|0>_B = sqrt(p)|0>_A|phi_0>_B + sqrt(1-p)|1>_A|phi_1>_B
// (A the most significant qubit), sqrt_amp_est estimates sqrt(p) directly as
// |sin(pi * phi_tilde)| from one phase estimation of the Grover iterate,
// within delta with probability >= 2/3, at O(1/delta) queries. Squaring the
// result reproduces plain amplitude estimation at the same query cost.

#pragma once

#include "qclose/oracles.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace qclose {

struct EstimationResult {
  double estimate = 0.0;           // in [0,1]
  std::uint64_t queries_used = 0;  // counter delta over all wrapped oracles
  int repetitions = 0;
  std::vector<double> raw_outcomes;  // per-repetition estimates
  std::vector<double> raw_phases;    // per-repetition measured phases (turns)
};

/// Ancilla count of the inner phase estimation for a target error `delta`
/// on sqrt(p): resolution delta/pi at failure bound 1/3.
int sqrt_amp_est_ancillas(double delta);

/// Queries per unit oracle charge for one sqrt_amp_est run: one preparation
/// plus 2*(2^t - 1) from the phase estimation ladder.
std::uint64_t sqrt_amp_est_cost(double delta);

/// Estimate of sqrt(p). Pr[|estimate - sqrt(p)| < delta] >= 2/3.
EstimationResult sqrt_amp_est(const QueryOp& u, double delta,
                              std::uint64_t rng_seed);
EstimationResult sqrt_amp_est(const CountingOracle& u, double delta,
                              std::uint64_t rng_seed);

/// Estimate of p: sqrt_amp_est at delta/2, squared.
/// Pr[|estimate - p| < delta] >= 2/3.
EstimationResult amp_est(const QueryOp& u, double delta,
                         std::uint64_t rng_seed);
EstimationResult amp_est(const CountingOracle& u, double delta,
                         std::uint64_t rng_seed);

/// Median of `rounds` independent single shots (rounds odd). Given
/// single-shot success >= 2/3, failure decays exponentially in rounds;
/// queries of all rounds are summed.
EstimationResult amplify(
    const std::function<EstimationResult(std::uint64_t seed)>& single_shot,
    int rounds, std::uint64_t rng_seed);

/// Whether |sqrt(x) - sqrt(x_tilde)| < sqrt(eps). Requires |x - x_tilde| <=
/// eps (throws std::domain_error beyond); always true strictly inside the
/// precondition, false exactly at the tight boundary x = 0, x_tilde = eps.
bool sqrt_stability_check(double x, double x_tilde, double eps);

}  // namespace qclose
