// Closeness estimators for pure states given their preparation oracles:
// the optimal trace-distance / square-root-fidelity estimators (one square
// root amplitude estimation on W or W'), the squared-fidelity reduction, an
// exact classical reference, and the SWAP-test folklore baselines in both
// sample and query accounting.

#pragma once

#include "qclose/amplitude_estimation.hpp"
#include "qclose/oracles.hpp"

#include <cstdint>

namespace qclose {

enum class ClosenessMethod { exact, optimal, folklore_query, folklore_sample };

const char* to_string(ClosenessMethod m);

struct ClosenessReport {
  double trace_distance = 0.0;
  double sqrt_fidelity = 0.0;
  double squared_fidelity = 0.0;
  double helstrom_error = 0.0;  // 1/2 - T/2
  ClosenessMethod method = ClosenessMethod::exact;
  std::uint64_t queries_or_samples = 0;
};

/// Ground truth from the state vectors: F = |<phi|psi>|, T = sqrt(1 - F^2).
/// Consumes no queries.
ClosenessReport exact_closeness(const PreparedPair& pair);

/// Square root amplitude estimation on W. Pr[|est - T| < eps] >= 2/3 at
/// O(1/eps) queries to each oracle.
EstimationResult estimate_trace_distance(const PreparedPair& pair, double eps,
                                         std::uint64_t rng_seed);

/// Same on W' for F.
EstimationResult estimate_sqrt_fidelity(const PreparedPair& pair, double eps,
                                        std::uint64_t rng_seed);

/// 1 - x^2 for a trace-distance estimate x at error eps/2.
EstimationResult estimate_squared_fidelity(const PreparedPair& pair,
                                           double eps, std::uint64_t rng_seed);

/// One SWAP-test shot on fresh copies of |phi> and |psi>; returns the
/// ancilla bit. Pr[0] = (1 + F^2)/2. Sample accounting only: no queries are
/// charged.
int swap_test_shot(const PreparedPair& pair, std::uint64_t rng_seed);

/// Exact ancilla distribution of the SWAP-test circuit (simulated, not the
/// closed form); test oracle and shot sampler share this path.
MeasurementDistribution swap_test_ancilla_distribution(const PreparedPair& pair);

/// Hoeffding shot count for a single estimate at inner error `err` with
/// failure probability <= 1/3: ceil(ln(6) / (2 err^2)).
std::uint64_t folklore_sample_count(double err);

struct SampleEstimate {
  double estimate = 0.0;
  std::uint64_t samples = 0;  // SWAP-test shots, one copy of each state per shot
};

SampleEstimate folklore_sample_squared_fidelity(const PreparedPair& pair,
                                                double eps,
                                                std::uint64_t rng_seed);
SampleEstimate folklore_sample_sqrt_fidelity(const PreparedPair& pair,
                                             double eps,
                                             std::uint64_t rng_seed);
SampleEstimate folklore_sample_trace_distance(const PreparedPair& pair,
                                              double eps,
                                              std::uint64_t rng_seed);

/// All three folklore sample estimates in one report. F^2 comes from a
/// Theta(1/eps^2)-shot frequency; F and T take square roots of a
/// Theta(1/eps^4)-shot inner estimate at error eps^2.
ClosenessReport folklore_sample_estimators(const PreparedPair& pair,
                                           double eps, std::uint64_t rng_seed);

/// Folklore query estimators: amplitude estimation on the SWAP-test oracle.
/// F^2 at error eps costs O(1/eps) queries; F and T need the inner F^2 at
/// error eps^2 and cost O(1/eps^2).
EstimationResult folklore_query_squared_fidelity(const PreparedPair& pair,
                                                 double eps,
                                                 std::uint64_t rng_seed);
EstimationResult folklore_query_sqrt_fidelity(const PreparedPair& pair,
                                              double eps,
                                              std::uint64_t rng_seed);
EstimationResult folklore_query_trace_distance(const PreparedPair& pair,
                                               double eps,
                                               std::uint64_t rng_seed);

ClosenessReport folklore_query_estimators(const PreparedPair& pair, double eps,
                                          std::uint64_t rng_seed);

}  // namespace qclose
