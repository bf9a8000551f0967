#include "qclose/closeness.hpp"

#include "qclose/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qclose {

const char* to_string(ClosenessMethod m) {
  switch (m) {
    case ClosenessMethod::exact: return "exact";
    case ClosenessMethod::optimal: return "optimal";
    case ClosenessMethod::folklore_query: return "folklore_query";
    case ClosenessMethod::folklore_sample: return "folklore_sample";
  }
  return "?";
}

namespace {

double helstrom(double trace_distance) { return 0.5 - trace_distance / 2.0; }

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

void check_eps(double eps) {
  if (!(eps > 0.0) || !(eps < 1.0)) {
    throw std::invalid_argument("estimation error must lie in (0,1)");
  }
}

}  // namespace

ClosenessReport exact_closeness(const PreparedPair& pair) {
  const Complex overlap = pair.state_phi().inner_product(pair.state_psi());
  const double f = clamp01(std::abs(overlap));
  ClosenessReport report;
  report.sqrt_fidelity = f;
  report.squared_fidelity = f * f;
  report.trace_distance = std::sqrt(std::max(0.0, 1.0 - f * f));
  report.helstrom_error = helstrom(report.trace_distance);
  report.method = ClosenessMethod::exact;
  report.queries_or_samples = 0;
  return report;
}

EstimationResult estimate_trace_distance(const PreparedPair& pair, double eps,
                                         std::uint64_t rng_seed) {
  check_eps(eps);
  return sqrt_amp_est(build_w(pair), eps, rng_seed);
}

EstimationResult estimate_sqrt_fidelity(const PreparedPair& pair, double eps,
                                        std::uint64_t rng_seed) {
  check_eps(eps);
  return sqrt_amp_est(build_w_prime(pair), eps, rng_seed);
}

EstimationResult estimate_squared_fidelity(const PreparedPair& pair,
                                           double eps,
                                           std::uint64_t rng_seed) {
  check_eps(eps);
  EstimationResult result = estimate_trace_distance(pair, eps / 2.0, rng_seed);
  // raw_outcomes keep the inner trace-distance estimates.
  result.estimate = clamp01(1.0 - result.estimate * result.estimate);
  return result;
}

MeasurementDistribution swap_test_ancilla_distribution(
    const PreparedPair& pair) {
  const int k = pair.num_qubits();
  const StateVector phi = pair.state_phi();
  const StateVector psi = pair.state_psi();
  const auto dk = std::uint64_t{1} << k;
  const auto half = dk * dk;

  // |0>_A |phi> |psi>, ancilla on the most significant qubit.
  Eigen::VectorXcd s = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(2 * half));
  for (std::uint64_t x = 0; x < dk; ++x) {
    for (std::uint64_t y = 0; y < dk; ++y) {
      s(static_cast<Eigen::Index>(x * dk + y)) =
          phi.amplitude(x) * psi.amplitude(y);
    }
  }

  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  auto hadamard_ancilla = [&] {
    for (std::uint64_t z = 0; z < half; ++z) {
      const Complex lo = s(static_cast<Eigen::Index>(z));
      const Complex hi = s(static_cast<Eigen::Index>(half + z));
      s(static_cast<Eigen::Index>(z)) = (lo + hi) * inv_sqrt2;
      s(static_cast<Eigen::Index>(half + z)) = (lo - hi) * inv_sqrt2;
    }
  };

  hadamard_ancilla();
  // Controlled SWAP of the two k-qubit registers on the ancilla=1 branch.
  for (std::uint64_t x = 0; x < dk; ++x) {
    for (std::uint64_t y = x + 1; y < dk; ++y) {
      std::swap(s(static_cast<Eigen::Index>(half + x * dk + y)),
                s(static_cast<Eigen::Index>(half + y * dk + x)));
    }
  }
  hadamard_ancilla();

  double p0 = 0.0;
  double p1 = 0.0;
  for (std::uint64_t z = 0; z < half; ++z) {
    p0 += std::norm(s(static_cast<Eigen::Index>(z)));
    p1 += std::norm(s(static_cast<Eigen::Index>(half + z)));
  }
  std::vector<std::pair<std::uint64_t, double>> entries;
  if (p0 > 0.0) entries.emplace_back(0, p0);
  if (p1 > 0.0) entries.emplace_back(1, p1);
  return MeasurementDistribution(std::move(entries));
}

int swap_test_shot(const PreparedPair& pair, std::uint64_t rng_seed) {
  const MeasurementDistribution d = swap_test_ancilla_distribution(pair);
  return static_cast<int>(sample(d, rng_seed));
}

std::uint64_t folklore_sample_count(double err) {
  if (!(err > 0.0) || !(err < 1.0)) {
    throw std::invalid_argument("inner error must lie in (0,1)");
  }
  return static_cast<std::uint64_t>(
      std::ceil(std::log(6.0) / (2.0 * err * err)));
}

namespace {

// Frequency of ancilla 0 over `shots` SWAP tests. The circuit distribution
// is fixed for a given pair, so it is evaluated once and sampled cheaply;
// each draw still stands for one fresh copy of each state.
double swap_test_zero_frequency(const PreparedPair& pair, std::uint64_t shots,
                                std::uint64_t rng_seed) {
  const double p0 = swap_test_ancilla_distribution(pair).probability(0);
  auto gen = seeded_engine(rng_seed);
  std::uint64_t zeros = 0;
  for (std::uint64_t i = 0; i < shots; ++i) {
    if (uniform01(gen) < p0) ++zeros;
  }
  return static_cast<double>(zeros) / static_cast<double>(shots);
}

// 2*freq - 1, the F^2 estimate behind every folklore quantity.
double folklore_sample_f2_inner(const PreparedPair& pair, std::uint64_t shots,
                                std::uint64_t rng_seed) {
  const double freq = swap_test_zero_frequency(pair, shots, rng_seed);
  return clamp01(2.0 * freq - 1.0);
}

}  // namespace

SampleEstimate folklore_sample_squared_fidelity(const PreparedPair& pair,
                                                double eps,
                                                std::uint64_t rng_seed) {
  check_eps(eps);
  const std::uint64_t shots = folklore_sample_count(eps / 2.0);
  return {folklore_sample_f2_inner(pair, shots, rng_seed), shots};
}

SampleEstimate folklore_sample_sqrt_fidelity(const PreparedPair& pair,
                                             double eps,
                                             std::uint64_t rng_seed) {
  check_eps(eps);
  const std::uint64_t shots = folklore_sample_count(eps * eps / 2.0);
  const double f2 = folklore_sample_f2_inner(pair, shots, rng_seed);
  return {std::sqrt(f2), shots};
}

SampleEstimate folklore_sample_trace_distance(const PreparedPair& pair,
                                              double eps,
                                              std::uint64_t rng_seed) {
  check_eps(eps);
  const std::uint64_t shots = folklore_sample_count(eps * eps / 2.0);
  const double f2 = folklore_sample_f2_inner(pair, shots, rng_seed);
  return {std::sqrt(1.0 - f2), shots};
}

ClosenessReport folklore_sample_estimators(const PreparedPair& pair,
                                           double eps,
                                           std::uint64_t rng_seed) {
  check_eps(eps);
  const std::uint64_t shots_f2 = folklore_sample_count(eps / 2.0);
  const std::uint64_t shots_root = folklore_sample_count(eps * eps / 2.0);
  const double f2_direct =
      folklore_sample_f2_inner(pair, shots_f2, derive_seed(rng_seed, 1));
  const double f2_inner =
      folklore_sample_f2_inner(pair, shots_root, derive_seed(rng_seed, 2));

  ClosenessReport report;
  report.squared_fidelity = f2_direct;
  report.sqrt_fidelity = std::sqrt(f2_inner);
  report.trace_distance = std::sqrt(1.0 - f2_inner);
  report.helstrom_error = helstrom(report.trace_distance);
  report.method = ClosenessMethod::folklore_sample;
  report.queries_or_samples = shots_f2 + shots_root;
  return report;
}

namespace {

// amp_est of Pr[A=0] = (1 + F^2)/2 on the SWAP-test oracle; 2x - 1 is the
// F^2 estimate at twice the inner error.
EstimationResult folklore_query_f2_at(const PreparedPair& pair,
                                      double inner_delta,
                                      std::uint64_t rng_seed) {
  EstimationResult result =
      amp_est(build_swap_test_op(pair), inner_delta, rng_seed);
  result.estimate = clamp01(2.0 * result.estimate - 1.0);
  return result;
}

}  // namespace

EstimationResult folklore_query_squared_fidelity(const PreparedPair& pair,
                                                 double eps,
                                                 std::uint64_t rng_seed) {
  check_eps(eps);
  return folklore_query_f2_at(pair, eps / 2.0, rng_seed);
}

EstimationResult folklore_query_sqrt_fidelity(const PreparedPair& pair,
                                              double eps,
                                              std::uint64_t rng_seed) {
  check_eps(eps);
  EstimationResult result = folklore_query_f2_at(pair, eps * eps / 2.0, rng_seed);
  result.estimate = std::sqrt(result.estimate);
  return result;
}

EstimationResult folklore_query_trace_distance(const PreparedPair& pair,
                                               double eps,
                                               std::uint64_t rng_seed) {
  check_eps(eps);
  EstimationResult result = folklore_query_f2_at(pair, eps * eps / 2.0, rng_seed);
  result.estimate = std::sqrt(1.0 - result.estimate);
  return result;
}

ClosenessReport folklore_query_estimators(const PreparedPair& pair, double eps,
                                          std::uint64_t rng_seed) {
  check_eps(eps);
  const EstimationResult direct =
      folklore_query_f2_at(pair, eps / 2.0, derive_seed(rng_seed, 1));
  const EstimationResult inner =
      folklore_query_f2_at(pair, eps * eps / 2.0, derive_seed(rng_seed, 2));

  ClosenessReport report;
  report.squared_fidelity = direct.estimate;
  report.sqrt_fidelity = std::sqrt(inner.estimate);
  report.trace_distance = std::sqrt(1.0 - inner.estimate);
  report.helstrom_error = helstrom(report.trace_distance);
  report.method = ClosenessMethod::folklore_query;
  report.queries_or_samples = direct.queries_used + inner.queries_used;
  return report;
}

}  // namespace qclose
