#include "qclose/amplitude_estimation.hpp"

#include "qclose/phase_estimation.hpp"
#include "qclose/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qclose {

namespace {

constexpr double kInnerFailureBound = 1.0 / 3.0;

PhaseEstimateConfig inner_config(double delta) {
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw std::invalid_argument("estimation error must lie in (0,1)");
  }
  // The |sin| chain loses a factor pi, so the phase register resolves to
  // delta/pi.
  return PhaseEstimateConfig{delta / std::numbers::pi, kInnerFailureBound};
}

}  // namespace

int sqrt_amp_est_ancillas(double delta) {
  return inner_config(delta).num_ancillas();
}

std::uint64_t sqrt_amp_est_cost(double delta) {
  const int t = sqrt_amp_est_ancillas(delta);
  return 2 * ((std::uint64_t{1} << t) - 1) + 1;
}

EstimationResult sqrt_amp_est(const QueryOp& u, double delta,
                              std::uint64_t rng_seed) {
  const PhaseEstimateConfig cfg = inner_config(delta);
  if (u.num_qubits() < 2) {
    throw std::invalid_argument(
        "oracle must have a 1-qubit A register above a nonempty B register");
  }
  const std::uint64_t before = u.counter_total();

  const StateVector input = u.apply(StateVector(u.num_qubits()));
  const QueryOp grover = build_grover_iterate(u);
  const PhaseOutcome outcome =
      run_phase_estimation(grover, input, cfg, rng_seed);

  const double x = std::clamp(
      std::fabs(std::sin(std::numbers::pi * outcome.phi_tilde)), 0.0, 1.0);

  EstimationResult result;
  result.estimate = x;
  result.queries_used = u.counter_total() - before;
  result.repetitions = 1;
  result.raw_outcomes = {x};
  result.raw_phases = {outcome.phi_tilde};
  return result;
}

EstimationResult sqrt_amp_est(const CountingOracle& u, double delta,
                              std::uint64_t rng_seed) {
  return sqrt_amp_est(QueryOp(u), delta, rng_seed);
}

EstimationResult amp_est(const QueryOp& u, double delta,
                         std::uint64_t rng_seed) {
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw std::invalid_argument("estimation error must lie in (0,1)");
  }
  EstimationResult result = sqrt_amp_est(u, delta / 2.0, rng_seed);
  // |x^2 - p| = |x + sqrt(p)| |x - sqrt(p)| <= 2 |x - sqrt(p)| < delta.
  result.estimate = std::clamp(result.estimate * result.estimate, 0.0, 1.0);
  for (double& x : result.raw_outcomes) x = std::clamp(x * x, 0.0, 1.0);
  return result;
}

EstimationResult amp_est(const CountingOracle& u, double delta,
                         std::uint64_t rng_seed) {
  return amp_est(QueryOp(u), delta, rng_seed);
}

EstimationResult amplify(
    const std::function<EstimationResult(std::uint64_t seed)>& single_shot,
    int rounds, std::uint64_t rng_seed) {
  if (rounds < 1 || rounds % 2 == 0) {
    throw std::invalid_argument("amplification rounds must be odd and >= 1");
  }
  EstimationResult combined;
  std::vector<double> estimates;
  estimates.reserve(static_cast<std::size_t>(rounds));
  for (int i = 0; i < rounds; ++i) {
    EstimationResult shot =
        single_shot(derive_seed(rng_seed, static_cast<std::uint64_t>(i)));
    combined.queries_used += shot.queries_used;
    combined.repetitions += shot.repetitions;
    estimates.push_back(shot.estimate);
    combined.raw_outcomes.push_back(shot.estimate);
    combined.raw_phases.insert(combined.raw_phases.end(),
                               shot.raw_phases.begin(),
                               shot.raw_phases.end());
  }
  std::vector<double> sorted = estimates;
  const auto mid = sorted.begin() + rounds / 2;
  std::nth_element(sorted.begin(), mid, sorted.end());
  combined.estimate = *mid;
  return combined;
}

bool sqrt_stability_check(double x, double x_tilde, double eps) {
  if (!(x >= 0.0) || !(x_tilde >= 0.0) || !(eps > 0.0)) {
    throw std::domain_error("sqrt stability check needs x, x_tilde >= 0 and eps > 0");
  }
  if (std::fabs(x - x_tilde) > eps) {
    throw std::domain_error("precondition |x - x_tilde| <= eps violated");
  }
  return std::fabs(std::sqrt(x) - std::sqrt(x_tilde)) < std::sqrt(eps);
}

}  // namespace qclose
