#include "qclose/phase_estimation.hpp"

#include "qclose/random.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace qclose {

namespace {

// Largest register the literal circuit route is allowed; beyond this the
// spectral route computes the identical distribution without the memory.
constexpr int kMaxCircuitAncillas = 14;
constexpr double kMaxCircuitOps = 3.0e8;  // state_dim * 4^t multiply-adds

// Registers above this would not even fit as a distribution vector.
constexpr int kMaxAncillas = 24;

void check_dims(const UnitaryOp& q, const StateVector& input) {
  if (q.dim() != input.dim()) {
    throw std::invalid_argument("phase estimation input dimension " +
                                std::to_string(input.dim()) +
                                " does not match operator dimension " +
                                std::to_string(q.dim()));
  }
}

MeasurementDistribution to_distribution(const std::vector<double>& probs) {
  std::vector<std::pair<std::uint64_t, double>> entries;
  entries.reserve(probs.size());
  for (std::uint64_t y = 0; y < probs.size(); ++y) {
    if (probs[y] > 0.0) entries.emplace_back(y, probs[y]);
  }
  return MeasurementDistribution(std::move(entries));
}

}  // namespace

int PhaseEstimateConfig::num_ancillas() const {
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw std::invalid_argument("phase resolution must lie in (0,1)");
  }
  if (!(epsilon_fail > 0.0) || !(epsilon_fail < 1.0)) {
    throw std::invalid_argument("failure bound must lie in (0,1)");
  }
  int t1 = 0;
  while (std::ldexp(delta, t1) < 1.0) ++t1;
  const double spread = 2.0 + 1.0 / (2.0 * epsilon_fail);
  int t2 = 0;
  while (std::ldexp(1.0, t2) < spread) ++t2;
  const int t = t1 + t2;
  if (t > kMaxAncillas) {
    throw std::invalid_argument(
        "phase register of " + std::to_string(t) +
        " qubits exceeds the desk-scale limit of " +
        std::to_string(kMaxAncillas));
  }
  return t < 1 ? 1 : t;
}

double circular_distance(double a, double b) {
  double d = std::fabs(a - b);
  d -= std::floor(d);
  return std::min(d, 1.0 - d);
}

MeasurementDistribution outcome_distribution_circuit(
    const UnitaryOp& q, const StateVector& input,
    const PhaseEstimateConfig& cfg) {
  check_dims(q, input);
  const int t = cfg.num_ancillas();
  if (t > kMaxCircuitAncillas) {
    throw std::invalid_argument(
        "literal circuit route capped at " +
        std::to_string(kMaxCircuitAncillas) + " ancillas, need " +
        std::to_string(t));
  }
  const auto n = static_cast<Eigen::Index>(input.dim());
  const auto reg = Eigen::Index{1} << t;

  // Hadamard layer: the register holds a uniform superposition entangled
  // with nothing yet; column y of S is the system state on branch |y>.
  Eigen::MatrixXcd s(n, reg);
  const Eigen::VectorXcd scaled =
      input.amplitudes() / std::sqrt(static_cast<double>(reg));
  for (Eigen::Index y = 0; y < reg; ++y) s.col(y) = scaled;

  // Controlled-Q^{2^j} ladder. Powers by repeated squaring; the billing for
  // the 2^j-fold application happens in run_phase_estimation.
  Eigen::MatrixXcd power = q.matrix();
  for (int j = 0; j < t; ++j) {
    for (Eigen::Index y = 0; y < reg; ++y) {
      if ((y >> j) & 1) s.col(y) = power * s.col(y);
    }
    if (j + 1 < t) power = power * power;
  }

  // Inverse Fourier transform on the register, applied as the dense kernel
  // K(y,y') = exp(-2 pi i y y' / 2^t) / sqrt(2^t), in column blocks.
  std::vector<Complex> twiddle(static_cast<std::size_t>(reg));
  const double scale = 1.0 / std::sqrt(static_cast<double>(reg));
  for (Eigen::Index r = 0; r < reg; ++r) {
    const double angle =
        -2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(reg);
    twiddle[static_cast<std::size_t>(r)] = std::polar(scale, angle);
  }
  const std::uint64_t mask = static_cast<std::uint64_t>(reg) - 1;

  std::vector<double> probs(static_cast<std::size_t>(reg), 0.0);
  const Eigen::Index block = 256;
  Eigen::MatrixXcd kernel(reg, block);
  for (Eigen::Index y0 = 0; y0 < reg; y0 += block) {
    const Eigen::Index cols = std::min(block, reg - y0);
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto yp = static_cast<std::uint64_t>(y0 + c);
      for (Eigen::Index y = 0; y < reg; ++y) {
        kernel(y, c) = twiddle[(static_cast<std::uint64_t>(y) * yp) & mask];
      }
    }
    const Eigen::MatrixXcd out = s * kernel.leftCols(cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
      probs[static_cast<std::size_t>(y0 + c)] = out.col(c).squaredNorm();
    }
  }
  return to_distribution(probs);
}

MeasurementDistribution outcome_distribution_spectral(
    const UnitaryOp& q, const StateVector& input,
    const PhaseEstimateConfig& cfg) {
  check_dims(q, input);
  const int t = cfg.num_ancillas();
  const auto reg = std::uint64_t{1} << t;
  const double regd = static_cast<double>(reg);

  // Q is unitary, hence normal: its Schur form is diagonal and the Schur
  // vectors are an orthonormal eigenbasis.
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(q.matrix(), true);
  if (schur.info() != Eigen::Success) {
    throw std::runtime_error("Schur decomposition failed");
  }
  const Eigen::VectorXcd overlaps =
      schur.matrixU().adjoint() * input.amplitudes();

  std::vector<double> probs(reg, 0.0);
  for (Eigen::Index m = 0; m < overlaps.size(); ++m) {
    const double weight = std::norm(overlaps(m));
    if (weight < 1e-14) continue;
    double lambda =
        std::arg(schur.matrixT()(m, m)) / (2.0 * std::numbers::pi);
    lambda -= std::floor(lambda);  // into [0,1)
    for (std::uint64_t y = 0; y < reg; ++y) {
      double delta = lambda - static_cast<double>(y) / regd;
      delta -= std::round(delta);
      double amp;  // |<y|register>| given eigenphase lambda
      if (std::fabs(delta) < 1e-13) {
        amp = 1.0;
      } else {
        amp = std::sin(std::numbers::pi * regd * delta) /
              (regd * std::sin(std::numbers::pi * delta));
      }
      probs[y] += weight * amp * amp;
    }
  }
  return to_distribution(probs);
}

MeasurementDistribution outcome_distribution(const UnitaryOp& q,
                                             const StateVector& input,
                                             const PhaseEstimateConfig& cfg) {
  const int t = cfg.num_ancillas();
  const double ops = static_cast<double>(input.dim()) *
                     std::ldexp(1.0, 2 * t);  // dim * 4^t
  if (t <= kMaxCircuitAncillas && ops <= kMaxCircuitOps) {
    return outcome_distribution_circuit(q, input, cfg);
  }
  return outcome_distribution_spectral(q, input, cfg);
}

PhaseOutcome run_phase_estimation(const QueryOp& q, const StateVector& input,
                                  const PhaseEstimateConfig& cfg,
                                  std::uint64_t rng_seed) {
  const MeasurementDistribution dist = outcome_distribution(q.op(), input, cfg);
  const int t = cfg.num_ancillas();
  const std::uint64_t raw = sample(dist, rng_seed);
  q.bill((std::uint64_t{1} << t) - 1);
  PhaseOutcome out;
  out.raw_index = raw;
  out.num_ancillas = t;
  out.phi_tilde =
      static_cast<double>(raw) / static_cast<double>(std::uint64_t{1} << t);
  return out;
}

}  // namespace qclose
