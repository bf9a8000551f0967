#include "qclose/random.hpp"

#include <cmath>
#include <numbers>

namespace qclose {

std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t state = base;
  std::uint64_t mixed = splitmix64_next(state);
  state = mixed ^ stream;
  return splitmix64_next(state);
}

std::mt19937_64 seeded_engine(std::uint64_t seed) {
  return std::mt19937_64(seed);
}

double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

double gaussian(std::mt19937_64& gen) {
  // Box-Muller; reject u = 0 to keep the log finite.
  double u = 0.0;
  do {
    u = uniform01(gen);
  } while (u == 0.0);
  const double v = uniform01(gen);
  return std::sqrt(-2.0 * std::log(u)) *
         std::cos(2.0 * std::numbers::pi * v);
}

UnitaryOp haar_unitary(int num_qubits, std::uint64_t seed) {
  auto gen = seeded_engine(seed);
  const auto d = static_cast<Eigen::Index>(std::uint64_t{1} << num_qubits);
  Eigen::MatrixXcd g(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      g(i, j) = Complex{gaussian(gen), gaussian(gen)};
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the gauge so the distribution is Haar: absorb the phases of diag(R).
  for (Eigen::Index j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    const double a = std::abs(rjj);
    q.col(j) *= (a > 0.0) ? (rjj / a) : Complex{1.0, 0.0};
  }
  return UnitaryOp::from_matrix(std::move(q), 1e-10);
}

StateVector haar_state(int num_qubits, std::uint64_t seed) {
  const UnitaryOp u = haar_unitary(num_qubits, seed);
  return StateVector(num_qubits, u.matrix().col(0), 1e-8);
}

}  // namespace qclose
