#include "qclose/linalg.hpp"

#include "qclose/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qclose {

namespace {

void check_qubit_count(int num_qubits) {
  if (num_qubits < 0 || num_qubits > 24) {
    throw std::invalid_argument("qubit count out of range: " +
                                std::to_string(num_qubits));
  }
}

std::uint64_t dim_of(int num_qubits) { return std::uint64_t{1} << num_qubits; }

}  // namespace

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
  check_qubit_count(num_qubits);
  amps_ = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim_of(num_qubits)));
  amps_(0) = Complex{1.0, 0.0};
}

StateVector::StateVector(int num_qubits, Eigen::VectorXcd amplitudes,
                         double norm_tol)
    : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
  check_qubit_count(num_qubits);
  if (static_cast<std::uint64_t>(amps_.size()) != dim_of(num_qubits)) {
    throw std::invalid_argument("amplitude vector has length " +
                                std::to_string(amps_.size()) + ", expected 2^" +
                                std::to_string(num_qubits));
  }
  const double n = amps_.norm();
  if (!std::isfinite(n) || std::abs(n - 1.0) > norm_tol) {
    throw std::invalid_argument("state norm " + std::to_string(n) +
                                " is not 1 within tolerance");
  }
  amps_ /= n;
}

StateVector StateVector::basis_state(int num_qubits, std::uint64_t index) {
  check_qubit_count(num_qubits);
  if (index >= dim_of(num_qubits)) {
    throw std::invalid_argument("basis index out of range");
  }
  StateVector s(num_qubits);
  s.amps_(0) = Complex{0.0, 0.0};
  s.amps_(static_cast<Eigen::Index>(index)) = Complex{1.0, 0.0};
  return s;
}

Complex StateVector::inner_product(const StateVector& other) const {
  if (num_qubits_ != other.num_qubits_) {
    throw std::invalid_argument("inner product of states with different size");
  }
  return amps_.dot(other.amps_);  // Eigen's dot conjugates the left argument
}

UnitaryOp UnitaryOp::identity(int num_qubits) {
  check_qubit_count(num_qubits);
  const auto d = static_cast<Eigen::Index>(dim_of(num_qubits));
  return UnitaryOp(num_qubits, Eigen::MatrixXcd::Identity(d, d));
}

UnitaryOp UnitaryOp::from_matrix(Eigen::MatrixXcd m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument("unitary matrix must be square");
  }
  const auto d = static_cast<std::uint64_t>(m.rows());
  if ((d & (d - 1)) != 0) {
    throw std::invalid_argument("unitary dimension must be a power of two");
  }
  int nq = 0;
  while (dim_of(nq) < d) ++nq;
  UnitaryOp u(nq, std::move(m));
  if (u.unitarity_defect() > tol) {
    throw std::invalid_argument("matrix is not unitary (defect " +
                                std::to_string(u.unitarity_defect()) + ")");
  }
  return u;
}

double UnitaryOp::unitarity_defect() const {
  const Eigen::MatrixXcd gram = matrix_.adjoint() * matrix_;
  const auto d = matrix_.rows();
  return (gram - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff();
}

UnitaryOp operator*(const UnitaryOp& a, const UnitaryOp& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("composing unitaries of different dimension");
  }
  return UnitaryOp(a.num_qubits_, a.matrix_ * b.matrix_);
}

StateVector apply(const UnitaryOp& u, const StateVector& s) {
  if (u.dim() != s.dim()) {
    throw std::invalid_argument("operator dimension " + std::to_string(u.dim()) +
                                " does not match state dimension " +
                                std::to_string(s.dim()));
  }
  return StateVector(s.num_qubits(), u.matrix() * s.amplitudes(), 1e-8);
}

UnitaryOp tensor(const UnitaryOp& a, const UnitaryOp& b) {
  const auto da = static_cast<Eigen::Index>(a.dim());
  const auto db = static_cast<Eigen::Index>(b.dim());
  Eigen::MatrixXcd out(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < da; ++j) {
      out.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
    }
  }
  return UnitaryOp(a.num_qubits() + b.num_qubits(), std::move(out));
}

UnitaryOp controlled(const UnitaryOp& u, int num_controls) {
  if (num_controls < 1) {
    throw std::invalid_argument("need at least one control qubit");
  }
  const auto du = static_cast<Eigen::Index>(u.dim());
  const auto d = du << num_controls;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(d, d);
  out.block(d - du, d - du, du, du) = u.matrix();
  return UnitaryOp(u.num_qubits() + num_controls, std::move(out));
}

UnitaryOp adjoint(const UnitaryOp& u) {
  return UnitaryOp(u.num_qubits(), u.matrix().adjoint());
}

MeasurementDistribution::MeasurementDistribution(
    std::vector<std::pair<std::uint64_t, double>> probabilities)
    : entries_(std::move(probabilities)) {
  std::sort(entries_.begin(), entries_.end());
  double total = 0.0;
  for (auto& [index, p] : entries_) {
    if (p < -1e-12 || p > 1.0 + 1e-9) {
      throw std::invalid_argument("probability out of [0,1]: " +
                                  std::to_string(p));
    }
    p = std::clamp(p, 0.0, 1.0);
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-7) {
    throw std::invalid_argument("probabilities sum to " +
                                std::to_string(total) + ", expected 1");
  }
}

double MeasurementDistribution::probability(std::uint64_t index) const {
  const auto it = std::lower_bound(
      entries_.begin(), entries_.end(), index,
      [](const auto& entry, std::uint64_t key) { return entry.first < key; });
  return (it != entries_.end() && it->first == index) ? it->second : 0.0;
}

double MeasurementDistribution::total() const {
  double t = 0.0;
  for (const auto& [index, p] : entries_) t += p;
  return t;
}

MeasurementDistribution marginal_distribution(const StateVector& s,
                                              std::span<const int> qubits) {
  const int n = s.num_qubits();
  std::uint64_t seen = 0;
  for (int q : qubits) {
    if (q < 0 || q >= n) {
      throw std::invalid_argument("qubit index " + std::to_string(q) +
                                  " out of range for " + std::to_string(n) +
                                  " qubits");
    }
    if (seen & (std::uint64_t{1} << q)) {
      throw std::invalid_argument("duplicate qubit index in marginal");
    }
    seen |= std::uint64_t{1} << q;
  }
  const int m = static_cast<int>(qubits.size());
  std::vector<double> probs(std::size_t{1} << m, 0.0);
  for (std::uint64_t i = 0; i < s.dim(); ++i) {
    const double p = s.probability(i);
    if (p == 0.0) continue;
    std::uint64_t outcome = 0;
    for (int b = 0; b < m; ++b) {
      const int bit = static_cast<int>((i >> (n - 1 - qubits[b])) & 1u);
      outcome |= static_cast<std::uint64_t>(bit) << (m - 1 - b);
    }
    probs[outcome] += p;
  }
  std::vector<std::pair<std::uint64_t, double>> entries;
  for (std::uint64_t k = 0; k < probs.size(); ++k) {
    if (probs[k] > 0.0) entries.emplace_back(k, probs[k]);
  }
  return MeasurementDistribution(std::move(entries));
}

std::uint64_t sample(const MeasurementDistribution& d, std::uint64_t rng_seed) {
  if (d.size() == 0) {
    throw std::invalid_argument("sampling from an empty distribution");
  }
  auto gen = seeded_engine(rng_seed);
  const double u = uniform01(gen);
  double acc = 0.0;
  for (const auto& [index, p] : d.entries()) {
    acc += p;
    if (u < acc) return index;
  }
  return d.entries().back().first;  // guard against rounding shortfall
}

namespace gates {

namespace {

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

UnitaryOp make_gate(Eigen::MatrixXcd m) {
  return UnitaryOp::from_matrix(std::move(m), 1e-12);
}

}  // namespace

UnitaryOp identity(int num_qubits) { return UnitaryOp::identity(num_qubits); }

UnitaryOp pauli_x() {
  Eigen::MatrixXcd m(2, 2);
  m << 0, 1, 1, 0;
  return make_gate(m);
}

UnitaryOp pauli_z() {
  Eigen::MatrixXcd m(2, 2);
  m << 1, 0, 0, -1;
  return make_gate(m);
}

UnitaryOp hadamard() {
  Eigen::MatrixXcd m(2, 2);
  m << kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2;
  return make_gate(m);
}

UnitaryOp phase_s() { return phase(std::numbers::pi / 2.0); }

UnitaryOp phase(double phi) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = std::polar(1.0, phi);
  return make_gate(m);
}

UnitaryOp ry(double theta) {
  Eigen::MatrixXcd m(2, 2);
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  m << c, -s, s, c;
  return make_gate(m);
}

UnitaryOp swap_registers(int k) {
  check_qubit_count(2 * k);
  const std::uint64_t dk = dim_of(k);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(
      static_cast<Eigen::Index>(dk * dk), static_cast<Eigen::Index>(dk * dk));
  for (std::uint64_t x = 0; x < dk; ++x) {
    for (std::uint64_t y = 0; y < dk; ++y) {
      m(static_cast<Eigen::Index>(y * dk + x),
        static_cast<Eigen::Index>(x * dk + y)) = 1.0;
    }
  }
  return make_gate(std::move(m));
}

UnitaryOp diagonal_phases(const std::vector<double>& turns) {
  const auto d = turns.size();
  if (d == 0 || (d & (d - 1)) != 0) {
    throw std::invalid_argument("diagonal needs a power-of-two length");
  }
  Eigen::MatrixXcd m =
      Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t j = 0; j < d; ++j) {
    m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) =
        std::polar(1.0, 2.0 * std::numbers::pi * turns[j]);
  }
  return make_gate(std::move(m));
}

}  // namespace gates

}  // namespace qclose
