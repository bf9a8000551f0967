// Dense complex linear algebra substrate for small quantum registers:
// state vectors, unitary matrices, tensor/controlled composition, and
// projective measurement statistics in the computational basis.
//
// Conventions used throughout the library:
//   - qubit 0 is the most significant bit of a basis index, so a state
//     written |a>|b> has register `a` on the high-order side;
//   - everything is plain dense double-precision complex arithmetic.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace qclose {

using Complex = std::complex<double>;

// State norm must hold to this tolerance after every operation.
inline constexpr double kNormTol = 1e-10;
// Max-norm bound on M^dag M - I for anything claiming to be unitary.
inline constexpr double kUnitaryTol = 1e-9;

/// Normalized pure state on `num_qubits` qubits (2^n complex amplitudes).
class StateVector {
 public:
  /// The all-zeros basis state |0...0>.
  explicit StateVector(int num_qubits);

  /// Wraps an amplitude vector; length must be 2^num_qubits and the norm
  /// must already be within `norm_tol` of 1 (it is then normalized exactly).
  StateVector(int num_qubits, Eigen::VectorXcd amplitudes,
              double norm_tol = 1e-6);

  static StateVector basis_state(int num_qubits, std::uint64_t index);

  int num_qubits() const { return num_qubits_; }
  std::uint64_t dim() const { return static_cast<std::uint64_t>(amps_.size()); }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  Complex amplitude(std::uint64_t index) const { return amps_(static_cast<Eigen::Index>(index)); }
  double probability(std::uint64_t index) const { return std::norm(amplitude(index)); }

  /// <this|other>.
  Complex inner_product(const StateVector& other) const;
  double norm() const { return amps_.norm(); }

 private:
  int num_qubits_;
  Eigen::VectorXcd amps_;
};

/// Dense 2^n x 2^n unitary matrix.
class UnitaryOp {
 public:
  static UnitaryOp identity(int num_qubits);

  /// Validates unitarity to `tol` before accepting the matrix.
  static UnitaryOp from_matrix(Eigen::MatrixXcd m, double tol = kUnitaryTol);

  int num_qubits() const { return num_qubits_; }
  std::uint64_t dim() const { return static_cast<std::uint64_t>(matrix_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }

  /// max_ij |(M^dag M - I)_ij|
  double unitarity_defect() const;

  friend UnitaryOp operator*(const UnitaryOp& a, const UnitaryOp& b);

  friend UnitaryOp tensor(const UnitaryOp& a, const UnitaryOp& b);
  friend UnitaryOp controlled(const UnitaryOp& u, int num_controls);
  friend UnitaryOp adjoint(const UnitaryOp& u);

 private:
  // Trusted path for compositions of already-validated unitaries.
  UnitaryOp(int num_qubits, Eigen::MatrixXcd m)
      : num_qubits_(num_qubits), matrix_(std::move(m)) {}

  int num_qubits_;
  Eigen::MatrixXcd matrix_;
};

/// Born-rule probabilities over computational-basis outcomes of a qubit
/// subset. Stored sparsely as (index, probability) pairs sorted by index;
/// exact zeros are dropped.
class MeasurementDistribution {
 public:
  MeasurementDistribution() = default;
  explicit MeasurementDistribution(
      std::vector<std::pair<std::uint64_t, double>> probabilities);

  const std::vector<std::pair<std::uint64_t, double>>& entries() const {
    return entries_;
  }
  double probability(std::uint64_t index) const;
  double total() const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<std::pair<std::uint64_t, double>> entries_;
};

/// u * s. Throws std::invalid_argument on dimension mismatch.
StateVector apply(const UnitaryOp& u, const StateVector& s);

/// Kronecker product with `a` on the high-order qubits.
UnitaryOp tensor(const UnitaryOp& a, const UnitaryOp& b);

/// Extends u with `num_controls` control qubits on the high-order side;
/// acts as u only when every control is 1.
UnitaryOp controlled(const UnitaryOp& u, int num_controls);

/// Conjugate transpose.
UnitaryOp adjoint(const UnitaryOp& u);

/// Born distribution over the listed qubits (first listed qubit is the most
/// significant bit of the outcome index), tracing out the rest.
MeasurementDistribution marginal_distribution(const StateVector& s,
                                              std::span<const int> qubits);

/// Draws one outcome. Reproducible for a fixed seed.
std::uint64_t sample(const MeasurementDistribution& d, std::uint64_t rng_seed);

namespace gates {

UnitaryOp identity(int num_qubits = 1);
UnitaryOp pauli_x();
UnitaryOp pauli_z();
UnitaryOp hadamard();
UnitaryOp phase_s();
/// diag(1, e^{i*phi})
UnitaryOp phase(double phi);
UnitaryOp ry(double theta);
/// Exchanges two adjacent k-qubit registers.
UnitaryOp swap_registers(int k);
/// Diagonal unitary with phases exp(2*pi*i*turns[j]); handy eigenbasis-known
/// test oracle.
UnitaryOp diagonal_phases(const std::vector<double>& turns);

}  // namespace gates

}  // namespace qclose
