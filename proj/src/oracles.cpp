#include "qclose/oracles.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>

namespace qclose {

CountingOracle::CountingOracle(UnitaryOp inner)
    : inner_(std::move(inner)), counter_(std::make_shared<QueryCounter>()) {}

StateVector CountingOracle::apply(const StateVector& s) const {
  counter_->add(1);
  return qclose::apply(inner_, s);
}

StateVector CountingOracle::apply_adjoint(const StateVector& s) const {
  counter_->add(1);
  return qclose::apply(adjoint(inner_), s);
}

QueryOp::QueryOp(UnitaryOp op, std::vector<QueryCharge> charges)
    : op_(std::move(op)), charges_(std::move(charges)) {}

QueryOp::QueryOp(UnitaryOp op) : op_(std::move(op)) {}

QueryOp::QueryOp(const CountingOracle& oracle)
    : op_(oracle.inner()), charges_{{oracle.counter(), 1}} {}

void QueryOp::bill(std::uint64_t applications) const {
  for (const auto& charge : charges_) {
    charge.counter->add(charge.per_application * applications);
  }
}

StateVector QueryOp::apply(const StateVector& s) const {
  bill(1);
  return qclose::apply(op_, s);
}

std::uint64_t QueryOp::counter_total() const {
  std::uint64_t total = 0;
  std::unordered_set<const QueryCounter*> seen;
  for (const auto& charge : charges_) {
    if (seen.insert(charge.counter.get()).second) {
      total += charge.counter->count();
    }
  }
  return total;
}

PreparedPair::PreparedPair(CountingOracle phi, CountingOracle psi)
    : u_phi(std::move(phi)), u_psi(std::move(psi)) {
  if (u_phi.num_qubits() != u_psi.num_qubits()) {
    throw std::invalid_argument(
        "state-preparation oracles act on different qubit counts: " +
        std::to_string(u_phi.num_qubits()) + " vs " +
        std::to_string(u_psi.num_qubits()));
  }
}

PreparedPair::PreparedPair(UnitaryOp phi, UnitaryOp psi)
    : PreparedPair(CountingOracle(std::move(phi)),
                   CountingOracle(std::move(psi))) {}

StateVector PreparedPair::state_phi() const {
  return qclose::apply(u_phi.inner(), StateVector(num_qubits()));
}

StateVector PreparedPair::state_psi() const {
  return qclose::apply(u_psi.inner(), StateVector(num_qubits()));
}

namespace {

std::vector<QueryCharge> pair_charges(const PreparedPair& pair) {
  return {{pair.u_phi.counter(), 1}, {pair.u_psi.counter(), 1}};
}

// V = X_A (x) |0>_B<0| + sum_{j>=1} I_A (x) |j>_B<j| on k+1 qubits:
// flips the A qubit exactly on the B = 0 branch.
Eigen::MatrixXcd marking_operator(int k) {
  const auto dk = Eigen::Index{1} << k;
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(2 * dk, 2 * dk);
  v(dk, 0) = 1.0;  // |1,0> <- |0,0>
  v(0, dk) = 1.0;  // |0,0> <- |1,0>
  for (Eigen::Index j = 1; j < dk; ++j) {
    v(j, j) = 1.0;
    v(dk + j, dk + j) = 1.0;
  }
  return v;
}

}  // namespace

QueryOp build_u(const PreparedPair& pair) {
  UnitaryOp u = adjoint(pair.u_phi.inner()) * pair.u_psi.inner();
  return QueryOp(std::move(u), pair_charges(pair));
}

QueryOp build_w(const PreparedPair& pair) {
  const int k = pair.num_qubits();
  const Eigen::MatrixXcd u =
      adjoint(pair.u_phi.inner()).matrix() * pair.u_psi.inner().matrix();
  const UnitaryOp iu = tensor(UnitaryOp::identity(1),
                              UnitaryOp::from_matrix(u, 1e-8));
  Eigen::MatrixXcd w = marking_operator(k) * iu.matrix();
  return QueryOp(UnitaryOp::from_matrix(std::move(w), 1e-8),
                 pair_charges(pair));
}

QueryOp build_w_prime(const PreparedPair& pair) {
  QueryOp w = build_w(pair);
  const UnitaryOp flip =
      tensor(gates::pauli_x(), UnitaryOp::identity(pair.num_qubits()));
  return QueryOp(flip * w.op(), pair_charges(pair));
}

QueryOp build_grover_iterate(const QueryOp& u) {
  if (u.num_qubits() < 2) {
    throw std::invalid_argument(
        "Grover iterate needs a 1-qubit A register above a nonempty B register");
  }
  const auto d = static_cast<Eigen::Index>(u.dim());
  const auto half = d / 2;
  const Eigen::MatrixXcd& m = u.op().matrix();

  // R1 = I - 2|0><0| (x) |0><0|: sign flip on the single |0...0> component.
  Eigen::MatrixXcd q = m.adjoint();
  q.row(0) *= -1.0;       // R1 * U^dag
  q = m * q;              // U * R1 * U^dag
  q.leftCols(half) *= -1.0;  // ... * R2, R2 = I - 2|0>_A<0| (x) I_B
  q *= -1.0;

  std::vector<QueryCharge> charges = u.charges();
  for (auto& charge : charges) charge.per_application *= 2;
  return QueryOp(UnitaryOp::from_matrix(std::move(q), 1e-8),
                 std::move(charges));
}

QueryOp build_grover_iterate(const CountingOracle& u) {
  return build_grover_iterate(QueryOp(u));
}

QueryOp build_swap_test_op(const PreparedPair& pair) {
  const int k = pair.num_qubits();
  const UnitaryOp h_layer =
      tensor(gates::hadamard(), UnitaryOp::identity(2 * k));
  const UnitaryOp cswap = controlled(gates::swap_registers(k), 1);
  const UnitaryOp prep = tensor(
      gates::hadamard(), tensor(pair.u_phi.inner(), pair.u_psi.inner()));
  return QueryOp(h_layer * cswap * prep, pair_charges(pair));
}

UnitaryOp state_preparation_oracle(const StateVector& s) {
  const auto dim = static_cast<Eigen::Index>(s.dim());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  m.col(0) = s.amplitudes();

  // Complete to a unitary: modified Gram-Schmidt of the standard basis
  // vectors in index order against the columns accepted so far.
  Eigen::Index next = 1;
  for (Eigen::Index pivot = 0; pivot < dim && next < dim; ++pivot) {
    Eigen::VectorXcd candidate = Eigen::VectorXcd::Zero(dim);
    candidate(pivot) = 1.0;
    for (Eigen::Index c = 0; c < next; ++c) {
      candidate -= m.col(c).dot(candidate) * m.col(c);
    }
    const double residual = candidate.norm();
    if (residual > 1e-8) {
      m.col(next++) = candidate / residual;
    }
  }
  if (next != dim) {
    throw std::invalid_argument("failed to complete preparation oracle");
  }
  return UnitaryOp::from_matrix(std::move(m), 1e-9);
}

UnitaryOp build_distribution_oracle(std::vector<double> probabilities) {
  if (probabilities.empty()) {
    throw std::invalid_argument("empty probability vector");
  }
  double total = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0)) {
      throw std::invalid_argument("negative probability entry");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("probabilities sum to " +
                                std::to_string(total) + ", expected 1");
  }
  std::size_t d = 1;
  while (d < probabilities.size()) d <<= 1;
  probabilities.resize(d, 0.0);

  int num_qubits = 0;
  while ((std::size_t{1} << num_qubits) < d) ++num_qubits;
  Eigen::VectorXcd amps(static_cast<Eigen::Index>(d));
  for (std::size_t j = 0; j < d; ++j) {
    amps(static_cast<Eigen::Index>(j)) = std::sqrt(probabilities[j] / total);
  }
  return state_preparation_oracle(StateVector(num_qubits, std::move(amps), 1e-9));
}

}  // namespace qclose
