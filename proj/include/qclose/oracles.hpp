// Query-counted state-preparation oracles and the composite operators the
// estimators run on: U = U_phi^dag U_psi, the marking operator W and its
// fidelity twin W', the Grover iterate Q, and distribution-encoding oracles.
//
// Accounting convention: one query per application of an oracle, its
// adjoint, or any controlled variant. A composite operator carries a fixed
// charge list that is billed against the wrapped oracles' counters every
// time the composite (or a controlled power of it) is applied.

#pragma once

#include "qclose/linalg.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace qclose {

/// Monotone query counter, shared by all copies of an oracle.
class QueryCounter {
 public:
  void add(std::uint64_t n) { count_ += n; }
  std::uint64_t count() const { return count_; }

 private:
  std::uint64_t count_ = 0;
};

/// A unitary whose applications are query-counted. Copies share the counter.
class CountingOracle {
 public:
  explicit CountingOracle(UnitaryOp inner);

  const UnitaryOp& inner() const { return inner_; }
  int num_qubits() const { return inner_.num_qubits(); }
  std::uint64_t query_count() const { return counter_->count(); }
  const std::shared_ptr<QueryCounter>& counter() const { return counter_; }

  StateVector apply(const StateVector& s) const;          // 1 query
  StateVector apply_adjoint(const StateVector& s) const;  // 1 query

  /// Manual billing for applications performed through composites.
  void charge(std::uint64_t queries) const { counter_->add(queries); }

 private:
  UnitaryOp inner_;
  std::shared_ptr<QueryCounter> counter_;
};

struct QueryCharge {
  std::shared_ptr<QueryCounter> counter;
  std::uint64_t per_application = 0;
};

/// Composite unitary with attached query accounting. Applying it once (in
/// any form: plain, adjoint, or controlled) bills every charge once.
class QueryOp {
 public:
  QueryOp(UnitaryOp op, std::vector<QueryCharge> charges);
  /// Uncounted test operator (empty charge list).
  explicit QueryOp(UnitaryOp op);
  explicit QueryOp(const CountingOracle& oracle);

  const UnitaryOp& op() const { return op_; }
  int num_qubits() const { return op_.num_qubits(); }
  std::uint64_t dim() const { return op_.dim(); }
  const std::vector<QueryCharge>& charges() const { return charges_; }

  void bill(std::uint64_t applications) const;
  StateVector apply(const StateVector& s) const;  // bills one application

  /// Current sum over the distinct counters this operator bills. Snapshot
  /// before/after a run to get the run's total query consumption.
  std::uint64_t counter_total() const;

 private:
  UnitaryOp op_;
  std::vector<QueryCharge> charges_;
};

/// Two same-sized state-preparation oracles, |phi> = U_phi|0>, |psi> = U_psi|0>.
struct PreparedPair {
  CountingOracle u_phi;
  CountingOracle u_psi;

  PreparedPair(CountingOracle phi, CountingOracle psi);
  PreparedPair(UnitaryOp phi, UnitaryOp psi);

  int num_qubits() const { return u_phi.num_qubits(); }

  // Classical peeks used by ground-truth oracles; not query-counted.
  StateVector state_phi() const;
  StateVector state_psi() const;

  std::uint64_t total_queries() const {
    return u_phi.query_count() + u_psi.query_count();
  }
};

/// U = U_phi^dag U_psi, so <0|U|0> = <phi|psi>. Each application bills one
/// query to each oracle of the pair.
QueryOp build_u(const PreparedPair& pair);

/// The (k+1)-qubit marking operator. W|0>|0> has the trace distance between
/// the pair's states as the amplitude magnitude of the A=0 branch.
QueryOp build_w(const PreparedPair& pair);

/// W' = (X x I) W; the amplitude magnitude of its A=0 branch is the square
/// root fidelity.
QueryOp build_w_prime(const PreparedPair& pair);

/// Grover iterate Q = -U (I - 2|0><0| x |0><0|) U^dag (I - 2|0><0| x I),
/// where the A register is the most significant qubit. Each application
/// bills two of u's applications (one U, one U^dag).
QueryOp build_grover_iterate(const QueryOp& u);
QueryOp build_grover_iterate(const CountingOracle& u);

/// Hadamard / controlled-SWAP / Hadamard circuit with the pair's oracles
/// folded in. Pr[A=0] of op|0> is (1 + F^2)/2; one query to each oracle per
/// application.
QueryOp build_swap_test_op(const PreparedPair& pair);

/// Any unitary with first column s, completed by Gram-Schmidt against the
/// standard basis in index order. Preparation oracle for an arbitrary
/// classically known state.
UnitaryOp state_preparation_oracle(const StateVector& s);

/// Any unitary whose first column is (sqrt(p_0), ..., sqrt(p_{n-1}))^T,
/// completed by Gram-Schmidt against the standard basis in index order.
/// Non-power-of-two lengths are zero-padded up.
UnitaryOp build_distribution_oracle(std::vector<double> probabilities);

}  // namespace qclose
