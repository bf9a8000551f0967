// Seeded randomness helpers. Every stochastic operation in the library takes
// an explicit 64-bit seed; independent streams are derived by hashing
// (seed, stream) with splitmix64 so trials stay reproducible and mergeable.

#pragma once

#include "qclose/linalg.hpp"

#include <cstdint>
#include <random>

namespace qclose {

std::uint64_t splitmix64_next(std::uint64_t& state);

/// Deterministic sub-seed for stream `stream` of a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

std::mt19937_64 seeded_engine(std::uint64_t seed);

/// Uniform double in [0,1) with 53 random bits (platform-independent,
/// unlike std::uniform_real_distribution).
double uniform01(std::mt19937_64& gen);

/// Standard normal via Box-Muller on uniform01 draws.
double gaussian(std::mt19937_64& gen);

/// Haar-random unitary: QR of a complex Gaussian matrix with the R diagonal
/// phases folded into Q.
UnitaryOp haar_unitary(int num_qubits, std::uint64_t seed);

/// Haar-random pure state (first column of a Haar unitary).
StateVector haar_state(int num_qubits, std::uint64_t seed);

}  // namespace qclose
